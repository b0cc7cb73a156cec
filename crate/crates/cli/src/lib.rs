//! Library half of the `jqf-sim` binary: configuration parsing, experiment
//! dispatch and result files. Kept separate from `main` so integration
//! tests can drive it without spawning processes.

pub mod commands;
pub mod config;

pub use commands::{analytic_table, execute, Command, Outcome};
pub use config::{parse_config, parse_config_str, RunConfig, SCHEMA_VERSION};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] jqf_core::Error),

    /// Some sweep points failed; rows for the rest were already written.
    #[error("{failed} of {total} sweep points failed, first at {param}: {source}")]
    PartialSweep { failed: usize, total: usize, param: f64, source: jqf_core::Error },
}

impl CliError {
    /// Tag for the machine-readable error line.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::PartialSweep { .. } => "partial-sweep",
        }
    }

    /// `error kind=<tag> message="<text>"`, quotes and newlines escaped.
    pub fn machine_line(&self) -> String {
        let msg = self.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
        format!("error kind={} message=\"{msg}\"", self.kind())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
