//! Two-transmon waveguide model: static Hamiltonian, collective decay matrix
//! ξ, drive couplings, and the density-matrix equation of motion.
//!
//! The waveguide has been traced out. What remains is a Markovian generator
//!
//! ```text
//! dρ/dt = −i[H(t), ρ] + Σ_mn ξ_mn (c_n ρ c_m† − c_m† c_n ρ) + ξ*_mn (c_m ρ c_n† − ρ c_n† c_m)
//! ```
//!
//! which is the Schrödinger-picture dual of the Heisenberg equation
//! `dO/dt = i[H, O] + Σ_mn ξ_mn [c_m†, O] c_n − ξ*_mn c_n† [c_m, O]`.
//! Both are implemented ([`master_rhs`], [`heisenberg_rhs`]) so the duality
//! can be checked directly.

use nalgebra::DMatrix;

use crate::drives::DriveEnvelope;
use crate::error::{Error, Result};
use crate::hilbert::{annihilation, embed, projector, DensityMatrix, OperatorMatrix, C64};

/// One anharmonic mode coupled to the line.
///
/// `phase` is `ω_q·l`, the position of the qubit on the line measured in
/// radians of the common resonance wavelength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransmonSpec {
    pub omega: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub phase: f64,
    pub n_levels: usize,
}

impl TransmonSpec {
    pub fn new(omega: f64, alpha: f64, gamma: f64, phase: f64, n_levels: usize) -> Result<Self> {
        let spec = Self { omega, alpha, gamma, phase, n_levels };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "line coupling gamma must be >= 0, got {}",
                self.gamma
            )));
        }
        if self.n_levels < 2 {
            return Err(Error::InvalidDimension(format!(
                "transmon truncation needs at least 2 levels, got {}",
                self.n_levels
            )));
        }
        if ![self.omega, self.alpha, self.gamma, self.phase]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(Error::InvalidArgument("transmon parameters must be finite".into()));
        }
        if self.alpha > 0.0 {
            log::warn!("positive anharmonicity {} rad/ns; transmons have alpha < 0", self.alpha);
        }
        Ok(())
    }

    pub fn with_levels(mut self, n_levels: usize) -> Self {
        self.n_levels = n_levels;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// Frame rotating at the drive frequency, counter-rotating drive terms dropped.
    RotatingRwa,
    /// Lab frame with the full `2E_d(t)cos(ω_d t)` drive.
    Lab,
}

impl std::fmt::Display for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Frame::RotatingRwa => "rotating-rwa",
            Frame::Lab => "lab",
        })
    }
}

impl std::str::FromStr for Frame {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rotating-rwa" => Ok(Frame::RotatingRwa),
            "lab" => Ok(Frame::Lab),
            other => Err(Error::InvalidArgument(format!(
                "unknown frame `{other}` (expected `rotating-rwa` or `lab`)"
            ))),
        }
    }
}

/// `ξ_mn = (√(γ_m γ_n)/2)(e^{i(φ_m+φ_n)} + e^{i|φ_m−φ_n|})`.
pub fn coupling_matrix_xi(specs: &[TransmonSpec]) -> DMatrix<C64> {
    let n = specs.len();
    DMatrix::from_fn(n, n, |m, k| {
        let (a, b) = (&specs[m], &specs[k]);
        let pref = 0.5 * (a.gamma * b.gamma).sqrt();
        (C64::from_polar(1.0, a.phase + b.phase) + C64::from_polar(1.0, (a.phase - b.phase).abs()))
            * pref
    })
}

/// `κ = √(2γ)·cos φ`; the drive on a qubit is `κ·E_in(t)`.
pub fn drive_coefficient(spec: &TransmonSpec) -> f64 {
    (2.0 * spec.gamma).sqrt() * spec.phase.cos()
}

/// `Σ_m [ω_m n̂_m + (α_m/2) n̂_m(n̂_m − 1)]` on the joint space.
pub fn hamiltonian_static(specs: &[TransmonSpec]) -> Result<OperatorMatrix> {
    let omegas: Vec<f64> = specs.iter().map(|s| s.omega).collect();
    ladder_hamiltonian(specs, &omegas)
}

fn ladder_hamiltonian(specs: &[TransmonSpec], omegas: &[f64]) -> Result<OperatorMatrix> {
    if specs.is_empty() {
        return Err(Error::InvalidDimension("model needs at least one transmon".into()));
    }
    let dims: Vec<usize> = specs.iter().map(|s| s.n_levels).collect();
    let total: usize = dims.iter().product();
    let mut h = OperatorMatrix::zeros(total);
    for (m, (spec, &omega)) in specs.iter().zip(omegas).enumerate() {
        let local: Vec<f64> = (0..spec.n_levels)
            .map(|n| {
                let n = n as f64;
                omega * n + 0.5 * spec.alpha * n * (n - 1.0)
            })
            .collect();
        let term = embed(&OperatorMatrix::from_real_diagonal(&local), m, &dims)?;
        h = &h + &term;
    }
    Ok(h)
}

/// Assembled model. Subsystem 0 is the data qubit, subsystem 1 (if present) the filter.
#[derive(Debug, Clone)]
pub struct SystemModel {
    specs: Vec<TransmonSpec>,
    omega_q: f64,
    dims: Vec<usize>,
    xi: DMatrix<C64>,
    lowering: Vec<OperatorMatrix>,
    h_static: OperatorMatrix,
    drive_coeffs: Vec<f64>,
    drive_operator: OperatorMatrix,
}

impl SystemModel {
    pub fn new(specs: Vec<TransmonSpec>) -> Result<Self> {
        if specs.is_empty() {
            return Err(Error::InvalidDimension("model needs at least one transmon".into()));
        }
        for s in &specs {
            s.validate()?;
        }
        let omega_q = specs[0].omega;
        if specs.iter().any(|s| (s.omega - omega_q).abs() > 1e-12 * omega_q.abs().max(1.0)) {
            log::warn!(
                "transmon frequencies differ; using the data-qubit frequency {omega_q} rad/ns as the common reference"
            );
        }
        let dims: Vec<usize> = specs.iter().map(|s| s.n_levels).collect();
        let lowering = specs
            .iter()
            .enumerate()
            .map(|(m, s)| embed(&annihilation(s.n_levels)?, m, &dims))
            .collect::<Result<Vec<_>>>()?;
        let xi = coupling_matrix_xi(&specs);
        let h_static = hamiltonian_static(&specs)?;
        let drive_coeffs: Vec<f64> = specs.iter().map(drive_coefficient).collect();
        let total: usize = dims.iter().product();
        let mut drive_operator = OperatorMatrix::zeros(total);
        for (c, &k) in lowering.iter().zip(&drive_coeffs) {
            drive_operator = &drive_operator + &(c + &c.dagger()).scale_real(k);
        }
        Ok(Self { specs, omega_q, dims, xi, lowering, h_static, drive_coeffs, drive_operator })
    }

    /// Data qubit alone, or data qubit plus filter.
    pub fn data_qubit_with_filter(dq: TransmonSpec, jqf: Option<TransmonSpec>) -> Result<Self> {
        let mut specs = vec![dq];
        specs.extend(jqf);
        Self::new(specs)
    }

    pub fn specs(&self) -> &[TransmonSpec] {
        &self.specs
    }

    pub fn omega_q(&self) -> f64 {
        self.omega_q
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.h_static.dim()
    }

    pub fn dq_levels(&self) -> usize {
        self.dims[0]
    }

    pub fn has_filter(&self) -> bool {
        self.specs.len() > 1
    }

    pub fn xi(&self) -> &DMatrix<C64> {
        &self.xi
    }

    pub fn lowering_ops(&self) -> &[OperatorMatrix] {
        &self.lowering
    }

    pub fn h_static(&self) -> &OperatorMatrix {
        &self.h_static
    }

    pub fn drive_coeffs(&self) -> &[f64] {
        &self.drive_coeffs
    }

    /// `Σ_m κ_m (c_m + c_m†)`.
    pub fn drive_operator(&self) -> &OperatorMatrix {
        &self.drive_operator
    }

    /// Static Hamiltonian in the frame rotating at `omega_d` (each `ω_m → ω_m − ω_d`).
    pub fn hamiltonian_rotating(&self, omega_d: f64) -> OperatorMatrix {
        let shifted: Vec<f64> = self.specs.iter().map(|s| s.omega - omega_d).collect();
        ladder_hamiltonian(&self.specs, &shifted).expect("specs validated at construction")
    }

    /// Scalar multiplying [`Self::drive_operator`] at time `t`.
    pub fn drive_factor(drive: &DriveEnvelope, t: f64, omega_d: f64, frame: Frame) -> f64 {
        match frame {
            Frame::RotatingRwa => drive.value(t),
            Frame::Lab => 2.0 * drive.value(t) * (omega_d * t).cos(),
        }
    }

    /// Full `H(t)` in the chosen frame.
    pub fn hamiltonian(&self, t: f64, drive: &DriveEnvelope, omega_d: f64, frame: Frame) -> OperatorMatrix {
        let h0 = match frame {
            Frame::RotatingRwa => self.hamiltonian_rotating(omega_d),
            Frame::Lab => self.h_static.clone(),
        };
        let f = Self::drive_factor(drive, t, omega_d, frame);
        &h0 + &self.drive_operator.scale_real(f)
    }

    /// `Π_level ⊗ I` on the data qubit.
    pub fn dq_projector(&self, level: usize) -> Result<OperatorMatrix> {
        embed(&projector(level, self.dims[0])?, 0, &self.dims)
    }

    /// Populations of each data-qubit level, traced over the filter.
    pub fn dq_populations(&self, rho: &DensityMatrix) -> Vec<f64> {
        let inner: usize = self.dims[1..].iter().product();
        let diag = rho.matrix().diagonal();
        (0..self.dims[0])
            .map(|j| (0..inner).map(|k| diag[j * inner + k].re).sum())
            .collect()
    }

    /// Angular Rabi rate `√(2γ₁)cos φ₁·E` of the data qubit for amplitude `e_amp`.
    pub fn rabi_rate(&self, e_amp: f64) -> f64 {
        self.drive_coeffs[0] * e_amp
    }

    /// Inverse of [`Self::rabi_rate`].
    pub fn amplitude_for_rabi(&self, rabi: f64) -> Result<f64> {
        let k = self.drive_coeffs[0];
        if k.abs() < 1e-300 {
            return Err(Error::DivisionByZero("data qubit sits at a drive node"));
        }
        Ok(rabi / k)
    }

    /// The same model with the given truncations (filter levels ignored if absent).
    pub fn with_levels(&self, dq_levels: usize, jqf_levels: usize) -> Result<Self> {
        let mut specs = self.specs.clone();
        specs[0].n_levels = dq_levels;
        if let Some(j) = specs.get_mut(1) {
            j.n_levels = jqf_levels;
        }
        Self::new(specs)
    }

    /// The data qubit alone, filter removed.
    pub fn without_filter(&self) -> Result<Self> {
        Self::new(vec![self.specs[0]])
    }

    /// Largest angular rate the drive can impose on any mode, for step-size selection.
    pub fn max_drive_rate(&self, e_amp: f64, frame: Frame) -> f64 {
        let scale = match frame {
            Frame::RotatingRwa => 1.0,
            Frame::Lab => 2.0,
        };
        self.specs
            .iter()
            .zip(&self.drive_coeffs)
            .map(|(s, k)| scale * (k * e_amp).abs() * ((s.n_levels - 1) as f64).sqrt())
            .fold(0.0, f64::max)
    }
}

fn check_dim(model: &SystemModel, m: &DMatrix<C64>) -> Result<()> {
    if m.nrows() != model.dim() || m.ncols() != model.dim() {
        return Err(Error::InvalidDimension(format!(
            "matrix is {}x{}, model dim is {}",
            m.nrows(),
            m.ncols(),
            model.dim()
        )));
    }
    Ok(())
}

/// Reference right-hand side `dρ/dt`, evaluated term by term.
pub fn master_rhs(
    rho: &DensityMatrix,
    t: f64,
    model: &SystemModel,
    drive: &DriveEnvelope,
    omega_d: f64,
    frame: Frame,
) -> Result<OperatorMatrix> {
    let r = rho.matrix();
    check_dim(model, r)?;
    let h = model.hamiltonian(t, drive, omega_d, frame);
    let h = h.matrix();
    let mut out = (h * r - r * h) * C64::new(0.0, -1.0);
    let c = &model.lowering;
    for m in 0..c.len() {
        let cm = c[m].matrix();
        let cm_d = cm.adjoint();
        for (n, cn) in c.iter().enumerate() {
            let cn = cn.matrix();
            let cn_d = cn.adjoint();
            let x = model.xi[(m, n)];
            out += (cn * r * &cm_d - &cm_d * cn * r) * x;
            out += (cm * r * &cn_d - r * &cn_d * cm) * x.conj();
        }
    }
    OperatorMatrix::from_matrix(out)
}

/// Heisenberg-picture generator `dO/dt` for a system operator.
pub fn heisenberg_rhs(
    op: &OperatorMatrix,
    t: f64,
    model: &SystemModel,
    drive: &DriveEnvelope,
    omega_d: f64,
    frame: Frame,
) -> Result<OperatorMatrix> {
    let o = op.matrix();
    check_dim(model, o)?;
    let h = model.hamiltonian(t, drive, omega_d, frame);
    let h = h.matrix();
    let mut out = (h * o - o * h) * C64::new(0.0, 1.0);
    let c = &model.lowering;
    for m in 0..c.len() {
        let cm = c[m].matrix();
        let cm_d = cm.adjoint();
        let comm_cm_d = &cm_d * o - o * &cm_d;
        let comm_cm = cm * o - o * cm;
        for (n, cn) in c.iter().enumerate() {
            let cn = cn.matrix();
            let x = model.xi[(m, n)];
            out += (&comm_cm_d * cn) * x;
            out -= (cn.adjoint() * &comm_cm) * x.conj();
        }
    }
    OperatorMatrix::from_matrix(out)
}

/// Nonzero `(row, col, value)` entries of a matrix.
type Sparse = Vec<(usize, usize, C64)>;

/// Precomputed form of [`master_rhs`] for repeated evaluation:
/// `dρ/dt = Kρ + (Kρ)† + Σ_k w_k L_k ρ L_k†` with `K = −iH(t) − Σ ξ_mn c_m† c_n`.
///
/// `K` and the `L_k` are stored as coordinate lists; for the transmon
/// ladders most entries vanish.
#[derive(Debug, Clone)]
pub struct Generator {
    frame: Frame,
    omega_d: f64,
    dim: usize,
    /// `(row, col, static part, drive part)` of `K`; the drive part is
    /// `−i Σ κ_m (c_m + c_m†)`, scaled by the drive factor at each call.
    k_entries: Vec<(usize, usize, C64, C64)>,
    /// `(w_k, nonzeros of L_k)`.
    jumps: Vec<(f64, Sparse)>,
    k_now: Sparse,
    buf: DMatrix<C64>,
}

fn nonzeros(m: &DMatrix<C64>) -> Sparse {
    let mut out = Vec::new();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)];
            if v != C64::new(0.0, 0.0) {
                out.push((i, j, v));
            }
        }
    }
    out
}

impl Generator {
    pub fn new(model: &SystemModel, omega_d: f64, frame: Frame) -> Self {
        let h0 = match frame {
            Frame::RotatingRwa => model.hamiltonian_rotating(omega_d),
            Frame::Lab => model.h_static.clone(),
        };
        let dim = model.dim();
        let minus_i = C64::new(0.0, -1.0);
        let c = &model.lowering;
        let mut a = DMatrix::zeros(dim, dim);
        for m in 0..c.len() {
            for n in 0..c.len() {
                a += c[m].matrix().adjoint() * c[n].matrix() * model.xi[(m, n)];
            }
        }
        let k_static = h0.matrix() * minus_i - a;
        let k_drive = model.drive_operator.matrix() * minus_i;
        let mut k_entries = Vec::new();
        for j in 0..dim {
            for i in 0..dim {
                let (s, d) = (k_static[(i, j)], k_drive[(i, j)]);
                if s != C64::new(0.0, 0.0) || d != C64::new(0.0, 0.0) {
                    k_entries.push((i, j, s, d));
                }
            }
        }

        // Σ_nm G_nm c_n ρ c_m† with G_nm = ξ_mn + ξ*_nm, diagonalized into jump operators.
        let n_q = c.len();
        let g = DMatrix::from_fn(n_q, n_q, |n, m| model.xi[(m, n)] + model.xi[(n, m)].conj());
        let eig = g.symmetric_eigen();
        let scale = eig.eigenvalues.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let mut jumps = Vec::new();
        for k in 0..n_q {
            let w = eig.eigenvalues[k];
            if w.abs() <= 1e-14 * scale || w == 0.0 {
                continue;
            }
            let v = eig.eigenvectors.column(k);
            let mut l = DMatrix::zeros(dim, dim);
            for n in 0..n_q {
                l += c[n].matrix() * v[n];
            }
            jumps.push((w, nonzeros(&l)));
        }
        let k_now = Vec::with_capacity(k_entries.len());
        Self { frame, omega_d, dim, k_entries, jumps, k_now, buf: DMatrix::zeros(dim, dim) }
    }

    pub fn n_jumps(&self) -> usize {
        self.jumps.len()
    }

    /// Writes `dρ/dt` at time `t` into `out`. `rho` must be Hermitian; the
    /// result is Hermitian to the last bit.
    pub fn rhs_into(&mut self, t: f64, drive: &DriveEnvelope, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let n = self.dim;
        let f = SystemModel::drive_factor(drive, t, self.omega_d, self.frame);
        self.k_now.clear();
        for &(i, j, s, d) in &self.k_entries {
            let v = if f != 0.0 { s + d * f } else { s };
            if v != C64::new(0.0, 0.0) {
                self.k_now.push((i, j, v));
            }
        }
        let r = rho.as_slice();

        // out = Kρ, then out ← out + out†.
        let o = out.as_mut_slice();
        o.fill(C64::new(0.0, 0.0));
        sparse_times_dense(&self.k_now, r, o, n);
        for j in 0..n {
            for i in 0..=j {
                let s = o[i + j * n] + o[j + i * n].conj();
                o[i + j * n] = s;
                o[j + i * n] = s.conj();
            }
        }

        let b = self.buf.as_mut_slice();
        for (w, l) in &self.jumps {
            // buf = Lρ, out += w·buf·L†.
            b.fill(C64::new(0.0, 0.0));
            sparse_times_dense(l, r, b, n);
            for &(j, k, v) in l {
                let c = v.conj() * *w;
                let (src, dst) = (&b[k * n..(k + 1) * n], &mut o[j * n..(j + 1) * n]);
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += s * c;
                }
            }
        }
    }
}

/// `out += S·X` for sparse `S` and column-major `n×n` `X`.
fn sparse_times_dense(s: &[(usize, usize, C64)], x: &[C64], out: &mut [C64], n: usize) {
    for &(i, k, v) in s {
        for j in 0..n {
            out[i + j * n] += v * x[k + j * n];
        }
    }
}
