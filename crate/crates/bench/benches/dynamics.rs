use criterion::{criterion_group, criterion_main, Criterion};
use jqf_core::model::{master_rhs, Generator};
use jqf_core::units::ghz_to_angular;
use jqf_core::{evolve, DensityMatrix, DriveEnvelope, Frame, SimConfig};

fn rhs(c: &mut Criterion) {
    let model = jqf_bench::reference_model(4, 2);
    let drive = DriveEnvelope::Gaussian { e_amp: 30.0, t0: 20.0, sigma: 10.0 };
    let wd = ghz_to_angular(5.0024);
    let rho = DensityMatrix::maximally_mixed(model.dim());

    c.bench_function("master_rhs_reference_8", |b| {
        b.iter(|| master_rhs(&rho, 17.0, &model, &drive, wd, Frame::RotatingRwa).unwrap())
    });

    let mut gen = Generator::new(&model, wd, Frame::RotatingRwa);
    let mut out = rho.matrix().clone();
    c.bench_function("generator_rhs_8", |b| {
        b.iter(|| gen.rhs_into(17.0, &drive, rho.matrix(), &mut out))
    });
}

fn pulse(c: &mut Criterion) {
    let mut group = c.benchmark_group("evolve");
    group.sample_size(10);
    for jqf_levels in [2, 4] {
        let model = jqf_bench::reference_model(4, jqf_levels);
        let e = model.amplitude_for_rabi(ghz_to_angular(0.0237)).unwrap();
        let drive = DriveEnvelope::Gaussian { e_amp: e, t0: 20.0, sigma: 10.0 };
        let cfg = SimConfig {
            t_end: 50.0,
            dt: jqf_core::integrator::suggest_dt(&model, &drive, Frame::RotatingRwa),
            jqf_levels,
            ..SimConfig::default()
        };
        group.bench_function(format!("gaussian_pulse_50ns_jqf{jqf_levels}"), |b| {
            b.iter(|| evolve(&model, &drive, ghz_to_angular(5.0024), &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, rhs, pulse);
criterion_main!(benches);
