//! Benchmarks of the numerical kernels: spectra, shot-noise quadrature,
//! master-equation steps and split-step condensate evolution.

use std::hint::black_box;

use chipnoise_core::constants::{MICRON, V_FERMI_CU};
use chipnoise_core::gpe::{CondensateState, GpeStepper, Grid, NoiseGenerator, NoiseSource};
use chipnoise_core::numerics::bessel::k0_k1_scaled;
use chipnoise_core::spectra::{halfspace_spectrum, normalized_shot_spectrum};
use chipnoise_core::transport::{MasterStepper, ScatteringKernel, WignerState};
use chipnoise_core::{CorrelationModel, ElectronVelocityDist, Material};
use criterion::{BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn spectra(c: &mut Criterion) {
    let cu = Material::copper(300.0);
    c.bench_function("halfspace_spectrum", |b| b.iter(|| halfspace_spectrum(&cu, black_box(MICRON), 2e6 * std::f64::consts::PI)));
    c.bench_function("bessel_k0_k1", |b| b.iter(|| k0_k1_scaled(black_box(3.7))));
    let fd = ElectronVelocityDist::fermi_dirac_thermal(V_FERMI_CU, 0.0, 300.0).unwrap();
    let mw = ElectronVelocityDist::maxwell(V_FERMI_CU, 0.0).unwrap();
    let omega = 0.5 * V_FERMI_CU / MICRON;
    c.bench_function("shot_spectrum_fermi_dirac", |b| b.iter(|| normalized_shot_spectrum(MICRON, MICRON, 0.0, black_box(omega), &fd)));
    c.bench_function("shot_spectrum_maxwell", |b| b.iter(|| normalized_shot_spectrum(MICRON, MICRON, 0.0, black_box(omega), &mw)));
}

pub fn master_equation(c: &mut Criterion) {
    let mut group = c.benchmark_group("master_step");
    for n_p in [128usize, 512] {
        let state = WignerState::gaussian(32, 40.0, n_p, 1.0, 1.0, 2.0, 0.25, 0.0).unwrap();
        let model = CorrelationModel::lorentzian(1.0, 1.0).unwrap();
        let kernel = ScatteringKernel::from_correlation(&model, 1.0, 40.0, n_p).unwrap();
        let stepper = MasterStepper::new(&state, &kernel, 0.01).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n_p), &n_p, |b, _| {
            let mut s = state.clone();
            b.iter(|| stepper.step(&mut s));
        });
    }
    group.finish();
}

pub fn condensate(c: &mut Criterion) {
    let mut group = c.benchmark_group("gpe_step");
    for n in [512usize, 1024] {
        let grid = Grid::new(n, 40.0).unwrap();
        let dt = 0.4 / grid.k_max().powi(2);
        let generator = NoiseGenerator::new(grid, 0.1f64.sqrt(), 10.0).unwrap();
        let mut stepper = GpeStepper::new(grid, 10.0, dt, None).unwrap();
        let mut state = CondensateState::gaussian(grid, 1.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                let mut source = NoiseSource { generator: &generator, rng: &mut rng };
                stepper.step(&mut state.psi, Some(&mut source));
            })
        });
    }
    group.finish();
}

pub fn benchmarks(c: &mut Criterion) {
    spectra(c);
    master_equation(c);
    condensate(c);
}
