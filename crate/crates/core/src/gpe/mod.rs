//! Stochastic one-dimensional Gross–Pitaevskii simulation in
//! harmonic-oscillator units (`ħ = M = Ω = 1`).

mod ensemble;
mod evolve;
mod grid;
mod ground;
mod noise;

pub use ensemble::{coherence_width, run_ensemble, CondensateConfig, EnsembleResult, Snapshot};
pub use evolve::{evolve_gpe, GpeStepper, NoiseSource};
pub use grid::{CondensateState, Grid};
pub use ground::{ground_state, GroundStateOptions};
pub use noise::{generate_noise_step, NoiseGenerator};
