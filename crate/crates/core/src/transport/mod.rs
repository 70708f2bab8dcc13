//! Spatial decoherence along the guide: momentum-transfer rates, the
//! phase-space master equation and coherence functions.

mod coherence;
mod kernel;
mod wigner;

pub use coherence::{amplitude_coherence, analytic_coherence, spectrum_flatness};
pub use kernel::{differential_rate_generic, differential_rate_shot, shot_rate_scale, ScatteringKernel, TransportParams};
pub use wigner::{evolve_master, MasterStepper, WignerState};
