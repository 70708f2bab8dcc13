//! Magnetic noise spectra and spatial correlation models.
//!
//! Spectra follow the two-sided convention `S_αβ(ω) = ∫dt e^{iωt} ⟨B_α(t) B_β(0)⟩`
//! in T²/Hz (i.e. T²·s).

mod correlation;
mod current;
mod tensor;
mod thermal;
mod velocity;

pub use correlation::{correlation_length, nearfield_correlation, nearfield_lorentzian_length, CorrelationForm, CorrelationModel};
pub use current::{current_noise_field_spectrum, current_noise_tensor, normalized_shot_spectrum, shot_noise_level, shot_noise_spectrum};
pub use tensor::{Axes, NoiseTensor};
pub use thermal::{halfspace_prefactor, halfspace_spectrum, halfspace_spectrum_with, skin_depth_bracket, thin_wire_spectrum, Occupation};
pub use velocity::{ElectronVelocityDist, VelocityDistKind};
