//! Golden-rule transition rates driven by magnetic noise, and the
//! closed-form order-of-magnitude estimates that accompany them.

mod estimates;
mod heating;
mod report;
mod spin;

pub use estimates::{
    current_flip_estimate, displacement_heating_estimate, nearfield_flip_estimate, nearfield_heating_estimate,
    parametric_heating_estimate, REFERENCE_TRAP_FREQUENCY,
};
pub use heating::{
    dephasing_coherence, dephasing_rate, displacement_heating, displacement_spectrum_from_current, heating_rate_01,
    parametric_heating, temperature_rise, trap_frequency_spectrum_from_current,
};
pub use report::{rate_report, Channel, Method, RateEntry, RateOptions, RateReport};
pub use spin::{loss_timescale, moment_matrix_element, spin_flip_rate, spin_flip_rate_along, SpinTransition};
