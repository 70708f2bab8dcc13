//! Closed-form scaling estimates, each normalized to its value at the
//! reference parameters (copper at 300 K, 1 μm, 1 amu, 2π·100 kHz, 1 A, 1 G).

use std::f64::consts::PI;

use log::warn;

use crate::constants::{AMU, GAUSS, MICRON, RHO_CU};
use crate::error::{ensure_non_negative, ensure_positive, Result};
use crate::model::skin_depth;

/// 2π·100 kHz in rad/s.
pub const REFERENCE_TRAP_FREQUENCY: f64 = 2.0 * PI * 1e5;

/// Near-field spin-flip rate `100 s⁻¹ (μ/μ_B)² (T/300 K) / [(ρ/ρ_Cu)(h/μm)]`.
///
/// With a Larmor frequency the skin-depth bracket `[1 + 2h³/(3δ³)]⁻¹` is
/// applied, which gives the `ω_L^{−3/2}` fall-off once `h > δ`.
pub fn nearfield_flip_estimate(mu_ratio: f64, temperature: f64, resistivity: f64, h: f64, larmor: Option<f64>) -> Result<f64> {
    ensure_non_negative("temperature", temperature)?;
    ensure_positive("resistivity", resistivity)?;
    ensure_positive("height", h)?;
    let base = 100.0 * mu_ratio * mu_ratio * (temperature / 300.0) / ((resistivity / RHO_CU) * (h / MICRON));
    let Some(omega) = larmor else {
        return Ok(base);
    };
    let delta = skin_depth(resistivity, omega)?;
    if h > delta / 3.0 {
        warn!("height {h:e} m is not small against the skin depth {delta:e} m; the estimate uses the skin-depth bracket");
    }
    Ok(base / (1.0 + 2.0 * (h / delta).powi(3) / 3.0))
}

/// Current-noise spin-flip rate `1 s⁻¹ (μ/μ_B)² (I/A) (S_I/eI) / (h/μm)²`.
pub fn current_flip_estimate(current: f64, h: f64, noise_ratio: f64, mu_ratio: f64) -> Result<f64> {
    ensure_non_negative("current", current)?;
    ensure_positive("height", h)?;
    ensure_non_negative("noise ratio", noise_ratio)?;
    Ok(mu_ratio * mu_ratio * current * noise_ratio / (h / MICRON).powi(2))
}

/// Near-field heating `1 s⁻¹ (μ/μ_B)² (T/300 K) / [(M/amu)(Ω/2π·100 kHz)(ρ/ρ_Cu)(h/μm)³]`.
pub fn nearfield_heating_estimate(mu_ratio: f64, temperature: f64, mass: f64, trap_frequency: f64, resistivity: f64, h: f64) -> Result<f64> {
    ensure_non_negative("temperature", temperature)?;
    ensure_positive("mass", mass)?;
    ensure_positive("trap frequency", trap_frequency)?;
    ensure_positive("resistivity", resistivity)?;
    ensure_positive("height", h)?;
    Ok(mu_ratio * mu_ratio * (temperature / 300.0)
        / ((mass / AMU) * (trap_frequency / REFERENCE_TRAP_FREQUENCY) * (resistivity / RHO_CU) * (h / MICRON).powi(3)))
}

/// Heating by current-driven trap displacement
/// `3 s⁻¹ (M/amu)(Ω/2π·100 kHz)³ (I/A) (S_I/eI) / (B_b/G)²`.
pub fn displacement_heating_estimate(mass: f64, trap_frequency: f64, current: f64, bias_field: f64, noise_ratio: f64) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_positive("trap frequency", trap_frequency)?;
    ensure_non_negative("current", current)?;
    ensure_positive("bias field", bias_field)?;
    ensure_non_negative("noise ratio", noise_ratio)?;
    Ok(3.0 * (mass / AMU) * (trap_frequency / REFERENCE_TRAP_FREQUENCY).powi(3) * current * noise_ratio / (bias_field / GAUSS).powi(2))
}

/// Parametric heating `3×10⁻⁸ s⁻¹ (Ω/2π·100 kHz)² (S_I(2Ω)/eI) / (I/A)`.
pub fn parametric_heating_estimate(trap_frequency: f64, current: f64, noise_ratio: f64) -> Result<f64> {
    ensure_positive("trap frequency", trap_frequency)?;
    ensure_positive("current", current)?;
    ensure_non_negative("noise ratio", noise_ratio)?;
    Ok(3e-8 * (trap_frequency / REFERENCE_TRAP_FREQUENCY).powi(2) * noise_ratio / current)
}
