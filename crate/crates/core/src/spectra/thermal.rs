//! Thermal near-field noise of a metallic half-space or a thin wire.

use std::f64::consts::PI;

use log::warn;
use serde::Serialize;

use super::tensor::{Axes, NoiseTensor};
use crate::constants::{HBAR, KB, MU0};
use crate::error::{ensure_positive, Error, Result};
use crate::model::{skin_depth, Material};

const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// How the thermal occupation enters the spectrum.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Occupation {
    /// Classical `k_B T`, exact for `ħω ≪ k_B T`.
    #[default]
    Classical,
    /// `k_B T ↦ ħω / (1 − e^{−ħω/k_B T})`.
    BoseEinstein,
}

fn thermal_energy(temperature: f64, omega: f64, occupation: Occupation) -> f64 {
    let kt = KB * temperature;
    match occupation {
        Occupation::Classical => kt,
        Occupation::BoseEinstein => {
            let e = HBAR * omega.abs();
            if e == 0.0 {
                kt
            } else if kt == 0.0 {
                e
            } else {
                e / -(-e / kt).exp_m1()
            }
        }
    }
}

/// `μ0² k_B T / (16π ρ)` in T²·m/Hz.
pub fn halfspace_prefactor(material: &Material) -> f64 {
    MU0 * MU0 * KB * material.temperature / (16.0 * PI * material.resistivity)
}

/// `[1 + 2h³/(3δ³)]⁻¹`, equal to 1 at ω = 0.
pub fn skin_depth_bracket(material: &Material, h: f64, omega: f64) -> Result<f64> {
    let delta = skin_depth(material.resistivity, omega)?;
    Ok(1.0 / (1.0 + 2.0 * (h / delta).powi(3) / 3.0))
}

/// Half-space spectrum with the classical occupation.
pub fn halfspace_spectrum(material: &Material, h: f64, omega: f64) -> Result<NoiseTensor> {
    halfspace_spectrum_with(material, h, omega, Occupation::Classical)
}

pub fn halfspace_spectrum_with(material: &Material, h: f64, omega: f64, occupation: Occupation) -> Result<NoiseTensor> {
    ensure_positive("height", h)?;
    if !omega.is_finite() {
        return Err(Error::domain(format!("frequency must be finite, got {omega}")));
    }
    if omega.abs() * h / SPEED_OF_LIGHT > 0.1 {
        warn!("|omega| h / c = {:.3} is not small; the quasi-static half-space spectrum is unreliable", omega.abs() * h / SPEED_OF_LIGHT);
    }
    let energy = thermal_energy(material.temperature, omega, occupation);
    let base = MU0 * MU0 * energy / (16.0 * PI * material.resistivity) / h * skin_depth_bracket(material, h, omega)?;
    Ok(NoiseTensor::diagonal([0.5 * base, base, 0.5 * base], Axes::CartesianSurface, h, omega))
}

/// Thin wire of radius `a` at distance `h`, in (azimuthal, radial,
/// longitudinal) axes. No skin-depth correction is applied.
pub fn thin_wire_spectrum(material: &Material, a: f64, h: f64, omega: f64) -> Result<NoiseTensor> {
    ensure_positive("wire radius", a)?;
    ensure_positive("height", h)?;
    if a >= h {
        return Err(Error::domain(format!("wire radius {a:e} m must be smaller than the distance {h:e} m")));
    }
    if a >= h / 3.0 {
        warn!("wire radius {a:e} m is not small compared with the distance {h:e} m");
    }
    let delta = skin_depth(material.resistivity, omega)?;
    if h > delta / 3.0 {
        warn!("distance {h:e} m is not small compared with the skin depth {delta:e} m; thin-wire spectrum is magnetostatic only");
    }
    let base = halfspace_prefactor(material) * PI * a * a / (h * h * h);
    Ok(NoiseTensor::diagonal([2.0 * base, 0.5 * base, 1.5 * base], Axes::CylindricalWire, h, omega))
}
