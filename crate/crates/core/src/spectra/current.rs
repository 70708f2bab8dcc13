//! Technical and shot noise of the wire current.

use std::f64::consts::PI;

use super::tensor::{Axes, NoiseTensor};
use super::velocity::{clip_sorted, ElectronVelocityDist};
use crate::constants::{E_CHARGE, MU0};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::numerics::bessel::x_k1;
use crate::numerics::quadrature::{integrate_with_points, Tolerance};

/// Shot-noise current spectrum `e I` in A²/Hz.
pub fn shot_noise_level(current: f64) -> Result<f64> {
    ensure_non_negative("current", current)?;
    Ok(E_CHARGE * current)
}

/// Azimuthal field spectrum `μ0² e I / (4π² h²) · ratio` at distance `h`,
/// where `ratio = S_I / (e I)`.
pub fn current_noise_field_spectrum(current: f64, h: f64, noise_ratio: f64) -> Result<f64> {
    ensure_positive("height", h)?;
    ensure_non_negative("noise ratio", noise_ratio)?;
    Ok(MU0 * MU0 * shot_noise_level(current)? / (4.0 * PI * PI * h * h) * noise_ratio)
}

/// [`current_noise_field_spectrum`] as a tensor with only the azimuthal entry.
pub fn current_noise_tensor(current: f64, h: f64, noise_ratio: f64, omega: f64) -> Result<NoiseTensor> {
    let s = current_noise_field_spectrum(current, h, noise_ratio)?;
    Ok(NoiseTensor::diagonal([s, 0.0, 0.0], Axes::CylindricalWire, h, omega))
}

/// Dimensionless velocity integral
/// `∫dv P(v) cos(dz ω/v) f(r|ω|/|v|) f(r'|ω|/|v|)` with `f(x) = x K₁(x)`,
/// averaged over the passage density. Equals 1 at ω = 0.
pub fn normalized_shot_spectrum(r: f64, r_prime: f64, dz: f64, omega: f64, dist: &ElectronVelocityDist) -> Result<f64> {
    ensure_positive("distance r", r)?;
    ensure_positive("distance r'", r_prime)?;
    if !(omega.is_finite() && dz.is_finite()) {
        return Err(Error::domain("frequency and separation must be finite"));
    }
    let w = omega.abs();
    let integrand = |v: f64| -> f64 {
        if v == 0.0 {
            return 0.0;
        }
        let inv = w / v.abs();
        (dz * omega / v).cos() * x_k1(r * inv) * x_k1(r_prime * inv)
    };
    if let Some(v0) = dist.delta_velocity() {
        return Ok(integrand(v0));
    }
    if w == 0.0 {
        return Ok(1.0);
    }

    let (lo, hi) = dist.support();
    let mut points = dist.breakpoints();
    // f(r ω / v) switches on around |v| ~ r ω
    let scale = r.max(r_prime) * w;
    for k in [0.1, 0.3, 1.0, 3.0, 10.0, 30.0] {
        points.extend([-k * scale, k * scale]);
    }
    let points = clip_sorted(points, lo, hi);
    let tol = Tolerance { relative: 1e-9, absolute: 1e-15, max_intervals: 4000 };
    let result = integrate_with_points(|v| dist.passage_density(v) * integrand(v), &points, tol).map_err(|e| {
        Error::numerical(format!(
            "shot-noise velocity integral failed (r = {r:e} m, r' = {r_prime:e} m, dz = {dz:e} m, omega = {omega:e} rad/s, {:?}): {e}",
            dist.kind
        ))
    })?;
    Ok(result.value)
}

/// Azimuthal field correlation `S_φφ'` between points at distances `r`, `r'`
/// from a wire carrying ballistic electrons, separated by `dz` along it.
pub fn shot_noise_spectrum(current: f64, r: f64, r_prime: f64, dz: f64, omega: f64, dist: &ElectronVelocityDist) -> Result<f64> {
    ensure_positive("distance r", r)?;
    ensure_positive("distance r'", r_prime)?;
    let prefactor = MU0 * MU0 * shot_noise_level(current)? / (4.0 * PI * PI * r * r_prime);
    Ok(prefactor * normalized_shot_spectrum(r, r_prime, dz, omega, dist)?)
}
