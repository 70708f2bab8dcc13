//! Longitudinal velocity distributions of conduction electrons.
//!
//! Two densities are kept apart. The gas density `n(v)` is the fraction of
//! electrons with velocity `v` at a fixed instant. The passage density
//! `P(v) ∝ |v| n(v)` is the distribution of velocities of electrons crossing
//! a fixed plane, which is what a stationary atom samples. Slow electrons are
//! rarely seen passing by, so `P(0) = 0` unless the gas is a delta.

use serde::Serialize;

use crate::constants::{KB, M_ELECTRON};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::numerics::quadrature::{integrate_with_points, Tolerance};

/// Maxwell tails are cut at this many widths.
const GAUSS_RANGE: f64 = 8.0;
/// Fermi edges are cut this many smearing widths past `v_F`.
const EDGE_RANGE: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityDistKind {
    Maxwell,
    FermiDirac,
    Delta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectronVelocityDist {
    pub kind: VelocityDistKind,
    /// Thermal width σ (Maxwell), Fermi velocity (Fermi–Dirac) or offset of
    /// the single velocity from the drift (delta), m/s.
    pub characteristic_velocity: f64,
    /// m/s
    pub drift_velocity: f64,
    /// Width of the Fermi edges, m/s. Zero for a sharp box.
    pub smearing: f64,
    gas_norm: f64,
    mean_speed: f64,
}

impl ElectronVelocityDist {
    /// Gaussian of width `sigma` centred on `drift`.
    pub fn maxwell(sigma: f64, drift: f64) -> Result<Self> {
        ensure_positive("thermal velocity", sigma)?;
        Self::build(VelocityDistKind::Maxwell, sigma, drift, 0.0)
    }

    /// Maxwell distribution of the electron gas at `temperature`.
    pub fn maxwell_thermal(temperature: f64, drift: f64) -> Result<Self> {
        ensure_positive("electron temperature", temperature)?;
        Self::maxwell((KB * temperature / M_ELECTRON).sqrt(), drift)
    }

    /// Box `|v − v_D| < v_F` with Fermi-function edges of width `smearing`.
    pub fn fermi_dirac(v_fermi: f64, drift: f64, smearing: f64) -> Result<Self> {
        ensure_positive("Fermi velocity", v_fermi)?;
        ensure_non_negative("edge smearing", smearing)?;
        Self::build(VelocityDistKind::FermiDirac, v_fermi, drift, smearing)
    }

    /// Fermi–Dirac box whose edges are smeared by `k_B T / (m_e v_F)`.
    pub fn fermi_dirac_thermal(v_fermi: f64, drift: f64, temperature: f64) -> Result<Self> {
        ensure_positive("Fermi velocity", v_fermi)?;
        ensure_non_negative("electron temperature", temperature)?;
        Self::fermi_dirac(v_fermi, drift, KB * temperature / (M_ELECTRON * v_fermi))
    }

    /// All electrons at `drift + offset`.
    pub fn delta(offset: f64, drift: f64) -> Result<Self> {
        if !(offset + drift).is_finite() || offset + drift == 0.0 {
            return Err(Error::domain("a delta distribution needs a finite non-zero velocity"));
        }
        Self::build(VelocityDistKind::Delta, offset, drift, 0.0)
    }

    fn build(kind: VelocityDistKind, characteristic_velocity: f64, drift_velocity: f64, smearing: f64) -> Result<Self> {
        if !drift_velocity.is_finite() {
            return Err(Error::domain(format!("drift velocity must be finite, got {drift_velocity}")));
        }
        let mut dist = ElectronVelocityDist {
            kind,
            characteristic_velocity,
            drift_velocity,
            smearing,
            gas_norm: 1.0,
            mean_speed: 1.0,
        };
        match kind {
            VelocityDistKind::Maxwell => {
                dist.gas_norm = characteristic_velocity * (2.0 * std::f64::consts::PI).sqrt();
            }
            VelocityDistKind::FermiDirac => {
                let (vf, w) = (characteristic_velocity, smearing);
                // ∫ du / (1 + e^{(|u| − v_F)/w}) = 2 w ln(1 + e^{v_F/w})
                dist.gas_norm = if w == 0.0 { 2.0 * vf } else { 2.0 * (vf + w * (-vf / w).exp().ln_1p()) };
            }
            VelocityDistKind::Delta => {
                dist.mean_speed = (characteristic_velocity + drift_velocity).abs();
                return Ok(dist);
            }
        }
        let points = dist.breakpoints();
        let tol = Tolerance { relative: 1e-12, absolute: 0.0, max_intervals: 2000 };
        dist.mean_speed = integrate_with_points(|v| v.abs() * dist.gas_density(v), &points, tol)?.value;
        if !(dist.mean_speed > 0.0) {
            return Err(Error::numerical("velocity distribution has no flux"));
        }
        Ok(dist)
    }

    /// The single velocity of a delta distribution.
    pub fn delta_velocity(&self) -> Option<f64> {
        (self.kind == VelocityDistKind::Delta).then(|| self.drift_velocity + self.characteristic_velocity)
    }

    /// Mean electron speed `⟨|v|⟩` of the gas, m/s.
    pub fn mean_speed(&self) -> f64 {
        self.mean_speed
    }

    /// Interval outside which both densities vanish.
    pub fn support(&self) -> (f64, f64) {
        let (c, vd) = (self.characteristic_velocity, self.drift_velocity);
        match self.kind {
            VelocityDistKind::Maxwell => (vd - GAUSS_RANGE * c, vd + GAUSS_RANGE * c),
            VelocityDistKind::FermiDirac => {
                let edge = c + EDGE_RANGE * self.smearing;
                (vd - edge, vd + edge)
            }
            VelocityDistKind::Delta => (vd + c, vd + c),
        }
    }

    /// Sorted quadrature breakpoints covering the support: the edges, the
    /// centre, the Fermi steps and `v = 0`.
    pub fn breakpoints(&self) -> Vec<f64> {
        let (lo, hi) = self.support();
        let (c, vd, w) = (self.characteristic_velocity, self.drift_velocity, self.smearing);
        let mut pts = vec![lo, hi, vd, 0.0];
        match self.kind {
            VelocityDistKind::Maxwell => {
                pts.extend([-2.0, -1.0, 1.0, 2.0].map(|k| vd + k * c));
            }
            VelocityDistKind::FermiDirac => {
                for edge in [vd - c, vd + c] {
                    pts.push(edge);
                    if w > 0.0 {
                        pts.extend([-8.0, -2.0, 2.0, 8.0].map(|k| edge + k * w));
                    }
                }
            }
            VelocityDistKind::Delta => {}
        }
        clip_sorted(pts, lo, hi)
    }

    /// Normalized gas density `n(v)` in s/m. Zero everywhere for a delta.
    pub fn gas_density(&self, v: f64) -> f64 {
        let (lo, hi) = self.support();
        if v < lo || v > hi {
            return 0.0;
        }
        let u = v - self.drift_velocity;
        match self.kind {
            VelocityDistKind::Maxwell => {
                let z = u / self.characteristic_velocity;
                (-0.5 * z * z).exp() / self.gas_norm
            }
            VelocityDistKind::FermiDirac => {
                let excess = u.abs() - self.characteristic_velocity;
                let occupation = if self.smearing == 0.0 {
                    if excess <= 0.0 { 1.0 } else { 0.0 }
                } else {
                    let x = excess / self.smearing;
                    if x > 0.0 {
                        let e = (-x).exp();
                        e / (1.0 + e)
                    } else {
                        1.0 / (1.0 + x.exp())
                    }
                };
                occupation / self.gas_norm
            }
            VelocityDistKind::Delta => 0.0,
        }
    }

    /// Normalized passage density `|v| n(v) / ⟨|v|⟩` in s/m.
    pub fn passage_density(&self, v: f64) -> f64 {
        v.abs() * self.gas_density(v) / self.mean_speed
    }

    /// Numerical `(∫n dv, ∫P dv)`, both 1 up to quadrature error.
    pub fn normalization(&self) -> Result<(f64, f64)> {
        if self.kind == VelocityDistKind::Delta {
            return Ok((1.0, 1.0));
        }
        let pts = self.breakpoints();
        let tol = Tolerance::relative(1e-10);
        let gas = integrate_with_points(|v| self.gas_density(v), &pts, tol)?.value;
        let passage = integrate_with_points(|v| self.passage_density(v), &pts, tol)?.value;
        Ok((gas, passage))
    }
}

/// Keeps the points inside `[lo, hi]`, sorted and without duplicates.
pub(crate) fn clip_sorted(mut pts: Vec<f64>, lo: f64, hi: f64) -> Vec<f64> {
    pts.retain(|p| p.is_finite() && *p >= lo && *p <= hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}
