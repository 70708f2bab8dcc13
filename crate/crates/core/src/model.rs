//! Side-guide parameter bundles and the trap geometry derived from them.

use std::f64::consts::PI;

use serde::Serialize;

use crate::constants::{AMU, HBAR, MU0, MU_B, RHO_CU};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Height of the field zero above a straight wire carrying `current` in a
/// perpendicular bias field: `h = μ0 I / (2π B_b)`.
pub fn guide_height(current: f64, bias_field: f64) -> Result<f64> {
    ensure_positive("current", current)?;
    ensure_positive("bias_field", bias_field)?;
    Ok(MU0 / (2.0 * PI) * current / bias_field)
}

/// Wire current that places the guide at `height` for a given bias field.
pub fn current_for_height(height: f64, bias_field: f64) -> Result<f64> {
    ensure_positive("height", height)?;
    ensure_positive("bias_field", bias_field)?;
    Ok(height * bias_field * 2.0 * PI / MU0)
}

/// Skin depth `δ = sqrt(2ρ / (μ0 ω))`. Returns `f64::INFINITY` at ω = 0.
pub fn skin_depth(resistivity: f64, omega: f64) -> Result<f64> {
    ensure_positive("resistivity", resistivity)?;
    ensure_non_negative("omega", omega.abs())?;
    if omega == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((2.0 * resistivity / (MU0 * omega.abs())).sqrt())
}

/// Larmor (angular) frequency `μ∥ |B0| / ħ` in rad/s.
pub fn larmor_frequency(mu_parallel: f64, field: f64) -> f64 {
    mu_parallel * field.abs() / HBAR
}

/// rms size `sqrt(ħ / 2MΩ)` of the harmonic-oscillator ground state.
pub fn ground_state_size(mass: f64, omega: f64) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_positive("trap frequency", omega)?;
    Ok((HBAR / (2.0 * mass * omega)).sqrt())
}

/// Gravitational sag ratio `M g / (μ∥ b)`. Its square is the factor by which
/// sag suppresses current-noise dephasing at the guide centre.
pub fn sag_suppression_ratio(mass: f64, gravity: f64, mu_parallel: f64, gradient: f64) -> Result<f64> {
    ensure_positive("gradient", gradient)?;
    ensure_positive("mu_parallel", mu_parallel)?;
    Ok(mass * gravity / (mu_parallel * gradient))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Material {
    /// Ω·m
    pub resistivity: f64,
    /// K
    pub temperature: f64,
    pub label: String,
}

impl Material {
    pub fn new(label: impl Into<String>, resistivity: f64, temperature: f64) -> Result<Self> {
        ensure_positive("resistivity", resistivity)?;
        ensure_non_negative("temperature", temperature)?;
        Ok(Material { resistivity, temperature, label: label.into() })
    }

    pub fn copper(temperature: f64) -> Self {
        Material { resistivity: RHO_CU, temperature, label: "Cu".into() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WireKind {
    HalfSpace,
    ThinWire,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireGeometry {
    pub kind: WireKind,
    /// Wire radius in m. Ignored for a half-space substrate.
    pub radius: f64,
}

impl WireGeometry {
    pub fn half_space() -> Self {
        WireGeometry { kind: WireKind::HalfSpace, radius: 0.0 }
    }

    pub fn thin_wire(radius: f64) -> Result<Self> {
        ensure_positive("wire radius", radius)?;
        Ok(WireGeometry { kind: WireKind::ThinWire, radius })
    }
}

/// Spin quantum numbers are stored doubled so that half-integers are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HalfInt(i32);

impl HalfInt {
    pub fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn new(value: f64) -> Result<Self> {
        let twice = 2.0 * value;
        if twice.fract() != 0.0 || !twice.is_finite() {
            return Err(Error::domain(format!("{value} is not a multiple of 1/2")));
        }
        Ok(HalfInt(twice as i32))
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomSpecies {
    /// kg
    pub mass: f64,
    /// Magnetic moment along the local field, J/T.
    pub mu_parallel: f64,
    /// Differential moment between the two qubit states, J/T.
    pub delta_mu_parallel: f64,
    pub spin_f: HalfInt,
    pub g_factor: f64,
}

impl AtomSpecies {
    pub fn new(mass: f64, mu_parallel: f64, spin_f: HalfInt, g_factor: f64) -> Result<Self> {
        ensure_positive("atom mass", mass)?;
        if spin_f.twice() <= 0 {
            return Err(Error::domain("spin F must be at least 1/2"));
        }
        Ok(AtomSpecies { mass, mu_parallel, delta_mu_parallel: mu_parallel, spin_f, g_factor })
    }

    /// A spin-1/2 particle with g = 2, so that μ∥ = μ_B.
    pub fn spin_half(mass: f64) -> Self {
        AtomSpecies {
            mass,
            mu_parallel: MU_B,
            delta_mu_parallel: MU_B,
            spin_f: HalfInt(1),
            g_factor: 2.0,
        }
    }

    /// ⁸⁷Rb in |F=2, m=2⟩.
    pub fn rb87() -> Self {
        AtomSpecies {
            mass: 86.909_180_5 * AMU,
            mu_parallel: MU_B,
            delta_mu_parallel: MU_B,
            spin_f: HalfInt(4),
            g_factor: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideGuideConfig {
    /// A
    pub current: f64,
    /// T
    pub bias_field: f64,
    /// Field magnitude at the guide centre, T.
    pub longitudinal_field: f64,
    /// Transverse trap frequency, rad/s. Not derivable from the other inputs
    /// without a field model, so it is supplied directly.
    pub trap_frequency: f64,
    pub atom: AtomSpecies,
    pub material: Material,
    pub wire: WireGeometry,
}

impl SideGuideConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_positive("current", self.current)?;
        ensure_positive("bias_field", self.bias_field)?;
        ensure_non_negative("longitudinal_field", self.longitudinal_field)?;
        ensure_positive("trap_frequency", self.trap_frequency)?;
        let h = self.height()?;
        if self.wire.kind == WireKind::ThinWire && h <= self.wire.radius {
            return Err(Error::domain(format!(
                "guide height {h:e} m must exceed the wire radius {:e} m",
                self.wire.radius
            )));
        }
        Ok(())
    }

    pub fn height(&self) -> Result<f64> {
        guide_height(self.current, self.bias_field)
    }

    /// Quadrupole gradient `b = B_b / h`, T/m.
    pub fn gradient(&self) -> Result<f64> {
        Ok(self.bias_field / self.height()?)
    }

    pub fn larmor_frequency(&self) -> f64 {
        larmor_frequency(self.atom.mu_parallel, self.longitudinal_field)
    }

    pub fn ground_state_size(&self) -> Result<f64> {
        ground_state_size(self.atom.mass, self.trap_frequency)
    }

    /// Copy with the wire current rescaled so that the guide sits at `height`.
    pub fn with_height(&self, height: f64) -> Result<Self> {
        let mut out = self.clone();
        out.current = current_for_height(height, self.bias_field)?;
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{GAUSS, G_GRAV, MICRON};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn height_examples() {
        assert_relative_eq!(guide_height(1.0, 100.0 * GAUSS).unwrap(), 20.0 * MICRON, max_relative = 1e-9);
        assert_relative_eq!(guide_height(2.0, 100.0 * GAUSS).unwrap(), 40.0 * MICRON, max_relative = 1e-9);
        assert!(matches!(guide_height(0.0, 1.0), Err(Error::Domain(_))));
        assert!(guide_height(1.0, -3.0 * GAUSS).is_err());
    }

    #[test]
    fn skin_depth_examples() {
        let w = 2.0 * PI * 1e6;
        let d = skin_depth(RHO_CU, w).unwrap();
        assert_relative_eq!(d, 65.6e-6, max_relative = 2e-3);
        assert_relative_eq!(skin_depth(4.0 * RHO_CU, w).unwrap(), 2.0 * d, max_relative = 1e-12);
        assert_relative_eq!(skin_depth(RHO_CU, 4.0 * w).unwrap(), 0.5 * d, max_relative = 1e-12);
        assert_eq!(skin_depth(RHO_CU, 0.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn larmor_examples() {
        let w = larmor_frequency(MU_B, GAUSS);
        assert_relative_eq!(w / (2.0 * PI), 1.4e6, max_relative = 5e-3);
        assert_eq!(larmor_frequency(MU_B, 0.0), 0.0);
        assert_relative_eq!(larmor_frequency(MU_B, 100.0 * GAUSS), 100.0 * w, max_relative = 1e-12);
    }

    #[test]
    fn ground_state_examples() {
        let w = 2.0 * PI * 1e5;
        let a87 = ground_state_size(87.0 * AMU, w).unwrap();
        assert_relative_eq!(a87, 24.1e-9, max_relative = 2e-3);
        assert_relative_eq!(ground_state_size(87.0 * AMU, 4.0 * w).unwrap(), a87 / 2.0, max_relative = 1e-12);
        assert_relative_eq!(ground_state_size(AMU, w).unwrap(), a87 * 87f64.sqrt(), max_relative = 1e-12);
        assert_relative_eq!(ground_state_size(AMU, w).unwrap(), 225e-9, max_relative = 3e-3);
        assert!(ground_state_size(0.0, w).is_err());
    }

    #[test]
    fn sag_examples() {
        let per_cm = GAUSS / 1e-2;
        // Order-of-magnitude prefactor: direct arithmetic gives 0.179.
        let r = sag_suppression_ratio(AMU, 10.0, MU_B, per_cm).unwrap();
        assert!((0.05..0.2).contains(&r), "{r}");
        assert_eq!(sag_suppression_ratio(AMU, 0.0, MU_B, per_cm).unwrap(), 0.0);
        let r87 = sag_suppression_ratio(87.0 * AMU, 9.8, MU_B, 100.0 * per_cm).unwrap();
        assert_relative_eq!(r87, 0.15266, max_relative = 1e-3);
        assert!(sag_suppression_ratio(AMU, G_GRAV, MU_B, 0.0).is_err());
    }

    #[test]
    fn config_rejects_guide_inside_wire() {
        let cfg = SideGuideConfig {
            current: 1e-3,
            bias_field: 100.0 * GAUSS,
            longitudinal_field: GAUSS,
            trap_frequency: 2.0 * PI * 1e5,
            atom: AtomSpecies::rb87(),
            material: Material::copper(300.0),
            wire: WireGeometry::thin_wire(50e-9).unwrap(),
        };
        // h = 20 nm < radius
        assert!(cfg.validate().is_err());
        let ok = SideGuideConfig { current: 1.0, ..cfg };
        ok.validate().unwrap();
        assert_relative_eq!(ok.gradient().unwrap(), 0.01 / 20e-6, max_relative = 1e-9);
    }

    #[test]
    fn half_int() {
        assert_eq!(HalfInt::new(1.5).unwrap().twice(), 3);
        assert!(HalfInt::new(0.3).is_err());
    }

    proptest! {
        #[test]
        fn height_is_scale_invariant(i in 1e-3f64..10.0, b in 1e-4f64..1e-1, l in 1e-3f64..1e3) {
            let h1 = guide_height(i, b).unwrap();
            let h2 = guide_height(l * i, l * b).unwrap();
            prop_assert!(((h1 - h2) / h1).abs() < 1e-12);
        }

        #[test]
        fn skin_depth_identity(rho in 1e-9f64..1e-3, w in 1.0f64..1e10) {
            let d = skin_depth(rho, w).unwrap();
            prop_assert!((d * d * MU0 * w / (2.0 * rho) - 1.0).abs() < 1e-13);
        }
    }
}
