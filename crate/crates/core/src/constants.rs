//! Physical constants in SI units (CODATA 2018 exact/recommended values).
//!
//! Everything inside the crate is SI; conversions from gauss, micrometres,
//! atomic mass units and so on live in [`crate::units`].

use std::f64::consts::PI;

/// Vacuum permeability, T·m/A.
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Boltzmann constant, J/K.
pub const KB: f64 = 1.380_649e-23;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Atomic mass unit, kg.
pub const AMU: f64 = 1.660_539_066_60e-27;
/// Electron mass, kg.
pub const M_ELECTRON: f64 = 9.109_383_701_5e-31;
/// Default gravitational acceleration, m/s².
pub const G_GRAV: f64 = 9.81;

/// Copper resistivity used as the reference material, Ω·m.
pub const RHO_CU: f64 = 1.7e-8;
/// Fermi velocity of copper, m/s.
pub const V_FERMI_CU: f64 = 1.57e6;

/// One gauss in tesla.
pub const GAUSS: f64 = 1e-4;
/// One micrometre in metres.
pub const MICRON: f64 = 1e-6;

/// The constant table as a value, for code that wants to pass it around or
/// print it.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Constants {
    pub mu0: f64,
    pub kb: f64,
    pub hbar: f64,
    pub e_charge: f64,
    pub mu_b: f64,
    pub amu: f64,
    pub g_grav: f64,
}

impl Constants {
    pub const SI: Constants = Constants {
        mu0: MU0,
        kb: KB,
        hbar: HBAR,
        e_charge: E_CHARGE,
        mu_b: MU_B,
        amu: AMU,
        g_grav: G_GRAV,
    };

    /// μ_B / (2πħ) expressed in Hz per gauss.
    pub fn bohr_frequency_per_gauss(&self) -> f64 {
        self.mu_b * GAUSS / (2.0 * PI * self.hbar)
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::SI
    }
}
