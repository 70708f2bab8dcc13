//! Dephasing and motional heating.

use log::warn;

use crate::constants::{E_CHARGE, HBAR, KB};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Qubit dephasing rate `Δμ∥² S∥(0) / (2ħ²)` for a spectrum flat over `0…1/t`.
pub fn dephasing_rate(delta_mu: f64, s_parallel_zero: f64) -> Result<f64> {
    ensure_non_negative("low-frequency spectrum", s_parallel_zero)?;
    Ok(delta_mu * delta_mu * s_parallel_zero / (2.0 * HBAR * HBAR))
}

/// Modulus of the qubit coherence after time `t`, `exp(−rate t)`.
pub fn dephasing_coherence(delta_mu: f64, s_parallel_zero: f64, t: f64) -> Result<f64> {
    ensure_non_negative("time", t)?;
    Ok((-dephasing_rate(delta_mu, s_parallel_zero)? * t).exp())
}

/// Vibrational excitation `0 → 1` in the Lamb–Dicke regime:
/// `(μ∥²/ħ²)(a/l_c)² S∥(Ω)`.
pub fn heating_rate_01(s_parallel: f64, a: f64, l_c: f64, mu_parallel: f64) -> Result<f64> {
    ensure_non_negative("spectrum", s_parallel)?;
    ensure_non_negative("ground-state size", a)?;
    ensure_positive("correlation length", l_c)?;
    if a >= l_c {
        return Err(Error::precondition(format!(
            "ground-state size {a:e} m must be small against the correlation length {l_c:e} m"
        )));
    }
    if a >= l_c / 3.0 {
        warn!("ground-state size {a:e} m is not much smaller than the correlation length {l_c:e} m");
    }
    Ok((mu_parallel / HBAR).powi(2) * (a / l_c).powi(2) * s_parallel)
}

/// Heating by a randomly displaced trap, `M Ω³ S_h(Ω) / (2ħ)`.
pub fn displacement_heating(mass: f64, trap_frequency: f64, s_h: f64) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_positive("trap frequency", trap_frequency)?;
    ensure_non_negative("displacement spectrum", s_h)?;
    Ok(mass * trap_frequency.powi(3) * s_h / (2.0 * HBAR))
}

/// Position noise of the guide, `h² S_I / I²` in m²/Hz, from the fact that
/// the height is proportional to the wire current.
pub fn displacement_spectrum_from_current(h: f64, current: f64, noise_ratio: f64) -> Result<f64> {
    ensure_positive("height", h)?;
    ensure_positive("current", current)?;
    ensure_non_negative("noise ratio", noise_ratio)?;
    Ok(h * h * E_CHARGE * noise_ratio / current)
}

/// Parametric excitation `0 → 2`, `½ S_Ω(2Ω)` with `S_Ω` in (rad/s)²/Hz.
pub fn parametric_heating(s_omega: f64) -> Result<f64> {
    ensure_non_negative("trap-frequency spectrum", s_omega)?;
    Ok(0.5 * s_omega)
}

/// Trap-frequency noise `Ω² S_I / I²`, from `Ω ∝ B_b² / I` at fixed bias.
pub fn trap_frequency_spectrum_from_current(trap_frequency: f64, current: f64, noise_ratio: f64) -> Result<f64> {
    ensure_positive("trap frequency", trap_frequency)?;
    ensure_positive("current", current)?;
    ensure_non_negative("noise ratio", noise_ratio)?;
    Ok(trap_frequency.powi(2) * E_CHARGE * noise_ratio / current)
}

/// Temperature rise `ħ Ω Γ₀₁ / k_B` in K/s.
pub fn temperature_rise(trap_frequency: f64, gamma01: f64) -> Result<f64> {
    ensure_non_negative("heating rate", gamma01)?;
    Ok(HBAR * trap_frequency * gamma01 / KB)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{AMU, GAUSS, MU_B};
    use crate::model::guide_height;
    use crate::rates::{displacement_heating_estimate, parametric_heating_estimate, REFERENCE_TRAP_FREQUENCY};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn dephasing_examples() {
        assert_eq!(dephasing_rate(0.0, 1e-20).unwrap(), 0.0);
        let r = dephasing_rate(MU_B, 1e-24).unwrap();
        assert!((r - 3.9e-3).abs() < 0.05e-3, "{r}");
        assert_relative_eq!(r, 0.5 * 7.734e21 * 1e-24, max_relative = 1e-3);
    }

    #[test]
    fn heating_examples() {
        assert_eq!(heating_rate_01(1e-20, 0.0, 1e-6, MU_B).unwrap(), 0.0);
        let full = (MU_B / HBAR).powi(2) * 1e-20;
        assert_relative_eq!(heating_rate_01(1e-20, 1e-8, 1e-6, MU_B).unwrap() / full, 1e-4, max_relative = 1e-12);
        assert!(matches!(heating_rate_01(1e-20, 1e-6, 1e-6, MU_B), Err(Error::Precondition(_))));
        assert_eq!(displacement_heating(AMU, 1e5, 0.0).unwrap(), 0.0);
        let a = displacement_heating(AMU, 1e5, 1e-25).unwrap();
        let b = displacement_heating(AMU, 2e5, 1e-25).unwrap();
        assert_relative_eq!(b / a, 8.0, max_relative = 1e-14);
        assert_eq!(parametric_heating(0.0).unwrap(), 0.0);
    }

    #[test]
    fn first_principles_against_estimates() {
        let (omega, current, bias) = (REFERENCE_TRAP_FREQUENCY, 1.0, GAUSS);
        let h = guide_height(current, bias).unwrap();
        let disp = displacement_heating(AMU, omega, displacement_spectrum_from_current(h, current, 1.0).unwrap()).unwrap();
        let estimate = displacement_heating_estimate(AMU, omega, current, bias, 1.0).unwrap();
        // same order as the 3 s⁻¹ estimate
        assert!(disp / estimate > 0.2 && disp / estimate < 5.0, "{disp}");
        let para = parametric_heating(trap_frequency_spectrum_from_current(omega, current, 1.0).unwrap()).unwrap();
        assert_relative_eq!(para, parametric_heating_estimate(omega, current, 1.0).unwrap(), max_relative = 0.1);
    }

    #[test]
    fn temperature_rise_examples() {
        let k = temperature_rise(REFERENCE_TRAP_FREQUENCY, 1.0).unwrap();
        assert!((k - 4.8e-6).abs() < 0.05e-6, "{k}");
        assert_eq!(temperature_rise(1e5, 0.0).unwrap(), 0.0);
        assert!((0.05e-6 / k - 0.0104).abs() < 0.0003);
        assert!((1e-6 / k - 0.208).abs() < 0.003);
    }

    proptest! {
        #[test]
        fn dephasing_is_exponential(dmu in 0.0f64..3e-23, s in 0.0f64..1e-20, t in 0.0f64..10.0) {
            let c1 = dephasing_coherence(dmu, s, t).unwrap();
            let c2 = dephasing_coherence(dmu, s, 2.0 * t).unwrap();
            prop_assert!((c2 - c1 * c1).abs() <= 1e-12);
        }
    }
}
