use log::warn;
use num_complex::Complex64;

use crate::spectra::CorrelationModel;

/// `exp(−γt [1 − C(s)])`, the factor by which scattering multiplies the
/// spatially averaged coherence at separation `s`.
pub fn analytic_coherence(s: f64, t: f64, gamma: f64, model: &CorrelationModel) -> f64 {
    (-gamma * t * (1.0 - model.value(s))).exp()
}

/// `ρ(s) = Σ_z ψ*(z+s) ψ(z) Δz` on a periodic grid. Separations between
/// grid multiples interpolate linearly between neighbouring lags, which keeps
/// `ρ(−s) = ρ(s)*` exact.
pub fn amplitude_coherence(psi: &[Complex64], dz: f64, s: f64) -> Complex64 {
    let n = psi.len();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let x = s / dz;
    let lo = x.floor();
    let frac = x - lo;
    let lag = |m: i64| -> Complex64 {
        let shift = m.rem_euclid(n as i64) as usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, value) in psi.iter().enumerate() {
            acc += psi[(i + shift) % n].conj() * value;
        }
        acc * dz
    };
    let m = lo as i64;
    if frac == 0.0 {
        lag(m)
    } else {
        lag(m) * (1.0 - frac) + lag(m + 1) * frac
    }
}

/// Relative variation `(max − min) / max` of a spectrum sampled across a
/// frequency band. The master equation assumes this is small; a warning is
/// logged above 10 %.
pub fn spectrum_flatness(spectrum: impl Fn(f64) -> f64, omega_lo: f64, omega_hi: f64) -> f64 {
    let samples: Vec<f64> = (0..=32).map(|i| spectrum(omega_lo + (omega_hi - omega_lo) * f64::from(i) / 32.0)).collect();
    let max = samples.iter().copied().fold(f64::MIN, f64::max);
    let min = samples.iter().copied().fold(f64::MAX, f64::min);
    let variation = if max > 0.0 { (max - min) / max } else { 0.0 };
    if variation > 0.1 {
        warn!("noise spectrum varies by {:.0} % across the Doppler band [{omega_lo:e}, {omega_hi:e}] rad/s", 100.0 * variation);
    }
    variation
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn analytic_examples() {
        let c = CorrelationModel::lorentzian(1.0, 1.0).unwrap();
        assert_eq!(analytic_coherence(0.0, 5.0, 3.0, &c), 1.0);
        assert_relative_eq!(analytic_coherence(1e6, 1.0, 1.0, &c), (-1.0f64).exp(), max_relative = 1e-10);
        // small s: rate γ (s/l_c)²
        let s = 1e-3;
        let rate = -analytic_coherence(s, 1.0, 2.0, &c).ln();
        assert_relative_eq!(rate, 2.0 * s * s, max_relative = 1e-5);
    }

    #[test]
    fn gaussian_overlap() {
        let n = 256;
        let dz = 0.1;
        let sigma = 1.0;
        let psi: Vec<Complex64> = (0..n)
            .map(|i| {
                let z = (i as f64 - n as f64 / 2.0) * dz;
                Complex64::new((-z * z / (4.0 * sigma * sigma)).exp(), 0.0)
            })
            .collect();
        let norm = amplitude_coherence(&psi, dz, 0.0).re;
        for m in [0, 3, 10, 25] {
            let s = f64::from(m) * dz;
            let rho = amplitude_coherence(&psi, dz, s) / norm;
            // |ψ|² of rms width σ gives e^{−s²/8σ²}
            assert_relative_eq!(rho.re, (-s * s / (8.0 * sigma * sigma)).exp(), max_relative = 1e-10);
        }
        assert!(spectrum_flatness(|_| 1.0, 0.0, 1.0) == 0.0);
    }

    proptest! {
        #[test]
        fn hermitian(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8..40), s in -5.0f64..5.0) {
            let psi: Vec<Complex64> = values.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
            let plus = amplitude_coherence(&psi, 0.3, s);
            let minus = amplitude_coherence(&psi, 0.3, -s);
            prop_assert!((plus - minus.conj()).norm() < 1e-12);
            let zero = amplitude_coherence(&psi, 0.3, 0.0);
            let total: f64 = psi.iter().map(|p| p.norm_sqr()).sum::<f64>() * 0.3;
            prop_assert!((zero.re - total).abs() < 1e-12 && zero.im.abs() < 1e-12);
        }
    }
}
