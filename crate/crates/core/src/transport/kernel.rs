use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::constants::{E_CHARGE, HBAR, MU0};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::numerics::bessel::{k0_k1_scaled, x_k1};
use crate::numerics::quadrature::{integrate_with_points, Tolerance};
use crate::spectra::{CorrelationForm, CorrelationModel, ElectronVelocityDist};

/// Parameters of longitudinal scattering by shot noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportParams {
    /// Angle between the atomic spin and the wire field, rad.
    pub alpha: f64,
    /// Initial atomic momentum along the guide, kg·m/s.
    pub p_initial: f64,
    /// kg
    pub mass: f64,
    /// J/T
    pub mu_parallel: f64,
    pub electron_dist: ElectronVelocityDist,
}

impl TransportParams {
    pub fn new(alpha: f64, p_initial: f64, mass: f64, mu_parallel: f64, electron_dist: ElectronVelocityDist) -> Result<Self> {
        if !(0.0..=PI).contains(&alpha) {
            return Err(Error::domain(format!("spin angle must lie in [0, π], got {alpha}")));
        }
        ensure_positive("mass", mass)?;
        if !p_initial.is_finite() {
            return Err(Error::domain("initial momentum must be finite"));
        }
        Ok(TransportParams { alpha, p_initial, mass, mu_parallel, electron_dist })
    }
}

/// `γ_SN = (μ∥² cos²α / ħ²) · μ0² e I / (4π² h²)`.
pub fn shot_rate_scale(params: &TransportParams, current: f64, h: f64) -> Result<f64> {
    ensure_non_negative("current", current)?;
    ensure_positive("height", h)?;
    let c = params.alpha.cos();
    Ok((params.mu_parallel * c / HBAR).powi(2) * MU0 * MU0 * E_CHARGE * current / (4.0 * PI * PI * h * h))
}

/// Shot-noise rate per wavevector transfer for `p_i → p_i + ħq`,
/// `γ_SN |v_i / q| P(v_i) [qh K₁(qh)]²` with `v_i = p_i / M` and `P` the
/// passage density of the electrons. Diverges like `1/q` in the forward
/// direction, so `q = 0` is an error.
pub fn differential_rate_shot(q: f64, params: &TransportParams, current: f64, h: f64) -> Result<f64> {
    if q == 0.0 {
        return Err(Error::domain("forward divergence: the shot-noise rate per wavevector is infinite at q = 0"));
    }
    let v = params.p_initial / params.mass;
    let gamma = shot_rate_scale(params, current, h)?;
    Ok(gamma * (v / q).abs() * params.electron_dist.passage_density(v) * x_k1(q.abs() * h).powi(2))
}

/// `γ/(2π) ∫ds e^{iqs} C(s)`, the rate per wavevector transfer for a flat
/// spectrum with total rate `γ`. Homogeneous noise returns infinity at
/// `q = 0` and zero elsewhere.
pub fn differential_rate_generic(model: &CorrelationModel, gamma: f64, q: f64) -> Result<f64> {
    ensure_non_negative("rate", gamma)?;
    let q = q.abs();
    let ft = match &model.form {
        CorrelationForm::Lorentzian { length } => PI * length * (-q * length).exp(),
        CorrelationForm::Homogeneous => return Ok(if q == 0.0 { f64::INFINITY } else { 0.0 }),
        CorrelationForm::NearfieldExact { height } => nearfield_transform(q, *height)?,
        CorrelationForm::Tabulated { .. } => tabulated_transform(model, q)?,
    };
    Ok(gamma / (2.0 * PI) * ft)
}

/// `∫ds e^{iqs} C(s)` of the near-field correlation. Writing
/// `C = 2a (1/r − 1/(a+r))` with `a = 2h`, `r = √(s²+a²)` and using
/// `∫ds e^{iqs} e^{−tr} = 2at K₁(a√(t²+q²)) / √(t²+q²)` turns it into the
/// non-oscillatory integral `2a ∫du (1 − e^{−u}) 2u K₁(R)/R`, `R = √(u² + (qa)²)`.
fn nearfield_transform(q: f64, h: f64) -> Result<f64> {
    let a = 2.0 * h;
    let big_q = q * a;
    // K₁(R) = e^{−R} k₁(R); pull out e^{−Q} so deep tails keep relative accuracy
    let integrand = |u: f64| -> f64 {
        let r = (u * u + big_q * big_q).sqrt();
        if r == 0.0 {
            return 0.0;
        }
        let (_, k1s) = k0_k1_scaled(r);
        let excess = u * u / (r + big_q);
        -(-u).exp_m1() * 2.0 * u * k1s * (-excess).exp() / r
    };
    let upper = (90.0 * big_q + 2025.0).sqrt() + 45.0;
    let mut points = vec![0.0, 0.5, 2.0, 8.0, 20.0, (big_q + 1.0).sqrt(), 4.0 * (big_q + 1.0).sqrt(), upper];
    points.retain(|p| *p <= upper);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let tol = Tolerance { relative: 1e-12, absolute: 0.0, max_intervals: 4000 };
    let integral = integrate_with_points(integrand, &points, tol)?;
    Ok(2.0 * a * (-big_q).exp() * integral.value)
}

/// Tabulated correlation: the Lorentzian with the same `1/s²` tail is
/// transformed in closed form, the remainder (decaying like `s⁻⁴`) by
/// quadrature.
fn tabulated_transform(model: &CorrelationModel, q: f64) -> Result<f64> {
    let CorrelationForm::Tabulated { s, .. } = &model.form else {
        unreachable!("tabulated model expected");
    };
    let tail = model.tail_coefficient().unwrap_or(0.0);
    let lorentz = if tail > 0.0 { tail.sqrt() } else { 0.0 };
    let closed = if tail > 0.0 { PI * lorentz * (-q * lorentz).exp() } else { 0.0 };
    let remainder = |x: f64| -> f64 {
        let c_l = if tail > 0.0 { tail / (x * x + tail) } else { 0.0 };
        (q * x).cos() * (model.value(x) - c_l)
    };
    let s_last = s[s.len() - 1];
    let mut points = s.clone();
    let upper = 100.0 * s_last;
    let mut x = s_last;
    while x < upper {
        x = (2.0 * x).min(upper);
        points.push(x);
    }
    if q > 0.0 {
        let period = 2.0 * PI / q;
        let mut x = period;
        while x < upper && points.len() < 200_000 {
            points.push(x);
            x += period;
        }
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let tol = Tolerance { relative: 1e-10, absolute: 1e-13 * s_last, max_intervals: points.len() + 20_000 };
    Ok(closed + 2.0 * integrate_with_points(remainder, &points, tol)?.value)
}

/// Rates `r_k` for momentum kicks `p → p + ħkΔq` on a circular momentum
/// grid of `n_p` bins with `Δq = 2π/L`. Kicks that differ by a whole grid
/// period land on the same bin and are summed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatteringKernel {
    /// Total rate γ, 1/s.
    pub gamma_total: f64,
    /// Centered wavevectors `kΔq`, `k = −n_p/2 … n_p/2 − 1`, rad/m.
    pub q_grid: Vec<f64>,
    /// Rate per wavevector on `q_grid` (folded), 1/s per rad/m.
    pub d_gamma_dq: Vec<f64>,
    /// `r_k` indexed by `k mod n_p`, 1/s.
    pub rates: Vec<f64>,
    /// Box length the kernel was built for.
    pub length: f64,
}

impl ScatteringKernel {
    fn from_rates(gamma_total: f64, rates: Vec<f64>, length: f64) -> Self {
        let n = rates.len();
        let dq = 2.0 * PI / length;
        let half = (n / 2) as i64;
        let q_grid: Vec<f64> = (-half..n as i64 - half).map(|k| k as f64 * dq).collect();
        let d_gamma_dq = (-half..n as i64 - half).map(|k| rates[k.rem_euclid(n as i64) as usize] / dq).collect();
        ScatteringKernel { gamma_total, q_grid, d_gamma_dq, rates, length }
    }

    pub fn n_p(&self) -> usize {
        self.rates.len()
    }

    pub fn dq(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Kernel of a flat spectrum with correlation `model` and total rate
    /// `gamma`. The rates are the discrete transform of the correlation
    /// periodized over the box, so that at the separations `s_m = mL/n_p`
    /// the scattering multiplies the coherence by exactly
    /// `exp(−γt [C_L(0) − C_L(s_m)])`, `C_L(s) = Σ_n C(s + nL)`.
    pub fn from_correlation(model: &CorrelationModel, gamma: f64, length: f64, n_p: usize) -> Result<Self> {
        ensure_non_negative("rate", gamma)?;
        ensure_positive("box length", length)?;
        if n_p < 2 {
            return Err(Error::config("momentum grid needs at least two bins"));
        }
        let periodized: Vec<Complex64> = (0..n_p)
            .map(|m| Complex64::new(periodized_correlation(model, m as f64 * length / n_p as f64, length), 0.0))
            .collect();
        let mut spectrum = periodized;
        FftPlanner::new().plan_fft_forward(n_p).process(&mut spectrum);
        let rates = spectrum.iter().map(|c| (gamma * c.re / n_p as f64).max(0.0)).collect();
        Ok(Self::from_rates(gamma, rates, length))
    }

    /// Shot-noise kernel at fixed initial momentum. The forward bin `q = 0`
    /// is left empty: the box cuts the divergence at `|q| = 2π/L`.
    pub fn shot(params: &TransportParams, current: f64, h: f64, length: f64, n_p: usize) -> Result<Self> {
        ensure_positive("box length", length)?;
        if n_p < 2 {
            return Err(Error::config("momentum grid needs at least two bins"));
        }
        let dq = 2.0 * PI / length;
        let gamma = shot_rate_scale(params, current, h)?;
        let mut rates = vec![0.0; n_p];
        // (qhK₁)² < e^{−2qh}·qh·π/2 is negligible beyond qh ~ 40
        let k_max = ((40.0 / h) / dq).ceil() as i64 + n_p as i64;
        for k in -k_max..=k_max {
            if k == 0 {
                continue;
            }
            let r = differential_rate_shot(k as f64 * dq, params, current, h)? * dq;
            rates[k.rem_euclid(n_p as i64) as usize] += r;
        }
        Ok(Self::from_rates(gamma, rates, length))
    }

    /// `Σ_k r_k`, the rate of all kicks including the forward bin.
    pub fn integrated_rate(&self) -> f64 {
        self.rates.iter().sum()
    }
}

/// `Σ_n C(s + nL)`.
fn periodized_correlation(model: &CorrelationModel, s: f64, length: f64) -> f64 {
    match &model.form {
        // all weight in the forward bin
        CorrelationForm::Homogeneous => 1.0,
        CorrelationForm::Lorentzian { length: l } => periodized_lorentzian(*l, s, length),
        _ => {
            // subtract the Lorentzian with the same 1/s² tail, sum the rest directly
            let tail = model.tail_coefficient().unwrap_or(0.0);
            let l = tail.sqrt();
            let c_l = |x: f64| if l > 0.0 { l * l / (x * x + l * l) } else { 0.0 };
            let remainder = |x: f64| model.value(x) - c_l(x);
            let mut acc = remainder(s);
            let scale = model.natural_scale();
            let n_max = ((20_000.0 * scale / length).ceil() as i64).max(2000);
            for n in 1..=n_max {
                let x = n as f64 * length;
                acc += remainder(s + x) + remainder(s - x);
            }
            // what is left decays like |x|⁻³: Σ_{n>N} c/(x+nL)³ ≈ c / (2L (x + (N+½)L)²)
            let edge = n_max as f64 * length;
            for x in [s + edge, edge - s] {
                let c = remainder(x) * x.powi(3);
                acc += c / (2.0 * length * (x + 0.5 * length).powi(2));
            }
            acc + if l > 0.0 { periodized_lorentzian(l, s, length) } else { 0.0 }
        }
    }
}

/// `Σ_n ℓ²/((s+nL)² + ℓ²) = (πℓ/L) sinh(2πℓ/L) / (cosh(2πℓ/L) − cos(2πs/L))`.
fn periodized_lorentzian(l: f64, s: f64, length: f64) -> f64 {
    let b = 2.0 * PI * l / length;
    // cosh b − cos θ = 2 sinh²(b/2) + (1 − cos θ), kept apart to avoid cancellation
    let denom = 2.0 * (0.5 * b).sinh().powi(2) + 2.0 * (PI * s / length).sin().powi(2);
    PI * l / length * b.sinh() / denom
}
