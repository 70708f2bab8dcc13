use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::kernel::ScatteringKernel;
use crate::error::{ensure_positive, Error, Result};

/// Phase-space density on a periodic `(z, p)` grid. The momentum grid is
/// centred, circular and dual to the box: `Δp = 2πħ/L`, so every kick `ħq`
/// with `q` a multiple of `2π/L` lands on a bin.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerState {
    pub n_z: usize,
    /// Box length L.
    pub length: f64,
    pub n_p: usize,
    pub dp: f64,
    pub mass: f64,
    /// ħ in the units of the grid (1 in oscillator units).
    pub hbar: f64,
    /// `values[iz * n_p + ip]`
    pub values: Vec<f64>,
}

impl WignerState {
    pub fn zeros(n_z: usize, length: f64, n_p: usize, mass: f64, hbar: f64) -> Result<Self> {
        ensure_positive("box length", length)?;
        ensure_positive("mass", mass)?;
        ensure_positive("hbar", hbar)?;
        if n_z < 2 || n_p < 2 {
            return Err(Error::config("phase-space grid needs at least two points per axis"));
        }
        Ok(WignerState { n_z, length, n_p, dp: 2.0 * PI * hbar / length, mass, hbar, values: vec![0.0; n_z * n_p] })
    }

    /// Normalized product of gaussians centred on `z = 0` and `p = p0`.
    #[allow(clippy::too_many_arguments)]
    pub fn gaussian(n_z: usize, length: f64, n_p: usize, mass: f64, hbar: f64, sigma_z: f64, sigma_p: f64, p0: f64) -> Result<Self> {
        ensure_positive("position width", sigma_z)?;
        ensure_positive("momentum width", sigma_p)?;
        let mut state = Self::zeros(n_z, length, n_p, mass, hbar)?;
        for iz in 0..n_z {
            let z = state.z(iz);
            let fz = (-0.5 * (z / sigma_z).powi(2)).exp();
            for ip in 0..n_p {
                let p = state.p(ip) - p0;
                state.values[iz * n_p + ip] = fz * (-0.5 * (p / sigma_p).powi(2)).exp();
            }
        }
        let norm = state.norm();
        state.values.iter_mut().for_each(|v| *v /= norm);
        Ok(state)
    }

    pub fn dz(&self) -> f64 {
        self.length / self.n_z as f64
    }

    /// Positions `−L/2 + iΔz`.
    pub fn z(&self, iz: usize) -> f64 {
        -0.5 * self.length + iz as f64 * self.dz()
    }

    /// Momenta `(ip − n_p/2) Δp`.
    pub fn p(&self, ip: usize) -> f64 {
        (ip as f64 - (self.n_p / 2) as f64) * self.dp
    }

    pub fn p_max(&self) -> f64 {
        (0..self.n_p).map(|ip| self.p(ip).abs()).fold(0.0, f64::max)
    }

    /// `Σ W Δz Δp`
    pub fn norm(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dz() * self.dp
    }

    /// `∫dz W(z, p)` per momentum bin.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let mut marginal = vec![0.0; self.n_p];
        for row in self.values.chunks(self.n_p) {
            for (m, v) in marginal.iter_mut().zip(row) {
                *m += v * self.dz();
            }
        }
        marginal
    }

    /// Spatially averaged coherence `ρ(s) = ∫dz dp W(z, p) e^{−ips/ħ}`.
    pub fn coherence(&self, s: f64) -> Complex64 {
        self.momentum_marginal()
            .iter()
            .enumerate()
            .map(|(ip, w)| Complex64::from_polar(w * self.dp, -self.p(ip) * s / self.hbar))
            .sum()
    }

    /// Separations `mL/n_p` at which the grid represents `ρ` exactly.
    pub fn dual_separation(&self, m: i64) -> f64 {
        m as f64 * self.length / self.n_p as f64
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Strang-split propagator for one time step: half shear, scattering,
/// half shear.
#[derive(Debug, Clone)]
pub struct MasterStepper {
    dt: f64,
    /// One-step transition weights `T_k` for the kick `ip → ip + k`.
    transition: Vec<(usize, f64)>,
    /// Per momentum row: whole-cell and fractional half-step shift.
    shifts: Vec<(i64, f64)>,
}

impl MasterStepper {
    pub fn new(state: &WignerState, kernel: &ScatteringKernel, dt: f64) -> Result<Self> {
        ensure_positive("time step", dt)?;
        if kernel.n_p() != state.n_p || (kernel.length - state.length).abs() > 1e-12 * state.length {
            return Err(Error::config(format!(
                "kernel built for {} bins over L = {}, state has {} bins over L = {}",
                kernel.n_p(),
                kernel.length,
                state.n_p,
                state.length
            )));
        }
        if kernel.gamma_total > 0.0 && dt > 0.1 / kernel.gamma_total * (1.0 + 1e-12) {
            return Err(Error::config(format!("time step {dt:e} exceeds 0.1/γ = {:e}", 0.1 / kernel.gamma_total)));
        }
        let dz = state.dz();
        let shifts: Vec<(i64, f64)> = (0..state.n_p)
            .map(|ip| {
                let sigma = state.p(ip) * 0.5 * dt / (state.mass * dz);
                let whole = sigma.round();
                if (sigma - whole).abs() < 1e-12 * sigma.abs().max(1.0) {
                    (whole as i64, 0.0)
                } else {
                    (sigma.floor() as i64, sigma - sigma.floor())
                }
            })
            .collect();
        // whole-cell shifts are exact permutations; interpolated ones need the CFL-type bound
        let interpolates = shifts.iter().any(|s| s.1 != 0.0);
        let limit = 0.2 * dz * state.mass / state.p_max();
        if interpolates && dt > limit * (1.0 + 1e-12) {
            return Err(Error::config(format!("time step {dt:e} exceeds the advection limit 0.2 Δz M / p_max = {limit:e}")));
        }
        Ok(MasterStepper { dt, transition: transition_column(kernel, dt), shifts })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn step(&self, state: &mut WignerState) {
        self.shear(state);
        self.scatter(state);
        self.shear(state);
    }

    fn shear(&self, state: &mut WignerState) {
        let (n_z, n_p) = (state.n_z, state.n_p);
        let old = state.values.clone();
        for (ip, &(whole, frac)) in self.shifts.iter().enumerate() {
            for iz in 0..n_z {
                let src = (iz as i64 - whole).rem_euclid(n_z as i64) as usize;
                let value = if frac == 0.0 {
                    old[src * n_p + ip]
                } else {
                    let src2 = (src + n_z - 1) % n_z;
                    (1.0 - frac) * old[src * n_p + ip] + frac * old[src2 * n_p + ip]
                };
                state.values[iz * n_p + ip] = value;
            }
        }
    }

    fn scatter(&self, state: &mut WignerState) {
        let n_p = state.n_p;
        let transition = &self.transition;
        state.values.par_chunks_mut(n_p).for_each(|row| {
            let old = row.to_vec();
            for (j, out) in row.iter_mut().enumerate() {
                let mut acc = 0.0;
                for &(k, t) in transition {
                    let src = j + k;
                    acc += t * old[if src >= n_p { src - n_p } else { src }];
                }
                *out = acc;
            }
        });
    }
}

/// Exact one-step propagator of the circulant gain–loss generator,
/// `T = F⁻¹ exp(dt λ)`. Round-off negatives are clipped and the column is
/// renormalized so that positivity and norm hold to machine precision.
fn transition_column(kernel: &ScatteringKernel, dt: f64) -> Vec<(usize, f64)> {
    let n = kernel.n_p();
    let total: f64 = kernel.rates.iter().skip(1).sum();
    let mut generator: Vec<Complex64> = kernel.rates.iter().map(|r| Complex64::new(*r, 0.0)).collect();
    generator[0] = Complex64::new(-total, 0.0);
    let mut planner = FftPlanner::new();
    // λ_m = Σ_k G_k e^{2πikm/n}
    planner.plan_fft_inverse(n).process(&mut generator);
    let mut column: Vec<Complex64> = generator.iter().map(|l| (l * dt).exp()).collect();
    planner.plan_fft_forward(n).process(&mut column);
    let mut weights: Vec<f64> = column.iter().map(|c| (c.re / n as f64).max(0.0)).collect();
    // drop weights below round-off of the largest one
    let max = weights.iter().copied().fold(0.0, f64::max);
    weights.iter_mut().for_each(|w| {
        if *w < 1e-17 * max {
            *w = 0.0;
        }
    });
    let sum: f64 = weights.iter().sum();
    weights.iter().enumerate().filter(|(_, w)| **w > 0.0).map(|(k, w)| (k, w / sum)).collect()
}

/// Evolves `state` for time `t` in steps no longer than `dt`.
pub fn evolve_master(state: &WignerState, kernel: &ScatteringKernel, t: f64, dt: f64) -> Result<WignerState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::config(format!("evolution time must be non-negative, got {t}")));
    }
    ensure_positive("time step", dt)?;
    let ratio = t / dt;
    let steps = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) { ratio.round() } else { ratio.ceil() } as usize;
    let mut out = state.clone();
    if steps == 0 {
        return Ok(out);
    }
    let stepper = MasterStepper::new(state, kernel, t / steps as f64)?;
    for _ in 0..steps {
        stepper.step(&mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::CorrelationModel;
    use crate::transport::analytic_coherence;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn state() -> WignerState {
        WignerState::gaussian(32, 64.0, 256, 1.0, 1.0, 2.0, 0.5, 0.0).unwrap()
    }

    #[test]
    fn grid_and_norm() {
        let s = state();
        assert_relative_eq!(s.norm(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(s.dp, 2.0 * PI / 64.0, max_relative = 1e-15);
        assert_relative_eq!(s.coherence(0.0).re, 1.0, max_relative = 1e-14);
        let c = s.coherence(1.3);
        assert_relative_eq!(s.coherence(-1.3).re, c.re, max_relative = 1e-14);
        assert_relative_eq!(s.coherence(-1.3).im, -c.im, epsilon = 1e-15);
        // gaussian momentum distribution of width σ_p gives e^{−σ_p² s²/2ħ²}
        assert_relative_eq!(c.re, (-0.5f64 * 0.25 * 1.69).exp(), max_relative = 1e-10);
    }

    #[test]
    fn pure_shear_is_exact_on_grid() {
        // Δp dt / (2 M Δz) = 1: each row moves a whole number of cells per half step
        let mut s = WignerState::gaussian(32, 64.0, 16, 1.0, 1.0, 3.0, 0.1, 0.0).unwrap();
        s.values.iter_mut().enumerate().for_each(|(i, v)| *v *= 1.0 + 0.1 * ((i * 7919) % 13) as f64);
        let kernel = ScatteringKernel::from_correlation(&CorrelationModel::lorentzian(1.0, 1.0).unwrap(), 0.0, 64.0, 16).unwrap();
        let dt = 2.0 * s.mass * s.dz() / s.dp;
        let out = evolve_master(&s, &kernel, 3.0 * dt, dt).unwrap();
        for iz in 0..s.n_z {
            for ip in 0..s.n_p {
                let cells = (s.p(ip) * 3.0 * dt / (s.mass * s.dz())).round() as i64;
                let src = (iz as i64 - cells).rem_euclid(s.n_z as i64) as usize;
                assert_eq!(out.values[iz * s.n_p + ip], s.values[src * s.n_p + ip]);
            }
        }
    }

    #[test]
    fn rejects_large_steps() {
        let s = state();
        let kernel = ScatteringKernel::from_correlation(&CorrelationModel::lorentzian(1.0, 1.0).unwrap(), 10.0, 64.0, 256).unwrap();
        assert!(matches!(MasterStepper::new(&s, &kernel, 0.02), Err(Error::Config(_))));
        let slow = ScatteringKernel::from_correlation(&CorrelationModel::lorentzian(1.0, 1.0).unwrap(), 0.1, 64.0, 256).unwrap();
        // advection limit 0.2 · 2 / 12.5 = 0.032
        assert!(matches!(MasterStepper::new(&s, &slow, 0.05), Err(Error::Config(_))));
        assert!(MasterStepper::new(&s, &slow, 0.03).is_ok());
        let wrong = ScatteringKernel::from_correlation(&CorrelationModel::lorentzian(1.0, 1.0).unwrap(), 0.1, 64.0, 128).unwrap();
        assert!(MasterStepper::new(&s, &wrong, 0.01).is_err());
    }

    #[test]
    fn coherence_follows_analytic_decay() {
        let s = state();
        let (gamma, l) = (2.0, 1.0);
        let model = CorrelationModel::lorentzian(l, 1.0).unwrap();
        let kernel = ScatteringKernel::from_correlation(&model, gamma, s.length, s.n_p).unwrap();
        let t = 0.5;
        let out = evolve_master(&s, &kernel, t, 0.01).unwrap();
        for m in 0..40 {
            let x = s.dual_separation(m);
            let ratio = out.coherence(x).norm() / s.coherence(x).norm();
            assert!((ratio - analytic_coherence(x, t, gamma, &model)).abs() < 1e-4, "s = {x}");
        }
        assert!(out.min_value() >= 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn norm_and_positivity(gamma in 0.0f64..5.0, l in 0.2f64..3.0, p0 in -2.0f64..2.0, nearfield in any::<bool>()) {
            let s = WignerState::gaussian(16, 32.0, 128, 1.0, 1.0, 1.5, 0.7, p0).unwrap();
            let model = if nearfield { CorrelationModel::nearfield(l, 1.0).unwrap() } else { CorrelationModel::lorentzian(l, 1.0).unwrap() };
            let kernel = ScatteringKernel::from_correlation(&model, gamma, 32.0, 128).unwrap();
            let out = evolve_master(&s, &kernel, 0.4, 0.01).unwrap();
            prop_assert!((out.norm() - 1.0).abs() < 1e-12);
            prop_assert!(out.min_value() >= 0.0);
        }
    }
}
