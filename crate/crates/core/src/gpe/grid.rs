use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{ensure_positive, Error, Result};

/// Periodic grid `z_i = −L/2 + iΔz`, `i < n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub n: usize,
    pub length: f64,
}

impl Grid {
    pub fn new(n: usize, length: f64) -> Result<Self> {
        ensure_positive("box length", length)?;
        if n < 4 {
            return Err(Error::config(format!("grid needs at least 4 points, got {n}")));
        }
        Ok(Grid { n, length })
    }

    pub fn dz(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn z(&self, i: usize) -> f64 {
        -0.5 * self.length + i as f64 * self.dz()
    }

    /// Wavenumber of FFT bin `j`.
    pub fn k(&self, j: usize) -> f64 {
        let j = if j < self.n.div_ceil(2) { j as f64 } else { j as f64 - self.n as f64 };
        2.0 * PI / self.length * j
    }

    pub fn k_max(&self) -> f64 {
        PI / self.dz()
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.z(i)).collect()
    }

    /// Harmonic potential `ω² z² / 2`.
    pub fn harmonic(&self, omega: f64) -> Vec<f64> {
        self.positions().iter().map(|z| 0.5 * omega * omega * z * z).collect()
    }
}

/// Forward and inverse FFTs of one size with their scratch space.
pub(crate) struct Spectral {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<Complex64>,
}

impl Spectral {
    pub(crate) fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(n);
        let inverse = planner.plan_fft_inverse(n);
        let len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Spectral { forward, inverse, scratch: vec![Complex64::new(0.0, 0.0); len] }
    }

    pub(crate) fn forward(&mut self, data: &mut [Complex64]) {
        self.forward.process_with_scratch(data, &mut self.scratch);
    }

    /// Unnormalized inverse transform.
    pub(crate) fn inverse(&mut self, data: &mut [Complex64]) {
        self.inverse.process_with_scratch(data, &mut self.scratch);
    }
}

/// Condensate amplitude on a grid, normalized to `Σ|ψ|²Δz = 1` unless
/// stated otherwise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CondensateState {
    pub grid: Grid,
    pub psi: Vec<Complex64>,
}

impl CondensateState {
    pub fn new(grid: Grid, psi: Vec<Complex64>) -> Result<Self> {
        if psi.len() != grid.n {
            return Err(Error::config(format!("amplitude has {} points, grid has {}", psi.len(), grid.n)));
        }
        Ok(CondensateState { grid, psi })
    }

    /// Real gaussian of rms density width `sigma` centred at `z = 0`.
    pub fn gaussian(grid: Grid, sigma: f64) -> Result<Self> {
        ensure_positive("width", sigma)?;
        let psi = grid.positions().iter().map(|z| Complex64::new((-z * z / (4.0 * sigma * sigma)).exp(), 0.0)).collect();
        let mut state = CondensateState { grid, psi };
        state.normalize();
        Ok(state)
    }

    pub fn norm(&self) -> f64 {
        self.psi.iter().map(|p| p.norm_sqr()).sum::<f64>() * self.grid.dz()
    }

    pub fn normalize(&mut self) {
        let scale = 1.0 / self.norm().sqrt();
        self.psi.iter_mut().for_each(|p| *p *= scale);
    }

    pub fn density(&self) -> Vec<f64> {
        self.psi.iter().map(|p| p.norm_sqr()).collect()
    }

    /// rms width of the density about its mean.
    pub fn rms_width(&self) -> f64 {
        let dz = self.grid.dz();
        let density = self.density();
        let n: f64 = density.iter().sum::<f64>() * dz;
        let mean: f64 = density.iter().enumerate().map(|(i, d)| d * self.grid.z(i)).sum::<f64>() * dz / n;
        let var: f64 = density.iter().enumerate().map(|(i, d)| d * (self.grid.z(i) - mean).powi(2)).sum::<f64>() * dz / n;
        var.sqrt()
    }

    /// `|⟨φ|ψ⟩|² / (⟨φ|φ⟩⟨ψ|ψ⟩)`
    pub fn fidelity(&self, other: &CondensateState) -> f64 {
        let overlap: Complex64 = self.psi.iter().zip(&other.psi).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.dz();
        overlap.norm_sqr() / (self.norm() * other.norm())
    }

    /// Kinetic, potential and interaction energy `(T, V, E_int)` with
    /// `E_int = (g/2) ∫|ψ|⁴`.
    pub fn energy_parts(&self, potential: &[f64], g: f64) -> (f64, f64, f64) {
        let dz = self.grid.dz();
        let n = self.grid.n;
        let mut spectrum = self.psi.clone();
        Spectral::new(n).forward(&mut spectrum);
        // Parseval: Σ|ψ_z|² Δz = Σ|Ψ_k|² Δz / n
        let kinetic: f64 = spectrum.iter().enumerate().map(|(j, c)| 0.5 * self.grid.k(j).powi(2) * c.norm_sqr()).sum::<f64>() * dz / n as f64;
        let pot: f64 = self.psi.iter().zip(potential).map(|(p, v)| v * p.norm_sqr()).sum::<f64>() * dz;
        let int: f64 = self.psi.iter().map(|p| p.norm_sqr().powi(2)).sum::<f64>() * dz * 0.5 * g;
        (kinetic, pot, int)
    }

    pub fn energy(&self, potential: &[f64], g: f64) -> f64 {
        let (t, v, i) = self.energy_parts(potential, g);
        (t + v + i) / self.norm()
    }

    /// `μ = (T + V + 2E_int) / N`
    pub fn chemical_potential(&self, potential: &[f64], g: f64) -> f64 {
        let (t, v, i) = self.energy_parts(potential, g);
        (t + v + 2.0 * i) / self.norm()
    }

    /// `ρ(mΔz) = Σ_z ψ*(z + mΔz) ψ(z) Δz` for `m = 0 … max_lag`, by FFT.
    pub fn coherence_lags(&self, max_lag: usize) -> Vec<Complex64> {
        let n = self.grid.n;
        let mut spectrum = self.psi.clone();
        let mut fft = Spectral::new(n);
        fft.forward(&mut spectrum);
        let mut power: Vec<Complex64> = spectrum.iter().map(|c| Complex64::new(c.norm_sqr(), 0.0)).collect();
        fft.forward(&mut power);
        let scale = self.grid.dz() / n as f64;
        power.iter().take(max_lag.min(n - 1) + 1).map(|c| c * scale).collect()
    }
}
