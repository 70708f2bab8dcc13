use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::grid::{Grid, Spectral};
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Sampler for a real potential that is white in time and
/// Lorentzian-correlated in space:
/// `⟨V(z,t)V(z',t')⟩ = γ C_per(z − z') δ(t − t')` with
/// `C(s) = l_c² / (s² + l_c²)` periodized over the box.
///
/// Each step draws a field that is constant over `dt` with covariance
/// `(γ/dt) C_per`. The covariance is circulant, so its eigenvalues are the
/// aliased Lorentzian transform `(π l_c/Δz) Σ_n exp(−|k_m + nK| l_c)`,
/// which is a geometric series in closed form and strictly positive.
pub struct NoiseGenerator {
    grid: Grid,
    gamma: f64,
    correlation_length: f64,
    sqrt_eigenvalues: Vec<f64>,
}

impl NoiseGenerator {
    pub fn new(grid: Grid, correlation_length: f64, gamma: f64) -> Result<Self> {
        ensure_positive("noise correlation length", correlation_length)?;
        ensure_non_negative("noise rate γ", gamma)?;
        if correlation_length < 2.0 * grid.dz() {
            return Err(Error::config(format!(
                "noise correlation length {correlation_length} is shorter than two grid spacings ({})",
                2.0 * grid.dz()
            )));
        }
        let n = grid.n;
        let x = 2.0 * std::f64::consts::PI * correlation_length / grid.length;
        let prefactor = std::f64::consts::PI * correlation_length / grid.dz();
        let denom = -(-(n as f64) * x).exp_m1();
        let sqrt_eigenvalues = (0..n)
            .map(|m| {
                let m = m as f64;
                let lambda = prefactor * ((-m * x).exp() + (-(n as f64 - m) * x).exp()) / denom;
                lambda.sqrt()
            })
            .collect();
        Ok(NoiseGenerator { grid, gamma, correlation_length, sqrt_eigenvalues })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn correlation_length(&self) -> f64 {
        self.correlation_length
    }

    /// Covariance of neighbouring samples at lag `m`, normalized by `γ/dt`.
    pub fn lag_correlation(&self, m: usize) -> f64 {
        let n = self.grid.n;
        let sum: f64 = self
            .sqrt_eigenvalues
            .iter()
            .enumerate()
            .map(|(j, s)| s * s * (2.0 * std::f64::consts::PI * (j * m) as f64 / n as f64).cos())
            .sum();
        sum / n as f64
    }

    /// Fills `out` with one field held constant over a step of length `dt`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R, dt: f64, out: &mut [f64]) {
        let mut fft = Spectral::new(self.grid.n);
        let mut buffer = vec![Complex64::new(0.0, 0.0); self.grid.n];
        self.draw_with(rng, dt, out, &mut fft, &mut buffer);
    }

    pub(crate) fn draw_with<R: Rng + ?Sized>(&self, rng: &mut R, dt: f64, out: &mut [f64], fft: &mut Spectral, buffer: &mut [Complex64]) {
        if self.gamma == 0.0 {
            out.iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        for b in buffer.iter_mut() {
            *b = Complex64::new(rng.sample(StandardNormal), 0.0);
        }
        fft.forward(buffer);
        for (b, s) in buffer.iter_mut().zip(&self.sqrt_eigenvalues) {
            *b *= *s;
        }
        fft.inverse(buffer);
        let scale = (self.gamma / dt).sqrt() / self.grid.n as f64;
        for (o, b) in out.iter_mut().zip(buffer.iter()) {
            *o = b.re * scale;
        }
    }
}

/// One freshly drawn noise field for a step of length `dt`.
pub fn generate_noise_step<R: Rng + ?Sized>(generator: &NoiseGenerator, rng: &mut R, dt: f64) -> Vec<f64> {
    let mut out = vec![0.0; generator.grid.n];
    generator.draw(rng, dt, &mut out);
    out
}
