use num_complex::Complex64;
use rand::Rng;

use super::grid::{CondensateState, Grid, Spectral};
use super::noise::NoiseGenerator;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Noise field generator paired with the random stream that feeds it.
pub struct NoiseSource<'a, R: ?Sized> {
    pub generator: &'a NoiseGenerator,
    pub rng: &'a mut R,
}

/// Strang split-step propagator for
/// `i∂ψ = [−½∂² + V(z) + V_noise(z,t) + g|ψ|²] ψ`.
pub struct GpeStepper {
    grid: Grid,
    g: f64,
    dt: f64,
    kinetic: Vec<Complex64>,
    potential: Vec<f64>,
    noise: Vec<f64>,
    fft: Spectral,
    buffer: Vec<Complex64>,
}

impl GpeStepper {
    pub fn new(grid: Grid, g: f64, dt: f64, static_potential: Option<&[f64]>) -> Result<Self> {
        ensure_positive("time step", dt)?;
        ensure_non_negative("interaction strength g", g)?;
        let max_kinetic = 0.5 * grid.k_max().powi(2);
        if dt * max_kinetic >= 0.5 {
            return Err(Error::precondition(format!(
                "time step {dt} times the largest kinetic energy {max_kinetic:.4e} must stay below 0.5"
            )));
        }
        let potential = match static_potential {
            Some(v) if v.len() != grid.n => {
                return Err(Error::config(format!("potential has {} points, grid has {}", v.len(), grid.n)))
            }
            Some(v) => v.to_vec(),
            None => vec![0.0; grid.n],
        };
        let n = grid.n as f64;
        let kinetic = (0..grid.n).map(|j| Complex64::from_polar(1.0 / n, -0.5 * dt * grid.k(j).powi(2))).collect();
        Ok(GpeStepper {
            grid,
            g,
            dt,
            kinetic,
            potential,
            noise: vec![0.0; grid.n],
            fft: Spectral::new(grid.n),
            buffer: vec![Complex64::new(0.0, 0.0); grid.n],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `psi` by one step, drawing a fresh noise field when a source
    /// is given.
    pub fn step<R: Rng + ?Sized>(&mut self, psi: &mut [Complex64], noise: Option<&mut NoiseSource<'_, R>>) {
        match noise {
            Some(source) => source.generator.draw_with(source.rng, self.dt, &mut self.noise, &mut self.fft, &mut self.buffer),
            None => self.noise.iter_mut().for_each(|v| *v = 0.0),
        }
        self.half_kick(psi);
        self.fft.forward(psi);
        psi.iter_mut().zip(&self.kinetic).for_each(|(p, k)| *p *= k);
        self.fft.inverse(psi);
        self.half_kick(psi);
    }

    fn half_kick(&self, psi: &mut [Complex64]) {
        let h = 0.5 * self.dt;
        for ((p, v), w) in psi.iter_mut().zip(&self.potential).zip(&self.noise) {
            let phase = -h * (v + w + self.g * p.norm_sqr());
            *p *= Complex64::from_polar(1.0, phase);
        }
    }

    /// Runs `n_steps` steps, failing if the amplitude stops being finite.
    pub fn run<R: Rng + ?Sized>(&mut self, psi: &mut [Complex64], n_steps: usize, mut noise: Option<&mut NoiseSource<'_, R>>) -> Result<()> {
        if psi.len() != self.grid.n {
            return Err(Error::config(format!("amplitude has {} points, grid has {}", psi.len(), self.grid.n)));
        }
        for step in 0..n_steps {
            self.step(psi, noise.as_deref_mut());
            let norm: f64 = psi.iter().map(|p| p.norm_sqr()).sum();
            if !norm.is_finite() {
                return Err(Error::numerical(format!("amplitude became non-finite at step {step}")));
            }
        }
        Ok(())
    }
}

/// Evolves a copy of `state` for `n_steps` steps of length `dt`.
pub fn evolve_gpe<R: Rng + ?Sized>(
    state: &CondensateState,
    g: f64,
    dt: f64,
    n_steps: usize,
    static_potential: Option<&[f64]>,
    noise: Option<&mut NoiseSource<'_, R>>,
) -> Result<CondensateState> {
    let mut stepper = GpeStepper::new(state.grid, g, dt, static_potential)?;
    let mut out = state.clone();
    stepper.run(&mut out.psi, n_steps, noise)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpe::{ground_state, GroundStateOptions};
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    type NoRng = ChaCha20Rng;

    #[test]
    fn free_gaussian_spreads_as_predicted() {
        let grid = Grid::new(512, 60.0).unwrap();
        let sigma = 0.5f64.sqrt();
        let state = CondensateState::gaussian(grid, sigma).unwrap();
        let dt = 5e-4;
        let steps = 4000;
        let out = evolve_gpe::<NoRng>(&state, 0.0, dt, steps, None, None).unwrap();
        let t = dt * steps as f64;
        let expected = sigma * (1.0 + (t / (2.0 * sigma * sigma)).powi(2)).sqrt();
        assert!((out.rms_width() - expected).abs() / expected < 1e-6, "{} vs {expected}", out.rms_width());
    }

    #[test]
    fn ground_state_is_stationary() {
        let grid = Grid::new(256, 20.0).unwrap();
        let g = 5.0;
        let state = ground_state(grid, g, &GroundStateOptions::default()).unwrap();
        let v = grid.harmonic(1.0);
        let out = evolve_gpe::<NoRng>(&state, g, 5e-4, 4000, Some(&v), None).unwrap();
        assert!(1.0 - state.fidelity(&out) < 1e-6, "infidelity {}", 1.0 - state.fidelity(&out));
    }

    #[test]
    fn trapped_oscillator_ground_state_is_stationary() {
        let grid = Grid::new(256, 20.0).unwrap();
        let state = ground_state(grid, 0.0, &GroundStateOptions::default()).unwrap();
        let v = grid.harmonic(1.0);
        let out = evolve_gpe::<NoRng>(&state, 0.0, 5e-4, 1000, Some(&v), None).unwrap();
        assert!(1.0 - state.fidelity(&out) < 1e-9, "infidelity {}", 1.0 - state.fidelity(&out));
    }

    #[test]
    fn breathing_conserves_norm_and_energy() {
        let grid = Grid::new(256, 24.0).unwrap();
        let g = 10.0;
        let state = ground_state(grid, g, &GroundStateOptions::default()).unwrap();
        let v = grid.harmonic(0.5);
        let e0 = state.energy(&v, g);
        let out = evolve_gpe::<NoRng>(&state, g, 2e-4, 5000, Some(&v), None).unwrap();
        assert_relative_eq!(out.norm(), 1.0, max_relative = 1e-10);
        let e1 = out.energy(&v, g);
        assert!((e1 - e0).abs() / e0 < 1e-6, "energy {e0} -> {e1}");
    }

    #[test]
    fn noisy_evolution_conserves_norm() {
        let grid = Grid::new(256, 30.0).unwrap();
        let gen = NoiseGenerator::new(grid, 0.5, 20.0).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let state = CondensateState::gaussian(grid, 1.0).unwrap();
        let mut source = NoiseSource { generator: &gen, rng: &mut rng };
        let out = evolve_gpe(&state, 3.0, 5e-4, 1000, None, Some(&mut source)).unwrap();
        assert_relative_eq!(out.norm(), 1.0, max_relative = 1e-10);
    }

    #[test]
    fn rejects_unstable_step() {
        let grid = Grid::new(512, 40.0).unwrap();
        let dt_max = 1.0 / grid.k_max().powi(2);
        assert!(matches!(GpeStepper::new(grid, 0.0, 1.01 * dt_max, None), Err(Error::Precondition(_))));
        assert!(GpeStepper::new(grid, 0.0, 0.99 * dt_max, None).is_ok());
    }
}
