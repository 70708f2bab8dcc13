use log::info;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::evolve::{GpeStepper, NoiseSource};
use super::grid::{CondensateState, Grid};
use super::ground::{ground_state, GroundStateOptions};
use super::noise::NoiseGenerator;
use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Ensemble run of condensates released from a harmonic trap into a
/// fluctuating potential (harmonic-oscillator units).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CondensateConfig {
    /// Interaction strength `g = 2ħΩa_s`.
    pub g: f64,
    /// Total scattering rate γ of the noise potential.
    pub gamma: f64,
    /// Lorentzian correlation length of the noise.
    pub l_c: f64,
    pub n_realizations: usize,
    pub n_z: usize,
    pub length: f64,
    /// Largest time step; each interval between snapshots is split evenly.
    pub dt: f64,
    /// Snapshot times in increasing order; the last is the final time.
    pub times: Vec<f64>,
    pub seed: u64,
    /// Largest separation reported.
    pub s_max: f64,
    /// Worker thread cap; `None` uses the global pool.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl Default for CondensateConfig {
    fn default() -> Self {
        CondensateConfig {
            g: 0.0,
            gamma: 10.0,
            l_c: 0.1f64.sqrt(),
            n_realizations: 500,
            n_z: 512,
            length: 40.0,
            dt: 5e-4,
            times: vec![0.1, 0.3, 0.5],
            seed: 1,
            s_max: 3.0,
            threads: None,
        }
    }
}

impl CondensateConfig {
    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n_z, self.length)
    }

    pub fn t_final(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("g", self.g)?;
        ensure_non_negative("gamma", self.gamma)?;
        ensure_positive("l_c", self.l_c)?;
        ensure_positive("dt", self.dt)?;
        ensure_positive("s_max", self.s_max)?;
        if self.n_realizations == 0 {
            return Err(Error::config("n_realizations must be at least 1"));
        }
        if self.times.is_empty() {
            return Err(Error::config("at least one snapshot time is required"));
        }
        if self.times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) || self.times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config("snapshot times must be finite, non-negative and strictly increasing"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads must be at least 1"));
        }
        let grid = self.grid()?;
        if self.s_max >= 0.5 * self.length {
            return Err(Error::config(format!("s_max {} must be below half the box length", self.s_max)));
        }
        NoiseGenerator::new(grid, self.l_c, self.gamma)?;
        GpeStepper::new(grid, self.g, self.dt, None)?;
        Ok(())
    }

    /// rms extent at the final time for a cloud starting from `initial`:
    /// ballistic expansion with the released interaction energy plus
    /// momentum diffusion `d⟨p²⟩/dt = 2γ/l_c²` from the noise.
    pub fn predicted_extent(&self, initial: &CondensateState) -> f64 {
        let grid = initial.grid;
        let (kinetic, _, interaction) = initial.energy_parts(&vec![0.0; grid.n], self.g);
        let t = self.t_final();
        let p2 = 2.0 * (kinetic + interaction);
        let diffusion = 2.0 * self.gamma / (self.l_c * self.l_c);
        (initial.rms_width().powi(2) + p2 * t * t + diffusion * t.powi(3) / 3.0).sqrt()
    }
}

/// Coherence at one snapshot time on [`EnsembleResult::s_grid`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Snapshot {
    pub time: f64,
    /// Ensemble mean of the complex coherence.
    pub rho_mean: Vec<Complex64>,
    /// Standard error of `rho_mean`, combining real and imaginary parts.
    pub rho_stderr: Vec<f64>,
    /// Ensemble mean of `|ρ|`.
    pub rho_abs_mean: Vec<f64>,
    pub rho_abs_stderr: Vec<f64>,
    /// Coherence of the noise-free evolution from the same initial state.
    pub rho_reference: Vec<Complex64>,
}

impl Snapshot {
    /// `|⟨ρ⟩| / |⟨ρ(0)⟩|`
    pub fn normalized_abs(&self) -> Vec<f64> {
        let r0 = self.rho_mean[0].norm();
        self.rho_mean.iter().map(|r| r.norm() / r0).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleResult {
    pub s_grid: Vec<f64>,
    pub times: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    /// Largest `|‖ψ‖² − 1|` over all trajectories and snapshots.
    pub max_norm_error: f64,
    pub initial_width: f64,
    pub chemical_potential: f64,
}

/// Runs `n_realizations` trajectories from the trapped ground state with the
/// trap switched off at `t = 0`. Realization `r` draws its noise from the
/// ChaCha stream `r` keyed by the master seed, so results do not depend on
/// scheduling.
pub fn run_ensemble(config: &CondensateConfig) -> Result<EnsembleResult> {
    config.validate()?;
    let grid = config.grid()?;
    let options = GroundStateOptions::default();
    let initial = ground_state(grid, config.g, &options)?;
    let chemical_potential = initial.chemical_potential(&grid.harmonic(options.trap_frequency), config.g);
    let extent = config.predicted_extent(&initial);
    if config.length < 8.0 * extent {
        return Err(Error::config(format!(
            "box length {} is below 8 times the predicted cloud extent {extent:.4} at t = {}",
            config.length,
            config.t_final()
        )));
    }
    let generator = NoiseGenerator::new(grid, config.l_c, config.gamma)?;
    let max_lag = (config.s_max / grid.dz()).round() as usize;
    let s_grid: Vec<f64> = (0..=max_lag).map(|m| m as f64 * grid.dz()).collect();

    let mut previous = 0.0;
    let segments: Vec<(usize, f64)> = config
        .times
        .iter()
        .map(|&t| {
            let span = t - previous;
            previous = t;
            let steps = ((span / config.dt) - 1e-9).ceil().max(0.0) as usize;
            (steps, if steps > 0 { span / steps as f64 } else { 0.0 })
        })
        .collect();

    let trajectory = |noise: Option<u64>| -> Result<Vec<Vec<Complex64>>> {
        let mut rng = ChaCha20Rng::seed_from_u64(config.seed);
        if let Some(stream) = noise {
            rng.set_stream(stream);
        }
        let mut psi = initial.psi.clone();
        let mut out = Vec::with_capacity(segments.len());
        for &(steps, dt) in &segments {
            if steps > 0 {
                let mut stepper = GpeStepper::new(grid, config.g, dt, None)?;
                match noise {
                    Some(_) => {
                        let mut source = NoiseSource { generator: &generator, rng: &mut rng };
                        stepper.run(&mut psi, steps, Some(&mut source))?;
                    }
                    None => stepper.run::<ChaCha20Rng>(&mut psi, steps, None)?,
                }
            }
            let state = CondensateState { grid, psi: psi.clone() };
            out.push(state.coherence_lags(max_lag));
        }
        Ok(out)
    };

    let reference = trajectory(None)?;
    let run_all = || -> Vec<Result<Vec<Vec<Complex64>>>> {
        (0..config.n_realizations)
            .into_par_iter()
            .map(|r| trajectory(Some(r as u64)).map_err(|e| e.context(format!("realization {r}"))))
            .collect()
    };
    let started = std::time::Instant::now();
    let results = match config.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::config(format!("cannot build thread pool: {e}")))?
            .install(run_all),
        None => run_all(),
    };
    info!("{} realizations in {:.2} s", config.n_realizations, started.elapsed().as_secs_f64());

    let count = config.n_realizations as f64;
    let lags = max_lag + 1;
    let mut sum = vec![vec![Complex64::new(0.0, 0.0); lags]; config.times.len()];
    let mut sum_sq = vec![vec![0.0; lags]; config.times.len()];
    let mut abs_sum = vec![vec![0.0; lags]; config.times.len()];
    let mut max_norm_error: f64 = 0.0;
    for result in results {
        let rhos = result?;
        for (it, rho) in rhos.iter().enumerate() {
            max_norm_error = max_norm_error.max((rho[0].re - 1.0).abs());
            for (m, r) in rho.iter().enumerate() {
                sum[it][m] += r;
                sum_sq[it][m] += r.norm_sqr();
                abs_sum[it][m] += r.norm();
            }
        }
    }
    let snapshots = config
        .times
        .iter()
        .enumerate()
        .map(|(it, &time)| {
            let mean: Vec<Complex64> = sum[it].iter().map(|s| s / count).collect();
            let abs_mean: Vec<f64> = abs_sum[it].iter().map(|s| s / count).collect();
            let (stderr, abs_stderr) = if config.n_realizations > 1 {
                let dof = count - 1.0;
                let complex: Vec<f64> = (0..lags)
                    .map(|m| ((sum_sq[it][m] - count * mean[m].norm_sqr()).max(0.0) / dof / count).sqrt())
                    .collect();
                let abs: Vec<f64> = (0..lags)
                    .map(|m| ((sum_sq[it][m] - count * abs_mean[m].powi(2)).max(0.0) / dof / count).sqrt())
                    .collect();
                (complex, abs)
            } else {
                (vec![0.0; lags], vec![0.0; lags])
            };
            Snapshot { time, rho_mean: mean, rho_stderr: stderr, rho_abs_mean: abs_mean, rho_abs_stderr: abs_stderr, rho_reference: reference[it].clone() }
        })
        .collect();
    Ok(EnsembleResult {
        s_grid,
        times: config.times.clone(),
        snapshots,
        max_norm_error,
        initial_width: initial.rms_width(),
        chemical_potential,
    })
}

/// Half width at half maximum of `|ρ(s)|`, interpolated linearly between
/// samples. `None` when the curve never drops to half its value at `s = 0`.
pub fn coherence_width(s_grid: &[f64], rho_abs: &[f64]) -> Option<f64> {
    let half = 0.5 * rho_abs.first()?;
    rho_abs.windows(2).zip(s_grid.windows(2)).find(|(r, _)| r[1] <= half).map(|(r, s)| {
        if r[0] == r[1] {
            s[1]
        } else {
            s[0] + (s[1] - s[0]) * (r[0] - half) / (r[0] - r[1])
        }
    })
}
