use num_complex::Complex64;
use serde::Serialize;

use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::model::HalfInt;
use crate::spectra::NoiseTensor;

/// Transition `|F, m_i⟩ → |F, m_f⟩` of a spin with Landé factor `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpinTransition {
    pub spin_f: HalfInt,
    pub m_initial: HalfInt,
    pub m_final: HalfInt,
    pub g_factor: f64,
}

impl SpinTransition {
    pub fn new(spin_f: HalfInt, m_initial: HalfInt, m_final: HalfInt, g_factor: f64) -> Result<Self> {
        let f = spin_f.twice();
        if f <= 0 {
            return Err(Error::domain("spin F must be at least 1/2"));
        }
        for m in [m_initial.twice(), m_final.twice()] {
            if m.abs() > f || (f - m) % 2 != 0 {
                return Err(Error::domain(format!("m = {} is not a sublevel of F = {}", f64::from(m) / 2.0, spin_f.value())));
            }
        }
        if !g_factor.is_finite() {
            return Err(Error::domain("g factor must be finite"));
        }
        Ok(SpinTransition { spin_f, m_initial, m_final, g_factor })
    }

    /// `|F, F⟩ → |F, F−1⟩`, the first step out of the stretched state.
    pub fn stretched_loss(spin_f: HalfInt, g_factor: f64) -> Result<Self> {
        let f = spin_f.twice();
        Self::new(spin_f, spin_f, HalfInt::from_twice(f - 2), g_factor)
    }

    /// `|Δm| = 1`
    pub fn is_allowed(&self) -> bool {
        (self.m_final.twice() - self.m_initial.twice()).abs() == 2
    }
}

/// `⟨m_i|F_α|m_f⟩` for α = x, y, z in the frame whose z axis is the
/// quantization axis.
pub fn moment_matrix_element(t: &SpinTransition) -> [Complex64; 3] {
    let zero = Complex64::new(0.0, 0.0);
    let f = t.spin_f.value();
    let (mi, mf) = (t.m_initial.value(), t.m_final.value());
    match t.m_final.twice() - t.m_initial.twice() {
        // ⟨m_f + 1|F_+|m_f⟩
        -2 => {
            let c = (f * (f + 1.0) - mf * (mf + 1.0)).sqrt();
            [Complex64::new(0.5 * c, 0.0), Complex64::new(0.0, -0.5 * c), zero]
        }
        // ⟨m_f − 1|F_−|m_f⟩
        2 => {
            let c = (f * (f + 1.0) - mf * (mf - 1.0)).sqrt();
            [Complex64::new(0.5 * c, 0.0), Complex64::new(0.0, 0.5 * c), zero]
        }
        0 => [zero, zero, Complex64::new(mi, 0.0)],
        _ => [zero; 3],
    }
}

/// Golden-rule rate `(1/ħ²) Σ_αβ ⟨i|μ_α|f⟩⟨f|μ_β|i⟩ S_αβ` with `μ = g μ_scale F`
/// and the quantization axis along the third tensor axis (the wire).
///
/// The tensor should be evaluated at the transition frequency; the spectra
/// in this crate are even in ω so its sign does not matter. Transitions with
/// `|Δm| ≠ 1` give exactly zero.
pub fn spin_flip_rate(tensor: &NoiseTensor, t: &SpinTransition, mu_scale: f64) -> f64 {
    spin_flip_rate_along(tensor, t, mu_scale, [0.0, 0.0, 1.0]).unwrap_or(0.0)
}

/// [`spin_flip_rate`] with an arbitrary quantization axis given in the
/// tensor's frame.
pub fn spin_flip_rate_along(tensor: &NoiseTensor, t: &SpinTransition, mu_scale: f64, axis: [f64; 3]) -> Result<f64> {
    if !t.is_allowed() {
        return Ok(0.0);
    }
    let rotation = body_frame(axis)?;
    let s = tensor.rotated(&rotation).components;
    let m = moment_matrix_element(t);
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..3 {
        for b in 0..3 {
            acc += m[a] * m[b].conj() * s[a][b];
        }
    }
    let scale = t.g_factor * mu_scale / HBAR;
    Ok(scale * scale * acc.re)
}

/// Trap-loss time `2 / Γ_{F→F−1}` for atoms starting in the stretched state.
pub fn loss_timescale(tensor: &NoiseTensor, spin_f: HalfInt, g_factor: f64, mu_scale: f64) -> Result<f64> {
    let rate = spin_flip_rate(tensor, &SpinTransition::stretched_loss(spin_f, g_factor)?, mu_scale);
    Ok(if rate > 0.0 { 2.0 / rate } else { f64::INFINITY })
}

/// Orthonormal frame (columns) whose third vector is `axis`.
fn body_frame(axis: [f64; 3]) -> Result<[[f64; 3]; 3]> {
    let norm = axis.iter().map(|a| a * a).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::domain("quantization axis must be a non-zero vector"));
    }
    let z = axis.map(|a| a / norm);
    // Gram–Schmidt on the coordinate axis least aligned with z
    let k = (0..3).min_by(|&i, &j| z[i].abs().total_cmp(&z[j].abs())).expect("three axes");
    let mut x = [0.0; 3];
    x[k] = 1.0;
    let dot = x[k] * z[k];
    let mut x = [x[0] - dot * z[0], x[1] - dot * z[1], x[2] - dot * z[2]];
    let xn = x.iter().map(|a| a * a).sum::<f64>().sqrt();
    x.iter_mut().for_each(|a| *a /= xn);
    let y = [z[1] * x[2] - z[2] * x[1], z[2] * x[0] - z[0] * x[2], z[0] * x[1] - z[1] * x[0]];
    Ok([[x[0], y[0], z[0]], [x[1], y[1], z[1]], [x[2], y[2], z[2]]])
}
