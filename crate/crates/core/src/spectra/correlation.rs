//! Normalized spatial correlation `C(s) = S(z, z+s) / S(z, z)` of the field
//! component along the guide.

use serde::Serialize;

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Exact near-field correlation at height `h` above a half-space:
/// `8h² / [(2h + √(s²+4h²)) √(s²+4h²)]`.
pub fn nearfield_correlation(s: f64, h: f64) -> f64 {
    debug_assert!(h > 0.0);
    let root = (s * s + 4.0 * h * h).sqrt();
    8.0 * h * h / ((2.0 * h + root) * root)
}

/// Length `4h/√3` of the Lorentzian that shares the curvature of the
/// near-field correlation at the origin.
pub fn nearfield_lorentzian_length(h: f64) -> f64 {
    4.0 * h / 3f64.sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum CorrelationForm {
    NearfieldExact { height: f64 },
    /// `L² / (s² + L²)`
    Lorentzian { length: f64 },
    /// `C ≡ 1`
    Homogeneous,
    /// Linear interpolation in a table starting at `s = 0`, continued as
    /// `c_last (s_last / s)²` past the last entry.
    Tabulated { s: Vec<f64>, c: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationModel {
    pub form: CorrelationForm,
    /// Local spectrum `S∥` the correlation is normalized to, T²/Hz.
    pub reference_value: f64,
}

impl CorrelationModel {
    pub fn new(form: CorrelationForm, reference_value: f64) -> Result<Self> {
        ensure_non_negative("reference spectrum", reference_value)?;
        match &form {
            CorrelationForm::NearfieldExact { height } => ensure_positive("height", *height)?,
            CorrelationForm::Lorentzian { length } => ensure_positive("correlation length", *length)?,
            CorrelationForm::Homogeneous => {}
            CorrelationForm::Tabulated { s, c } => {
                if s.len() < 3 || s.len() != c.len() {
                    return Err(Error::domain("a correlation table needs at least three (s, C) pairs of equal length"));
                }
                if s[0] != 0.0 || (c[0] - 1.0).abs() > 1e-9 {
                    return Err(Error::domain("a correlation table must start at C(0) = 1"));
                }
                if s.windows(2).any(|w| !(w[1] > w[0])) || c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::domain("correlation table distances must increase strictly and values be finite"));
                }
            }
        }
        Ok(CorrelationModel { form, reference_value })
    }

    pub fn nearfield(height: f64, reference_value: f64) -> Result<Self> {
        Self::new(CorrelationForm::NearfieldExact { height }, reference_value)
    }

    pub fn lorentzian(length: f64, reference_value: f64) -> Result<Self> {
        Self::new(CorrelationForm::Lorentzian { length }, reference_value)
    }

    pub fn homogeneous(reference_value: f64) -> Result<Self> {
        Self::new(CorrelationForm::Homogeneous, reference_value)
    }

    pub fn tabulated(s: Vec<f64>, c: Vec<f64>, reference_value: f64) -> Result<Self> {
        Self::new(CorrelationForm::Tabulated { s, c }, reference_value)
    }

    /// `C(s)`, even in `s`.
    pub fn value(&self, s: f64) -> f64 {
        let s = s.abs();
        match &self.form {
            CorrelationForm::NearfieldExact { height } => nearfield_correlation(s, *height),
            CorrelationForm::Lorentzian { length } => length * length / (s * s + length * length),
            CorrelationForm::Homogeneous => 1.0,
            CorrelationForm::Tabulated { s: xs, c } => {
                let last = xs.len() - 1;
                if s >= xs[last] {
                    return c[last] * (xs[last] / s).powi(2);
                }
                let k = xs.partition_point(|x| *x <= s) - 1;
                let t = (s - xs[k]) / (xs[k + 1] - xs[k]);
                c[k] + t * (c[k + 1] - c[k])
            }
        }
    }

    /// Field cross spectrum `S∥ C(s)` in T²/Hz.
    pub fn cross_spectrum(&self, s: f64) -> f64 {
        self.reference_value * self.value(s)
    }

    /// `l_c`, see [`correlation_length`].
    pub fn correlation_length(&self) -> Result<f64> {
        correlation_length(self)
    }

    /// Coefficient of the `1/s²` tail, if the form has one.
    pub(crate) fn tail_coefficient(&self) -> Option<f64> {
        match &self.form {
            CorrelationForm::NearfieldExact { height } => Some(8.0 * height * height),
            CorrelationForm::Lorentzian { length } => Some(length * length),
            CorrelationForm::Homogeneous => None,
            CorrelationForm::Tabulated { s, c } => Some(c[c.len() - 1] * s[s.len() - 1].powi(2)),
        }
    }

    /// Scale on which `C` varies near the origin.
    pub(crate) fn natural_scale(&self) -> f64 {
        match &self.form {
            CorrelationForm::NearfieldExact { height } => *height,
            CorrelationForm::Lorentzian { length } => *length,
            CorrelationForm::Homogeneous => f64::INFINITY,
            CorrelationForm::Tabulated { s, c } => {
                let k = c.iter().position(|v| *v <= 0.5).unwrap_or(c.len() - 1);
                s[k.max(1)]
            }
        }
    }
}

/// Correlation length `l_c` defined by `C(s) ≈ 1 − s²/l_c²` at small `s`.
///
/// Fits an even polynomial `C = c₀ + c₁s² + c₂s⁴ + …` by least squares
/// over a quarter of the model's scale (`h/4` for the near field) and
/// returns `√(−c₀/c₁)`. The higher terms absorb the curvature of `C` inside
/// the window, which would otherwise bias `c₁`.
/// Homogeneous noise gives `f64::INFINITY`.
pub fn correlation_length(model: &CorrelationModel) -> Result<f64> {
    let samples: Vec<(f64, f64)> = match &model.form {
        CorrelationForm::Homogeneous => return Ok(f64::INFINITY),
        CorrelationForm::Tabulated { s, c } => {
            // table nodes up to the first drop below 0.95, at least three
            let end = c.iter().position(|v| *v <= 0.95).unwrap_or(c.len() - 1).max(2);
            s.iter().copied().zip(c.iter().copied()).take(end + 1).collect()
        }
        _ => {
            let window = 0.25 * model.natural_scale();
            (0..=32).map(|i| {
                let s = window * f64::from(i) / 32.0;
                (s, model.value(s))
            })
            .collect()
        }
    };
    let window = samples.last().map_or(1.0, |p| p.0);
    let fit: [f64; 4] = if samples.len() > 8 {
        fit_even_polynomial(&samples, window)?
    } else {
        let [a, b, c] = fit_even_polynomial(&samples, window)?;
        [a, b, c, 0.0]
    };
    let (c0, c1) = (fit[0], fit[1]);
    // c1 is in units of the window: C ≈ c0 + c1 (s/window)²
    let curvature = c1 / (window * window);
    if c1.abs() <= 1e-12 * c0.abs() {
        return Ok(f64::INFINITY);
    }
    if curvature > 0.0 || c0 <= 0.0 {
        return Err(Error::domain(format!("correlation is not concave at the origin (C ≈ {c0} + {curvature:e} s²)")));
    }
    Ok((-c0 / curvature).sqrt())
}

/// Least-squares coefficients of `Σ_k c_k x^{2k}`, `k < N`, with `x = s / window`.
fn fit_even_polynomial<const N: usize>(samples: &[(f64, f64)], window: f64) -> Result<[f64; N]> {
    let mut a = [[0.0; N]; N];
    let mut b = [0.0; N];
    for &(s, c) in samples {
        let u = (s / window).powi(2);
        let mut basis = [1.0; N];
        for k in 1..N {
            basis[k] = basis[k - 1] * u;
        }
        for i in 0..N {
            b[i] += basis[i] * c;
            for j in 0..N {
                a[i][j] += basis[i] * basis[j];
            }
        }
    }
    solve(a, b).ok_or_else(|| Error::numerical("correlation fit is singular"))
}

/// Gaussian elimination with partial pivoting.
fn solve<const N: usize>(mut a: [[f64; N]; N], mut b: [f64; N]) -> Option<[f64; N]> {
    for col in 0..N {
        let pivot = (col..N).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..N {
            let f = a[row][col] / a[col][col];
            for k in col..N {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; N];
    for row in (0..N).rev() {
        let tail: f64 = (row + 1..N).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn nearfield_values() {
        assert_eq!(nearfield_correlation(0.0, 1.0), 1.0);
        // 8 / ((2 + √8) √8)
        assert_relative_eq!(nearfield_correlation(2.0, 1.0), 8.0 / ((2.0 + 8f64.sqrt()) * 8f64.sqrt()), max_relative = 1e-15);
        assert!((nearfield_correlation(2.0, 1.0) - 0.5858).abs() < 1e-4);
        let l = CorrelationModel::lorentzian(nearfield_lorentzian_length(1.0), 1.0).unwrap();
        assert!((l.value(2.0) - 0.5714).abs() < 1e-4);
    }

    #[test]
    fn lengths() {
        for h in [1e-7, 1e-6, 3.3e-5] {
            let m = CorrelationModel::nearfield(h, 1.0).unwrap();
            let lc = correlation_length(&m).unwrap();
            assert_relative_eq!(lc, 4.0 * h / 3f64.sqrt(), max_relative = 1e-4);
        }
        let l = CorrelationModel::lorentzian(2.5e-6, 1.0).unwrap();
        assert_relative_eq!(correlation_length(&l).unwrap(), 2.5e-6, max_relative = 1e-4);
        assert_eq!(correlation_length(&CorrelationModel::homogeneous(1.0).unwrap()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn tabulated_models() {
        let s: Vec<f64> = (0..200).map(|i| f64::from(i) * 0.01).collect();
        let c: Vec<f64> = s.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
        let m = CorrelationModel::tabulated(s.clone(), c, 1.0).unwrap();
        assert_relative_eq!(correlation_length(&m).unwrap(), 1.0, max_relative = 1e-3);
        assert_relative_eq!(m.value(0.005), 0.5 * (1.0 + 1.0 / 1.0001), max_relative = 1e-12);
        assert_relative_eq!(m.value(-0.005), m.value(0.005));
        let convex: Vec<f64> = s.iter().map(|x| 1.0 + x * x).collect();
        let bad = CorrelationModel::tabulated(s.clone(), convex, 1.0).unwrap();
        assert!(matches!(correlation_length(&bad), Err(Error::Domain(_))));
        assert!(CorrelationModel::tabulated(vec![0.0, 1.0], vec![1.0, 0.5], 1.0).is_err());
        assert!(CorrelationModel::tabulated(vec![0.0, 1.0, 1.0], vec![1.0, 0.5, 0.2], 1.0).is_err());
    }

    proptest! {
        #[test]
        fn nearfield_bounds_and_tail(h in 1e-8f64..1e-3, x in 0.0f64..1e3) {
            let c = nearfield_correlation(x * h, h);
            prop_assert!(c > 0.0 && c <= 1.0);
            prop_assert!((nearfield_correlation(-x * h, h) - c).abs() == 0.0);
            let far = 1e5 * h;
            prop_assert!((nearfield_correlation(far, h) * far * far / (8.0 * h * h) - 1.0).abs() < 1e-4);
        }

        #[test]
        fn nearfield_length_ratio(h in 1e-8f64..1e-2) {
            let lc = correlation_length(&CorrelationModel::nearfield(h, 1.0).unwrap()).unwrap();
            prop_assert!((lc / h / 2.309 - 1.0).abs() < 0.005);
        }
    }
}
