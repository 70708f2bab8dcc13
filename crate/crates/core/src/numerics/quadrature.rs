//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub relative: f64,
    pub absolute: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { relative: 1e-10, absolute: 0.0, max_intervals: 2000 }
    }
}

impl Tolerance {
    pub fn relative(relative: f64) -> Self {
        Tolerance { relative, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

/// One 15-point Kronrod rule on `[a, b]`: (integral, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    integrate_with_points(f, &[a, b], tol)
}

/// Integrates `f` over `[points[0], points[last]]`, starting from the given
/// subdivision. Put breakpoints at kinks, edges and near-singular spots.
pub fn integrate_with_points<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: Tolerance) -> Result<Integral> {
    if points.len() < 2 {
        return Err(Error::numerical("quadrature needs at least two points"));
    }
    // (a, b, value, error)
    let mut pieces: Vec<(f64, f64, f64, f64)> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    if pieces.is_empty() {
        return Ok(Integral { value: 0.0, error: 0.0, intervals: 0 });
    }

    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if !value.is_finite() {
            return Err(Error::numerical(format!("integrand produced {value} on [{}, {}]", points[0], points[points.len() - 1])));
        }
        let target = tol.absolute.max(tol.relative * value.abs());
        if error <= target || error < 50.0 * f64::EPSILON * value.abs() {
            return Ok(Integral { value, error, intervals: pieces.len() });
        }
        if pieces.len() >= tol.max_intervals {
            return Err(Error::numerical(format!(
                "quadrature did not converge: value {value:e}, error estimate {error:e}, target {target:e}, {} intervals",
                pieces.len()
            )));
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (a, b, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Err(Error::numerical(format!("interval [{a:e}, {b:e}] cannot be split further")));
        }
        let (v1, e1) = gk15(&f, a, mid);
        let (v2, e2) = gk15(&f, mid, b);
        pieces.push((a, mid, v1, e1));
        pieces.push((mid, b, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        // GK15 integrates degree 22 exactly on a single interval.
        let r = integrate(|x: f64| x.powi(22), 0.0, 1.0, Tolerance::relative(1e-14)).unwrap();
        assert!((r.value - 1.0 / 23.0).abs() < 1e-15);
    }

    #[test]
    fn smooth_and_peaked_integrands() {
        let r = integrate(|x: f64| x.exp(), 0.0, 3.0, Tolerance::default()).unwrap();
        assert!((r.value - (3f64.exp() - 1.0)).abs() < 1e-12);
        let r = integrate(|x: f64| 1.0 / (1e-6 + x * x), -1.0, 1.0, Tolerance::relative(1e-10)).unwrap();
        let exact = 2.0 * (1.0 / 1e-3) * (1.0f64 / 1e-3).atan();
        assert!(((r.value - exact) / exact).abs() < 1e-9);
    }

    #[test]
    fn reports_nonconvergence() {
        let tol = Tolerance { relative: 1e-14, absolute: 0.0, max_intervals: 3 };
        let err = integrate(|x: f64| (1.0 / x).sin(), 1e-4, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::Numerical(_)));
    }
}
