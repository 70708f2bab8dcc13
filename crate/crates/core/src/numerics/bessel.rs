//! Modified Bessel functions of the second kind, orders 0 and 1.
//!
//! Temme's series for `x <= 2`, Steed's continued fraction (CF2) above that.
//! Both return the pair `(K0, K1)` together; the continued fraction yields
//! exponentially scaled values so that large arguments never underflow.

use std::f64::consts::PI;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const MAX_ITER: usize = 10_000;

/// Returns `(e^x K0(x), e^x K1(x))` for `x > 0`.
pub fn k0_k1_scaled(x: f64) -> (f64, f64) {
    assert!(x > 0.0, "K0/K1 need a positive argument, got {x}");
    if x <= 2.0 {
        let (k0, k1) = temme_series(x);
        let ex = x.exp();
        (k0 * ex, k1 * ex)
    } else {
        steed_cf2(x)
    }
}

/// `K1(x)` for `x > 0`; `+inf` at 0, NaN for negative input.
pub fn bessel_k1(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= 2.0 {
        temme_series(x).1
    } else {
        steed_cf2(x).1 * (-x).exp()
    }
}

/// `K0(x)` for `x > 0`; `+inf` at 0, NaN for negative input.
pub fn bessel_k0(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= 2.0 {
        temme_series(x).0
    } else {
        steed_cf2(x).0 * (-x).exp()
    }
}

/// `x K1(x)`, continued to 1 at `x = 0`. Even in `x`.
///
/// This is the field-pulse form factor of a point charge passing a
/// detector at distance `r`, with `x = r|ω/v|`.
pub fn x_k1(x: f64) -> f64 {
    let x = x.abs();
    if x == 0.0 {
        1.0
    } else if x > 700.0 {
        0.0
    } else {
        x * bessel_k1(x)
    }
}

fn temme_series(x: f64) -> (f64, f64) {
    let half_x = 0.5 * x;
    let d = half_x * half_x;
    let mut f = -(half_x.ln() + EULER_GAMMA);
    let mut p = 0.5;
    let mut q = 0.5;
    let mut c = 1.0;
    let mut sum0 = f;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let k = i as f64;
        f = (k * f + p + q) / (k * k);
        c *= d / k;
        p /= k;
        q /= k;
        let del0 = c * f;
        sum0 += del0;
        sum1 += c * (p - k * f);
        if del0.abs() < sum0.abs() * f64::EPSILON {
            break;
        }
    }
    (sum0, sum1 * 2.0 / x)
}

fn steed_cf2(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..MAX_ITER {
        let k = i as f64;
        a -= 2.0 * k;
        c = -a * c / (k + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from 30-digit arithmetic.
    const K1_TABLE: [(f64, f64); 11] = [
        (1e-6, 999_999.999_992_784_3),
        (1e-3, 999.996_238_156_085_6),
        (0.1, 9.853_844_780_870_606),
        (0.5, 1.656_441_120_003_300_9),
        (1.0, 0.601_907_230_197_234_6),
        (2.0, 0.139_865_881_816_522_43),
        (2.5, 0.073_890_816_347_747_06),
        (5.0, 0.004_044_613_445_452_164),
        (10.0, 1.864_877_345_382_558_5e-5),
        (20.0, 5.883_057_969_557_038e-10),
        (50.0, 3.444_102_226_717_555_6e-23),
    ];

    #[test]
    fn k1_matches_reference_table() {
        for (x, want) in K1_TABLE {
            let got = bessel_k1(x);
            assert!(((got - want) / want).abs() < 1e-13, "K1({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn k0_reference_points() {
        for (x, want) in [(1.0, 0.421_024_438_240_708_33), (5.0, 0.003_691_098_334_042_594_3)] {
            assert!(((bessel_k0(x) - want) / want).abs() < 1e-13);
        }
    }

    #[test]
    fn branches_join_smoothly_at_two() {
        let below = temme_series(2.0);
        let above = steed_cf2(2.0);
        let e2 = (-2.0f64).exp();
        assert!(((below.1 - above.1 * e2) / below.1).abs() < 1e-14);
        assert!(((below.0 - above.0 * e2) / below.0).abs() < 1e-14);
    }

    #[test]
    fn special_values() {
        assert_eq!(bessel_k1(0.0), f64::INFINITY);
        assert!(bessel_k1(-1.0).is_nan());
        assert_eq!(x_k1(0.0), 1.0);
        assert_eq!(x_k1(-0.5), x_k1(0.5));
        assert_eq!(x_k1(1e4), 0.0);
    }
}
