//! Error function and its inverse.

use crate::error::{domain, Result};
use crate::scalar::Real;

const SERIES_LIMIT: f64 = 2.5;
const MAX_TERMS: usize = 400;

fn two_over_sqrt_pi<T: Real>() -> T {
    T::FRAC_2_SQRT_PI()
}

/// `erf(x) = 2/√π e^{-x²} Σ 2^n x^{2n+1} / (2n+1)!!`; every term is positive.
fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..MAX_TERMS {
        term = term * T::lit(2.0) * x2 / T::count(2 * n + 1);
        sum = sum + term;
        if term <= sum * T::epsilon() {
            break;
        }
    }
    two_over_sqrt_pi::<T>() * (-x2).exp() * sum
}

/// `erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + (2/2)/(x + ...)))` by modified Lentz,
/// for `x` large enough that the fraction converges quickly.
fn erfc_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value() / T::epsilon();
    let mut f = x;
    let mut c = f;
    let mut d = T::zero();
    for k in 1..MAX_TERMS {
        let a = T::count(k) * T::lit(0.5);
        d = x + a * d;
        if d == T::zero() {
            d = tiny;
        }
        d = d.recip();
        c = x + a / c;
        if c == T::zero() {
            c = tiny;
        }
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    (-x * x).exp() / (T::PI().sqrt() * f)
}

pub fn erf<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return -erf(-x);
    }
    if x < T::lit(SERIES_LIMIT) {
        erf_series(x)
    } else {
        T::one() - erfc_fraction(x)
    }
}

pub fn erfc<T: Real>(x: T) -> T {
    if x.is_nan() {
        return x;
    }
    if x < T::zero() {
        return T::lit(2.0) - erfc(-x);
    }
    if x < T::lit(SERIES_LIMIT) {
        T::one() - erf_series(x)
    } else {
        erfc_fraction(x)
    }
}

/// Single-precision rational start (Giles) in `w = -ln(1 - y²)`.
fn initial_guess(y: f64) -> f64 {
    let mut w = -((1.0 - y) * (1.0 + y)).ln();
    let p = if w < 5.0 {
        w -= 2.5;
        let mut p = 2.810_226_36e-08;
        for c in [
            3.432_739_39e-07,
            -3.523_387_7e-06,
            -4.391_506_54e-06,
            0.000_218_580_87,
            -0.001_253_725_03,
            -0.004_177_681_64,
            0.246_640_727,
            1.501_409_41,
        ] {
            p = c + p * w;
        }
        p
    } else {
        w = w.sqrt() - 3.0;
        let mut p = -0.000_200_214_257;
        for c in [
            0.000_100_950_558,
            0.001_349_343_22,
            -0.003_673_428_44,
            0.005_739_507_73,
            -0.007_622_461_3,
            0.009_438_870_47,
            1.001_674_06,
            2.832_976_82,
        ] {
            p = c + p * w;
        }
        p
    };
    p * y
}

/// Inverse error function on `(-1, 1)`.
///
/// Rational starting point refined by Halley steps on `erf(x) - y`; the
/// residual is formed through `erfc` when `|y| > 1/2` so it keeps relative
/// accuracy near the poles.
pub fn inverse_erf<T: Real>(y: T) -> Result<T> {
    if !(y.abs() < T::one()) {
        return Err(domain(
            "inverse_erf argument must lie strictly inside (-1, 1)",
        ));
    }
    if y == T::zero() {
        return Ok(T::zero());
    }
    if y < T::zero() {
        return inverse_erf(-y).map(|x| -x);
    }
    let mut x = T::lit(initial_guess(y.to_f64_lossy()));
    let half = T::lit(0.5);
    for _ in 0..6 {
        let resid = if y > half {
            (T::one() - y) - erfc(x)
        } else {
            erf(x) - y
        };
        let slope = two_over_sqrt_pi::<T>() * (-x * x).exp();
        if slope == T::zero() {
            break;
        }
        let newton = resid / slope;
        let step = newton / (T::one() + x * newton);
        x = x - step;
        if step.abs() <= T::epsilon() * x.abs() {
            break;
        }
    }
    Ok(x)
}
