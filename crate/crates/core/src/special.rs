//! Error function and the exact cell averages built on it.

use crate::Real;

const SERIES_LIMIT: f64 = 2.0;
const SATURATION: f64 = 6.0;

/// Error function, accurate to about `1e-15` in `f64`.
///
/// Uses the positive-term series `erf(x) = 2/sqrt(pi) exp(-x^2) sum 2^n x^(2n+1) / (2n+1)!!`
/// for `|x| <= 2` and a continued fraction for `erfc` beyond. Saturates to
/// `±1` for `|x| > 6`.
pub fn erf<T: Real>(x: T) -> T {
    let ax = x.abs();
    if ax > T::lit(SATURATION) {
        return T::one().copysign(x);
    }
    if ax <= T::lit(SERIES_LIMIT) {
        erf_series(x)
    } else {
        (T::one() - erfc_continued_fraction(ax)).copysign(x)
    }
}

/// Complementary error function `1 - erf(x)` without cancellation for large `x`.
pub fn erfc<T: Real>(x: T) -> T {
    if x > T::lit(SERIES_LIMIT) {
        erfc_continued_fraction(x)
    } else if x < -T::lit(SERIES_LIMIT) {
        T::two() - erfc_continued_fraction(-x)
    } else {
        T::one() - erf_series(x)
    }
}

fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut n = 0;
    while n < 200 {
        n += 1;
        term = term * T::two() * x2 / T::lit((2 * n + 1) as f64);
        sum = sum + term;
        if term.abs() <= T::epsilon() * sum.abs() {
            break;
        }
    }
    T::two() * frac_1_sqrt_pi::<T>() * (-x2).exp() * sum
}

// erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0.
// Modified Lentz evaluation.
fn erfc_continued_fraction<T: Real>(x: T) -> T {
    let tiny = T::min_positive_value().sqrt();
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for n in 1..500 {
        let a = T::lit(n as f64) * T::half();
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = d.recip();
        let delta = c * d;
        f = f * delta;
        if (delta - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    frac_1_sqrt_pi::<T>() * (-x * x).exp() / f
}

/// `E(s) - |s|` where `E(s) = s erf(s) + exp(-s^2)/sqrt(pi)` is the
/// antiderivative of `erf`. Bounded by `1/sqrt(pi)`.
fn erf_antiderivative_excess<T: Real>(s: T) -> T {
    let a = s.abs();
    frac_1_sqrt_pi::<T>() * (-a * a).exp() - a * erfc(a)
}

/// Mean value of `erf` over `[a, b]`.
///
/// Splits off `|s|` from the antiderivative so saturated cells keep full
/// relative accuracy.
pub fn erf_mean<T: Real>(a: T, b: T) -> T {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    let width = b - a;
    if width <= T::epsilon() * (T::one() + a.abs().max(b.abs())) {
        return erf(T::half() * (a + b));
    }
    let excess = erf_antiderivative_excess(b) - erf_antiderivative_excess(a);
    (b.abs() - a.abs() + excess) / width
}

fn frac_1_sqrt_pi<T: Real>() -> T {
    T::FRAC_2_SQRT_PI() * T::half()
}
