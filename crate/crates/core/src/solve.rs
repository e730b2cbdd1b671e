//! Scalar root finding and one-dimensional extremum search.

use crate::error::{f, Error, Result};
use crate::Real;

pub const MAX_ITERATIONS: usize = 100;

/// Solves `g(x) = target` for a nondecreasing `g` on `[lo, hi]`.
///
/// Newton steps use `dg`; any step leaving the current bracket is replaced by
/// bisection. Converges when `|g(x) - target| <= tol` or the bracket has
/// collapsed to rounding level.
pub fn invert_monotone<T: Real>(
    g: impl Fn(T) -> T,
    dg: impl Fn(T) -> T,
    target: T,
    guess: T,
    mut lo: T,
    mut hi: T,
    tol: T,
) -> Result<T> {
    let r_lo = g(lo) - target;
    let r_hi = g(hi) - target;
    if r_lo.abs() <= tol {
        return Ok(lo);
    }
    if r_hi.abs() <= tol {
        return Ok(hi);
    }
    if r_lo > T::zero() || r_hi < T::zero() || r_lo.is_nan() || r_hi.is_nan() {
        return Err(Error::BracketFailure {
            target: f(target),
            lo: f(lo),
            hi: f(hi),
        });
    }
    let mut x = if guess > lo && guess < hi {
        guess
    } else {
        T::half() * (lo + hi)
    };
    for _ in 0..MAX_ITERATIONS {
        let r = g(x) - target;
        if r.abs() <= tol {
            return Ok(x);
        }
        if r < T::zero() {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= T::epsilon() * T::two() * (T::one() + x.abs()) {
            return Ok(x);
        }
        let slope = dg(x);
        let newton = x - r / slope;
        x = if slope > T::zero() && newton > lo && newton < hi {
            newton
        } else {
            T::half() * (lo + hi)
        };
    }
    Err(Error::NonConvergence {
        what: "monotone inversion",
        iterations: MAX_ITERATIONS,
    })
}

/// Root of `g` on `[lo, hi]` given `g(lo)` and `g(hi)` of opposite sign
/// (Illinois variant of regula falsi). Returns the best iterate.
pub fn bracketed_root<T: Real>(g: impl Fn(T) -> T, mut lo: T, mut hi: T, mut g_lo: T, mut g_hi: T) -> T {
    if g_lo == T::zero() {
        return lo;
    }
    if g_hi == T::zero() {
        return hi;
    }
    let mut side = 0i8;
    let mut x = lo;
    for _ in 0..MAX_ITERATIONS {
        x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
        if !(x > lo && x < hi) {
            x = T::half() * (lo + hi);
        }
        let gx = g(x);
        if gx == T::zero() || hi - lo <= T::epsilon() * T::two() * (T::one() + x.abs()) {
            return x;
        }
        if (gx > T::zero()) == (g_hi > T::zero()) {
            hi = x;
            g_hi = gx;
            if side == 1 {
                g_lo = g_lo * T::half();
            }
            side = 1;
        } else {
            lo = x;
            g_lo = gx;
            if side == -1 {
                g_hi = g_hi * T::half();
            }
            side = -1;
        }
    }
    x
}

/// Golden-section search for a local minimiser of `g` on `[lo, hi]`,
/// stopping when the bracket is shorter than `tol`.
pub fn golden_section_min<T: Real>(g: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> T {
    let inv_phi = T::lit(0.618_033_988_749_894_9);
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut gc = g(c);
    let mut gd = g(d);
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - inv_phi * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + inv_phi * (hi - lo);
            gd = g(d);
        }
    }
    T::half() * (lo + hi)
}
