//! Quadrature rules used for entropy fluxes and cell averages.

use crate::error::{f, Error, Result};
use crate::Real;

/// Maximal bisection depth of [`adaptive_simpson`].
pub const MAX_DEPTH: usize = 40;

/// Adaptive Simpson quadrature of `g` over `[a, b]` to absolute tolerance `tol`.
///
/// Fails with [`Error::QuadratureNonConvergence`] when a subinterval still
/// misses its share of the tolerance at depth [`MAX_DEPTH`].
pub fn adaptive_simpson<T: Real>(g: &impl Fn(T) -> T, a: T, b: T, tol: T) -> Result<T> {
    if a == b {
        return Ok(T::zero());
    }
    let fa = g(a);
    let fb = g(b);
    let m = T::half() * (a + b);
    let fm = g(m);
    let whole = simpson(a, b, fa, fm, fb);
    refine(g, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[inline]
fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine<T: Real>(g: &impl Fn(T) -> T, a: T, b: T, fa: T, fm: T, fb: T, whole: T, tol: T, depth: usize) -> Result<T> {
    let m = T::half() * (a + b);
    let lm = T::half() * (a + m);
    let rm = T::half() * (m + b);
    let flm = g(lm);
    let frm = g(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= T::lit(15.0) * tol {
        return Ok(left + right + delta / T::lit(15.0));
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence { lo: f(a), hi: f(b) });
    }
    let l = refine(g, a, m, fa, flm, fm, left, T::half() * tol, depth - 1)?;
    let r = refine(g, m, b, fm, frm, fb, right, T::half() * tol, depth - 1)?;
    Ok(l + r)
}

const GL5_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_47,
    0.478_628_670_499_366_47,
    0.236_926_885_056_189_08,
    0.236_926_885_056_189_08,
];

/// Mean of `g` over `[a, b]` by 5-point Gauss-Legendre.
pub fn gauss_legendre5_mean<T: Real>(g: &impl Fn(T) -> T, a: T, b: T) -> T {
    let c = T::half() * (a + b);
    let h = T::half() * (b - a);
    let sum = GL5_NODES
        .iter()
        .zip(GL5_WEIGHTS.iter())
        .fold(T::zero(), |acc, (&x, &w)| acc + T::lit(w) * g(c + h * T::lit(x)));
    T::half() * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_cubic_exactly() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, -1.0, 2.0, 1e-12).unwrap();
        assert!((v - (4.0 - 4.0 - (0.25 - 1.0))).abs() < 1e-13);
    }

    #[test]
    fn simpson_handles_kink() {
        let v = adaptive_simpson(&|x: f64| (x - 0.3).abs(), -1.0, 1.0, 1e-10).unwrap();
        let exact = 0.5 * 1.3 * 1.3 + 0.5 * 0.7 * 0.7;
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn simpson_reports_non_convergence_on_jump() {
        let r = adaptive_simpson(&|x: f64| if x < 0.1 { 0.0 } else { 1.0 }, 0.0, 1.0, 1e-14);
        assert!(matches!(r, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn gauss_legendre_exact_for_degree_nine() {
        let g = |x: f64| x.powi(9) + x.powi(8);
        let mean = gauss_legendre5_mean(&g, 0.0, 1.0);
        assert!((mean - (0.1 + 1.0 / 9.0)).abs() < 1e-14);
    }
}
