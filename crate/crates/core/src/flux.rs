//! Two-point monotone numerical fluxes for the frozen-color conservation law
//! `dt w + dx f(w, v) = 0`, and the Crandall-Majda numerical entropy flux.

use std::str::FromStr;

use crate::coupling::{CouplingModel, Shape};
use crate::error::{Error, Result};
use crate::solve::{bracketed_root, golden_section_min};
use crate::Real;

/// Tolerance of the golden-section fallback.
pub const EXTREMUM_TOL: f64 = 1e-12;

/// A scalar flux `w -> f(w)` with enough structure to evaluate monotone
/// two-point fluxes exactly.
pub trait ScalarFlux<T: Real> {
    fn value(&self, w: T) -> Result<T>;

    fn derivative(&self, w: T) -> Result<T>;

    /// `(min f, max f)` over the closed hull of `a` and `b`.
    fn extrema_in(&self, a: T, b: T) -> Result<(T, T)>;

    /// `max |f'|` over the closed hull of `a` and `b`.
    fn max_speed_in(&self, a: T, b: T) -> Result<T>;

    /// Fixed reference state of the Engquist-Osher splitting.
    fn reference_point(&self) -> Result<T>;

    /// `int_p^q max(f', 0)` and `int_p^q min(f', 0)`.
    fn split_increments(&self, p: T, q: T) -> Result<(T, T)>;
}

/// `f(., v)` at a fixed color value, evaluated through the `u` variable.
///
/// Since `w -> u(w, v)` is increasing, extrema of `f(., v)` over a `w`
/// interval are extrema of `C1(., v)` over the corresponding `u` interval,
/// where the model's breakpoints are known.
#[derive(Clone, Copy)]
pub struct FrozenFlux<'m, T> {
    model: &'m CouplingModel<T>,
    v: T,
}

impl<'m, T: Real> FrozenFlux<'m, T> {
    pub fn new(model: &'m CouplingModel<T>, v: T) -> Self {
        Self { model, v }
    }

    pub fn v(&self) -> T {
        self.v
    }

    #[inline]
    fn c1(&self, u: T) -> T {
        self.model.c1(u, self.v)
    }

    #[inline]
    fn c1_du(&self, u: T) -> T {
        self.model.c1_du(u, self.v)
    }

    /// Interior stationary points of `C1(., v)` on `(lo, hi)`, sorted, plus
    /// extra candidates from the golden-section fallback where the sign
    /// pattern is inconclusive.
    fn stationary_points(&self, lo: T, hi: T) -> Vec<T> {
        let mut out = Vec::new();
        if !(hi > lo) {
            return out;
        }
        match self.model.c1_shape() {
            Shape::Convex | Shape::Concave => {
                let (d_lo, d_hi) = (self.c1_du(lo), self.c1_du(hi));
                if (d_lo < T::zero()) != (d_hi < T::zero()) && d_lo != T::zero() && d_hi != T::zero() {
                    out.push(bracketed_root(|u| self.c1_du(u), lo, hi, d_lo, d_hi));
                }
            }
            Shape::General => {
                let mut cuts = vec![lo];
                cuts.extend(self.model.u_breakpoints().into_iter().filter(|p| *p > lo && *p < hi));
                cuts.push(hi);
                for seg in cuts.windows(2) {
                    let (a, b) = (seg[0], seg[1]);
                    let mid = T::half() * (a + b);
                    let (sl, sr) = self.model.composed_flux_slopes(mid);
                    if (sl >= T::zero()) == (sr >= T::zero()) {
                        // both composed fluxes monotone alike: C1 monotone on the segment
                        continue;
                    }
                    let (d_a, d_b) = (self.c1_du(a), self.c1_du(b));
                    if (d_a < T::zero()) != (d_b < T::zero()) && d_a != T::zero() && d_b != T::zero() {
                        out.push(bracketed_root(|u| self.c1_du(u), a, b, d_a, d_b));
                    } else {
                        let tol = T::tolerance(EXTREMUM_TOL);
                        out.push(golden_section_min(|u| self.c1(u), a, b, tol));
                        out.push(golden_section_min(|u| -self.c1(u), a, b, tol));
                    }
                    if a != lo {
                        out.push(a);
                    }
                }
                out.sort_by(|x, y| x.partial_cmp(y).expect("finite stationary points"));
            }
        }
        out
    }

    fn u_hull(&self, a: T, b: T) -> Result<(T, T)> {
        let ua = self.model.u_of_w(a, self.v)?;
        let ub = if b == a { ua } else { self.model.u_of_w(b, self.v)? };
        Ok(if ua <= ub { (ua, ub) } else { (ub, ua) })
    }

    fn speed(&self, u: T) -> T {
        self.model.eigenvalue(u, self.v).abs()
    }
}

impl<'m, T: Real> ScalarFlux<T> for FrozenFlux<'m, T> {
    #[inline]
    fn value(&self, w: T) -> Result<T> {
        Ok(self.c1(self.model.u_of_w(w, self.v)?))
    }

    fn derivative(&self, w: T) -> Result<T> {
        Ok(self.model.eigenvalue(self.model.u_of_w(w, self.v)?, self.v))
    }

    fn extrema_in(&self, a: T, b: T) -> Result<(T, T)> {
        let (lo, hi) = self.u_hull(a, b)?;
        let (f_lo, f_hi) = (self.c1(lo), self.c1(hi));
        let mut mn = f_lo.min(f_hi);
        let mut mx = f_lo.max(f_hi);
        for u in self.stationary_points(lo, hi) {
            let fu = self.c1(u);
            mn = mn.min(fu);
            mx = mx.max(fu);
        }
        Ok((mn, mx))
    }

    fn max_speed_in(&self, a: T, b: T) -> Result<T> {
        let (lo, hi) = self.u_hull(a, b)?;
        let mut s = self.speed(lo).max(self.speed(hi));
        let monotone_speed = self.model.c1_shape() != Shape::General;
        if !monotone_speed && hi > lo {
            let tol = T::tolerance(EXTREMUM_TOL);
            let u = golden_section_min(|u| -self.speed(u), lo, hi, tol);
            s = s.max(self.speed(u));
            for p in self.model.u_breakpoints().into_iter().filter(|p| *p > lo && *p < hi) {
                s = s.max(self.speed(p));
            }
        }
        Ok(s)
    }

    fn reference_point(&self) -> Result<T> {
        let (m, big_m) = self.model.range();
        let mut best = (self.c1(m), m);
        for u in self
            .stationary_points(m, big_m)
            .into_iter()
            .chain(std::iter::once(big_m))
        {
            let fu = self.c1(u);
            if fu < best.0 {
                best = (fu, u);
            }
        }
        Ok(self.model.c0(best.1, self.v))
    }

    fn split_increments(&self, p: T, q: T) -> Result<(T, T)> {
        if p == q {
            return Ok((T::zero(), T::zero()));
        }
        let (lo, hi) = self.u_hull(p, q)?;
        let mut knots = vec![lo];
        knots.extend(self.stationary_points(lo, hi));
        knots.push(hi);
        let (mut pos, mut neg) = (T::zero(), T::zero());
        for seg in knots.windows(2) {
            let d = self.c1(seg[1]) - self.c1(seg[0]);
            if d > T::zero() {
                pos = pos + d;
            } else {
                neg = neg + d;
            }
        }
        Ok(if q >= p { (pos, neg) } else { (-pos, -neg) })
    }
}

/// Godunov flux: `min f` over `[a, b]` if `a <= b`, else `max f` over `[b, a]`.
pub fn godunov<T: Real>(a: T, b: T, flux: &impl ScalarFlux<T>) -> Result<T> {
    if a == b {
        return flux.value(a);
    }
    let (mn, mx) = flux.extrema_in(a, b)?;
    Ok(if a <= b { mn } else { mx })
}

/// Engquist-Osher flux `f(o) + int_o^a max(f', 0) + int_o^b min(f', 0)` with
/// `o` the flux's reference point.
pub fn engquist_osher<T: Real>(a: T, b: T, flux: &impl ScalarFlux<T>) -> Result<T> {
    let o = flux.reference_point()?;
    let (up, _) = flux.split_increments(o, a)?;
    let (_, down) = flux.split_increments(o, b)?;
    Ok(flux.value(o)? + up + down)
}

/// Local Lax-Friedrichs flux `(f(a) + f(b))/2 - s (b - a)/2`, `s = max |f'|`
/// over the hull of `a` and `b`.
///
/// Because `s` moves with its arguments, the partial derivatives of this flux
/// reach `2 max |f'|`; the subcell update stays monotone for
/// `cfl_number <= 1/4`.
pub fn rusanov<T: Real>(a: T, b: T, flux: &impl ScalarFlux<T>) -> Result<T> {
    let fa = flux.value(a)?;
    if a == b {
        return Ok(fa);
    }
    let fb = flux.value(b)?;
    let s = flux.max_speed_in(a, b)?;
    Ok(T::half() * (fa + fb) - T::half() * s * (b - a))
}

/// Selector for the two-point flux used at every interface.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NumericalFlux {
    #[default]
    Godunov,
    EngquistOsher,
    Rusanov,
}

impl NumericalFlux {
    pub const ALL: [NumericalFlux; 3] = [
        NumericalFlux::Godunov,
        NumericalFlux::EngquistOsher,
        NumericalFlux::Rusanov,
    ];

    pub fn evaluate<T: Real>(self, a: T, b: T, flux: &impl ScalarFlux<T>) -> Result<T> {
        match self {
            Self::Godunov => godunov(a, b, flux),
            Self::EngquistOsher => engquist_osher(a, b, flux),
            Self::Rusanov => rusanov(a, b, flux),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Godunov => "godunov",
            Self::EngquistOsher => "engquist-osher",
            Self::Rusanov => "rusanov",
        }
    }
}

impl FromStr for NumericalFlux {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "godunov" => Ok(Self::Godunov),
            "engquist-osher" => Ok(Self::EngquistOsher),
            "rusanov" => Ok(Self::Rusanov),
            other => Err(Error::UnknownClosure(other.to_string())),
        }
    }
}

impl std::fmt::Display for NumericalFlux {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Crandall-Majda entropy flux for `U = |. - k|`:
/// `g(a v k, b v k) - g(a ^ k, b ^ k)`.
pub fn numerical_entropy_flux_kruzhkov<T: Real>(
    a: T,
    b: T,
    k: T,
    flux: &impl ScalarFlux<T>,
    g: NumericalFlux,
) -> Result<T> {
    Ok(g.evaluate(a.max(k), b.max(k), flux)? - g.evaluate(a.min(k), b.min(k), flux)?)
}
