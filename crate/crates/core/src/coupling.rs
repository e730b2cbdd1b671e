//! Coupling mathematics: transmission maps, the augmented maps `C0`/`C1`,
//! the change of variables between the coupled unknown `w` and the
//! interface-continuous unknown `u`, entropy pairs and the transport
//! eigenvalue.
//!
//! With transmission maps `theta±` and their inverses `gamma±`,
//!
//! ```text
//! C0(u, v) = (1 - v) gamma-(u) + v gamma+(u)
//! C1(u, v) = (1 - v) f-(gamma-(u)) + v f+(gamma+(u))
//! ```
//!
//! and `w = C0(u, v)` is strictly increasing in `u` for every `v` in `[0, 1]`.

use std::fmt;
use std::sync::Arc;

use crate::error::{f, Error, Result};
use crate::quadrature::adaptive_simpson;
use crate::scalar::sgn;
use crate::solve::invert_monotone;
use crate::Real;

/// Shared scalar closure.
pub type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Curvature class of a flux; lets the flux layer skip extremum searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    Convex,
    Concave,
    General,
}

/// A flux `f±` with its derivative and interior extremum locations.
#[derive(Clone)]
pub enum FluxFunction<T> {
    /// `w^2 / 2`
    Burgers,
    /// `(w + 1)^2 / 2`
    BurgersShifted,
    Custom {
        name: String,
        f: ScalarFn<T>,
        df: ScalarFn<T>,
        critical_points: Vec<T>,
        shape: Shape,
    },
}

impl<T: Real> FluxFunction<T> {
    /// Looks up a catalog flux by name.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim() {
            "burgers" => Ok(Self::Burgers),
            "burgers_shifted" => Ok(Self::BurgersShifted),
            other => Err(Error::UnknownClosure(other.to_string())),
        }
    }

    pub fn custom(
        name: impl Into<String>,
        f: impl Fn(T) -> T + Send + Sync + 'static,
        df: impl Fn(T) -> T + Send + Sync + 'static,
        critical_points: Vec<T>,
        shape: Shape,
    ) -> Self {
        Self::Custom {
            name: name.into(),
            f: Arc::new(f),
            df: Arc::new(df),
            critical_points,
            shape,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Burgers => "burgers".into(),
            Self::BurgersShifted => "burgers_shifted".into(),
            Self::Custom { name, .. } => name.clone(),
        }
    }

    #[inline]
    pub fn eval(&self, w: T) -> T {
        match self {
            Self::Burgers => T::half() * w * w,
            Self::BurgersShifted => {
                let s = w + T::one();
                T::half() * s * s
            }
            Self::Custom { f, .. } => f(w),
        }
    }

    #[inline]
    pub fn deriv(&self, w: T) -> T {
        match self {
            Self::Burgers => w,
            Self::BurgersShifted => w + T::one(),
            Self::Custom { df, .. } => df(w),
        }
    }

    /// Sonic points: where the derivative changes sign.
    pub fn critical_points(&self) -> Vec<T> {
        match self {
            Self::Burgers => vec![T::zero()],
            Self::BurgersShifted => vec![-T::one()],
            Self::Custom { critical_points, .. } => critical_points.clone(),
        }
    }

    pub fn shape(&self) -> Shape {
        match self {
            Self::Burgers | Self::BurgersShifted => Shape::Convex,
            Self::Custom { shape, .. } => *shape,
        }
    }
}

impl<T: Real> fmt::Debug for FluxFunction<T> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "FluxFunction({})", self.name())
    }
}

/// An increasing transmission map `theta` together with its inverse `gamma`.
#[derive(Clone)]
pub enum TransmissionMap<T> {
    Identity,
    /// `theta(w) = c w` with `c > 0`.
    Linear(T),
    Custom {
        name: String,
        theta: ScalarFn<T>,
        dtheta: ScalarFn<T>,
        inverse: Option<ScalarFn<T>>,
    },
}

impl<T: Real> TransmissionMap<T> {
    /// Parses `identity` or `linear(c)`.
    pub fn from_name(name: &str) -> Result<Self> {
        let name = name.trim();
        if name == "identity" {
            return Ok(Self::Identity);
        }
        if let Some(arg) = name.strip_prefix("linear(").and_then(|s| s.strip_suffix(')')) {
            let c: f64 = arg
                .trim()
                .parse()
                .map_err(|_| Error::UnknownClosure(name.to_string()))?;
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::UnknownClosure(name.to_string()));
            }
            return Ok(Self::Linear(T::lit(c)));
        }
        Err(Error::UnknownClosure(name.to_string()))
    }

    pub fn custom(
        name: impl Into<String>,
        theta: impl Fn(T) -> T + Send + Sync + 'static,
        dtheta: impl Fn(T) -> T + Send + Sync + 'static,
        inverse: Option<ScalarFn<T>>,
    ) -> Self {
        Self::Custom {
            name: name.into(),
            theta: Arc::new(theta),
            dtheta: Arc::new(dtheta),
            inverse,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Identity => "identity".into(),
            Self::Linear(c) => format!("linear({c})"),
            Self::Custom { name, .. } => name.clone(),
        }
    }

    /// Slope of `theta` when it is linear.
    pub fn linear_slope(&self) -> Option<T> {
        match self {
            Self::Identity => Some(T::one()),
            Self::Linear(c) => Some(*c),
            Self::Custom { .. } => None,
        }
    }

    #[inline]
    pub fn theta(&self, w: T) -> T {
        match self {
            Self::Identity => w,
            Self::Linear(c) => *c * w,
            Self::Custom { theta, .. } => theta(w),
        }
    }

    #[inline]
    pub fn dtheta(&self, w: T) -> T {
        match self {
            Self::Identity => T::one(),
            Self::Linear(c) => *c,
            Self::Custom { dtheta, .. } => dtheta(w),
        }
    }

    /// Inverse map. Custom maps without a closed-form inverse are inverted
    /// numerically; `NaN` is returned if no preimage is found.
    #[inline]
    pub fn gamma(&self, u: T) -> T {
        match self {
            Self::Identity => u,
            Self::Linear(c) => u / *c,
            Self::Custom { inverse: Some(inv), .. } => inv(u),
            Self::Custom { theta, dtheta, .. } => invert_unbounded(theta.as_ref(), dtheta.as_ref(), u),
        }
    }

    #[inline]
    pub fn dgamma(&self, u: T) -> T {
        match self {
            Self::Identity => T::one(),
            Self::Linear(c) => c.recip(),
            Self::Custom { dtheta, .. } => dtheta(self.gamma(u)).recip(),
        }
    }
}

fn invert_unbounded<T: Real>(
    theta: &(dyn Fn(T) -> T + Send + Sync),
    dtheta: &(dyn Fn(T) -> T + Send + Sync),
    u: T,
) -> T {
    let mut half_width = T::one();
    for _ in 0..64 {
        let lo = u - half_width;
        let hi = u + half_width;
        if theta(lo) <= u && theta(hi) >= u {
            let tol = T::tolerance(1e-14) * T::one().max(u.abs());
            return invert_monotone(theta, dtheta, u, u, lo, hi, tol).unwrap_or(T::nan());
        }
        half_width = half_width * T::two();
    }
    T::nan()
}

impl<T: Real> fmt::Debug for TransmissionMap<T> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fmt, "TransmissionMap({})", self.name())
    }
}

#[derive(Clone)]
pub struct TransmissionPair<T> {
    pub left: TransmissionMap<T>,
    pub right: TransmissionMap<T>,
}

impl<T: Real> TransmissionPair<T> {
    pub fn identity() -> Self {
        Self {
            left: TransmissionMap::Identity,
            right: TransmissionMap::Identity,
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(
            (&self.left, &self.right),
            (TransmissionMap::Identity, TransmissionMap::Identity)
        )
    }
}

#[derive(Clone)]
pub struct FluxPair<T> {
    pub left: FluxFunction<T>,
    pub right: FluxFunction<T>,
}

/// Convex entropy `U(w)` with its first two derivatives.
#[derive(Clone)]
pub enum EntropyPair<T> {
    /// `w^2 / 2`
    Quadratic,
    /// `|w - k|`
    Kruzhkov(T),
    /// `exp(w)`
    Exponential,
    /// `sqrt((w - k)^2 + delta^2)`, a smooth stand-in for `|w - k|`.
    SmoothedKruzhkov { k: T, delta: T },
    Custom {
        u: ScalarFn<T>,
        du: ScalarFn<T>,
        d2u: ScalarFn<T>,
    },
}

impl<T: Real> EntropyPair<T> {
    pub fn value(&self, w: T) -> T {
        match self {
            Self::Quadratic => T::half() * w * w,
            Self::Kruzhkov(k) => (w - *k).abs(),
            Self::Exponential => w.exp(),
            Self::SmoothedKruzhkov { k, delta } => (w - *k).hypot(*delta),
            Self::Custom { u, .. } => u(w),
        }
    }

    pub fn deriv(&self, w: T) -> T {
        match self {
            Self::Quadratic => w,
            Self::Kruzhkov(k) => sgn(w - *k),
            Self::Exponential => w.exp(),
            Self::SmoothedKruzhkov { k, delta } => (w - *k) / (w - *k).hypot(*delta),
            Self::Custom { du, .. } => du(w),
        }
    }

    /// Second derivative; zero away from the kink for Kruzhkov entropies.
    pub fn second(&self, w: T) -> T {
        match self {
            Self::Quadratic => T::one(),
            Self::Kruzhkov(_) => T::zero(),
            Self::Exponential => w.exp(),
            Self::SmoothedKruzhkov { k, delta } => {
                let r = (w - *k).hypot(*delta);
                *delta * *delta / (r * r * r)
            }
            Self::Custom { d2u, .. } => d2u(w),
        }
    }

    /// `(min U'', max U'')` over `[lo, hi]`. Custom entropies are sampled on
    /// 1001 points. Kruzhkov entropies report `(0, +inf)` when `k` is inside.
    pub fn second_bounds(&self, lo: T, hi: T) -> (T, T) {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        match self {
            Self::Quadratic => (T::one(), T::one()),
            Self::Kruzhkov(k) => {
                if *k >= lo && *k <= hi {
                    (T::zero(), T::infinity())
                } else {
                    (T::zero(), T::zero())
                }
            }
            Self::Exponential => (lo.exp(), hi.exp()),
            Self::SmoothedKruzhkov { k, .. } => {
                let far = if (lo - *k).abs() > (hi - *k).abs() { lo } else { hi };
                let near = k.max(lo).min(hi);
                (self.second(far), self.second(near))
            }
            Self::Custom { d2u, .. } => {
                let n = 1000;
                (0..=n).fold((T::infinity(), T::neg_infinity()), |(mn, mx), i| {
                    let x = lo + (hi - lo) * T::lit(i as f64 / n as f64);
                    let s = d2u(x);
                    (mn.min(s), mx.max(s))
                })
            }
        }
    }

    /// Lower bound on `U''` over the working range.
    pub fn convexity_modulus(&self, lo: T, hi: T) -> T {
        self.second_bounds(lo, hi).0
    }

    fn kink(&self) -> Option<T> {
        match self {
            Self::Kruzhkov(k) => Some(*k),
            _ => None,
        }
    }
}

impl<T: Real> fmt::Debug for TransmissionPair<T> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("TransmissionPair")
            .field("left", &self.left)
            .field("right", &self.right)
            .finish()
    }
}

impl<T: Real> fmt::Debug for FluxPair<T> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("FluxPair")
            .field("left", &self.left)
            .field("right", &self.right)
            .finish()
    }
}

impl<T: Real> fmt::Debug for EntropyPair<T> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Quadratic => write!(fmt, "Quadratic"),
            Self::Kruzhkov(k) => write!(fmt, "Kruzhkov({k})"),
            Self::Exponential => write!(fmt, "Exponential"),
            Self::SmoothedKruzhkov { k, delta } => write!(fmt, "SmoothedKruzhkov({k}, {delta})"),
            Self::Custom { .. } => write!(fmt, "Custom"),
        }
    }
}

/// Absolute tolerance of the entropy flux quadrature.
pub const ENTROPY_QUADRATURE_TOL: f64 = 1e-10;

/// Relative tolerance of `u_of_w`.
pub const INVERSION_TOL: f64 = 1e-12;

/// The coupled pair of conservation laws on a working range `[m, M]` of `u`.
#[derive(Clone)]
pub struct CouplingModel<T> {
    pub transmission: TransmissionPair<T>,
    pub fluxes: FluxPair<T>,
    range: (T, T),
}

impl<T: Real> fmt::Debug for CouplingModel<T> {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("CouplingModel")
            .field("transmission", &self.transmission)
            .field("fluxes", &self.fluxes)
            .field("range", &self.range)
            .finish()
    }
}

impl<T: Real> CouplingModel<T> {
    pub fn new(fluxes: FluxPair<T>, transmission: TransmissionPair<T>, m: T, big_m: T) -> Result<Self> {
        if !(m.is_finite() && big_m.is_finite()) || m > big_m {
            return Err(Error::InvalidInput(format!(
                "working range [{m}, {big_m}] is not an interval"
            )));
        }
        Ok(Self {
            transmission,
            fluxes,
            range: (m, big_m),
        })
    }

    /// Working range `[m, M]` in `u`.
    pub fn range(&self) -> (T, T) {
        self.range
    }

    pub fn with_range(mut self, m: T, big_m: T) -> Result<Self> {
        if !(m.is_finite() && big_m.is_finite()) || m > big_m {
            return Err(Error::InvalidInput(format!(
                "working range [{m}, {big_m}] is not an interval"
            )));
        }
        self.range = (m, big_m);
        Ok(self)
    }

    /// Bracket used by every scalar inversion: `[m - 1, M + 1]`.
    pub fn inversion_bracket(&self) -> (T, T) {
        (self.range.0 - T::one(), self.range.1 + T::one())
    }

    #[inline]
    pub fn gamma_minus(&self, u: T) -> T {
        self.transmission.left.gamma(u)
    }

    #[inline]
    pub fn gamma_plus(&self, u: T) -> T {
        self.transmission.right.gamma(u)
    }

    /// `C0(u, v) = (1 - v) gamma-(u) + v gamma+(u)`.
    #[inline]
    pub fn c0(&self, u: T, v: T) -> T {
        let a = self.gamma_minus(u);
        a + v * (self.gamma_plus(u) - a)
    }

    #[inline]
    pub fn c0_du(&self, u: T, v: T) -> T {
        let a = self.transmission.left.dgamma(u);
        a + v * (self.transmission.right.dgamma(u) - a)
    }

    /// `C1(u, v) = (1 - v) f-(gamma-(u)) + v f+(gamma+(u))`.
    #[inline]
    pub fn c1(&self, u: T, v: T) -> T {
        let a = self.fluxes.left.eval(self.gamma_minus(u));
        a + v * (self.fluxes.right.eval(self.gamma_plus(u)) - a)
    }

    /// `(d/du f-(gamma-(u)), d/du f+(gamma+(u)))`.
    #[inline]
    pub fn composed_flux_slopes(&self, u: T) -> (T, T) {
        let tl = &self.transmission.left;
        let tr = &self.transmission.right;
        (
            tl.dgamma(u) * self.fluxes.left.deriv(tl.gamma(u)),
            tr.dgamma(u) * self.fluxes.right.deriv(tr.gamma(u)),
        )
    }

    #[inline]
    pub fn c1_du(&self, u: T, v: T) -> T {
        let (l, r) = self.composed_flux_slopes(u);
        l + v * (r - l)
    }

    /// Coefficient of `dx v` in the balance law: `f+(gamma+(u)) - f-(gamma-(u))`.
    #[inline]
    pub fn source_coeff(&self, u: T) -> T {
        self.fluxes.right.eval(self.gamma_plus(u)) - self.fluxes.left.eval(self.gamma_minus(u))
    }

    /// Transport eigenvalue `dC1/du / dC0/du`; vanishes at resonant states.
    #[inline]
    pub fn eigenvalue(&self, u: T, v: T) -> T {
        self.c1_du(u, v) / self.c0_du(u, v)
    }

    /// Solves `C0(u, v) = w` for `u`.
    ///
    /// Linear transmissions are inverted in closed form; otherwise Newton with
    /// bisection fallback on [`Self::inversion_bracket`].
    pub fn u_of_w(&self, w: T, v: T) -> Result<T> {
        if self.transmission.is_identity() {
            return Ok(w);
        }
        if let (Some(cl), Some(cr)) = (
            self.transmission.left.linear_slope(),
            self.transmission.right.linear_slope(),
        ) {
            let slope = (T::one() - v) / cl + v / cr;
            return Ok(w / slope);
        }
        let (lo, hi) = self.inversion_bracket();
        let tol = T::tolerance(INVERSION_TOL) * T::one().max(w.abs());
        let guess = self.transmission.left.theta(w) * (T::one() - v) + self.transmission.right.theta(w) * v;
        invert_monotone(|u| self.c0(u, v), |u| self.c0_du(u, v), w, guess, lo, hi, tol)
    }

    /// Balance-law flux `f(w, v) = C1(u(w, v), v)`.
    pub fn w_flux(&self, w: T, v: T) -> Result<T> {
        Ok(self.c1(self.u_of_w(w, v)?, v))
    }

    /// Locations in `u` where one of the composed fluxes `f±(gamma±(u))`
    /// changes monotonicity, sorted.
    pub fn u_breakpoints(&self) -> Vec<T> {
        let mut pts: Vec<T> = self
            .fluxes
            .left
            .critical_points()
            .into_iter()
            .map(|c| self.transmission.left.theta(c))
            .chain(
                self.fluxes
                    .right
                    .critical_points()
                    .into_iter()
                    .map(|c| self.transmission.right.theta(c)),
            )
            .filter(|p| p.is_finite())
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        pts.dedup();
        pts
    }

    /// Shape of `u -> C1(u, v)`, valid for every `v` in `[0, 1]`.
    pub fn c1_shape(&self) -> Shape {
        let linear =
            self.transmission.left.linear_slope().is_some() && self.transmission.right.linear_slope().is_some();
        if !linear {
            return Shape::General;
        }
        match (self.fluxes.left.shape(), self.fluxes.right.shape()) {
            (Shape::Convex, Shape::Convex) => Shape::Convex,
            (Shape::Concave, Shape::Concave) => Shape::Concave,
            _ => Shape::General,
        }
    }

    /// Entropy flux `Q(u, v) = int_m^u U'(C0(s, v)) dC1/du(s, v) ds`,
    /// anchored at the working-range minimum `m`.
    pub fn entropy_flux_q(&self, u: T, v: T, entropy: &EntropyPair<T>) -> Result<T> {
        let m = self.range.0;
        let integrand = |s: T| entropy.deriv(self.c0(s, v)) * self.c1_du(s, v);
        let (lo, hi, sign) = if u >= m { (m, u, T::one()) } else { (u, m, -T::one()) };
        let mut cuts = vec![lo];
        if let Some(k) = entropy.kink() {
            let (wlo, whi) = (self.c0(lo, v), self.c0(hi, v));
            if k > wlo && k < whi {
                let kappa = self.u_of_w(k, v)?;
                if kappa > lo && kappa < hi {
                    cuts.push(kappa);
                }
            }
        }
        cuts.push(hi);
        let total = hi - lo;
        let tol = T::tolerance(ENTROPY_QUADRATURE_TOL);
        let mut acc = T::zero();
        for pair in cuts.windows(2) {
            let share = if total > T::zero() {
                (pair[1] - pair[0]) / total
            } else {
                T::one()
            };
            acc = acc + adaptive_simpson(&integrand, pair[0], pair[1], tol * share.max(T::lit(1e-3)))?;
        }
        Ok(sign * acc)
    }

    /// Kruzhkov entropy flux in `w`: `sgn(w - k) (f(w, v) - f(k, v))`.
    pub fn kruzhkov_entropy_flux(&self, w: T, v: T, k: T) -> Result<T> {
        if w == k {
            return Ok(T::zero());
        }
        Ok(sgn(w - k) * (self.w_flux(w, v)? - self.w_flux(k, v)?))
    }

    /// Samples the structural assumptions on the working range: strict
    /// monotonicity of `theta±` and `C0(., v)`, and `gamma±(theta±(w)) = w`.
    pub fn check_invariants(&self) -> Result<()> {
        let (m, big_m) = self.range;
        let n = 200;
        let tol = T::tolerance(1e-12);
        for i in 0..=n {
            let u = m + (big_m - m) * T::lit(i as f64 / n as f64);
            for (side, map) in [("left", &self.transmission.left), ("right", &self.transmission.right)] {
                let w = map.gamma(u);
                if !(map.dtheta(w) > T::zero()) {
                    return Err(Error::InvalidInput(format!(
                        "{side} transmission is not increasing at w = {w}"
                    )));
                }
                let back = map.gamma(map.theta(w));
                if !((back - w).abs() <= tol * T::one().max(w.abs())) {
                    return Err(Error::InvalidInput(format!(
                        "{side} transmission inverse is inconsistent at w = {w}"
                    )));
                }
            }
            for jv in 0..=10 {
                let v = T::lit(jv as f64 / 10.0);
                if !(self.c0_du(u, v) > T::zero()) {
                    return Err(Error::InvalidInput(format!(
                        "dC0/du vanishes at (u, v) = ({}, {})",
                        f(u),
                        f(v)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn resonant() -> CouplingModel<f64> {
        CouplingModel::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::BurgersShifted,
            },
            TransmissionPair::identity(),
            -1.0,
            1.5,
        )
        .unwrap()
    }

    fn doubled_right() -> CouplingModel<f64> {
        CouplingModel::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::BurgersShifted,
            },
            TransmissionPair {
                left: TransmissionMap::Identity,
                right: TransmissionMap::Linear(2.0),
            },
            -1.0,
            1.5,
        )
        .unwrap()
    }

    fn cubic_right() -> CouplingModel<f64> {
        // theta+(w) = w + w^3 / 3, no closed-form inverse supplied
        CouplingModel::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::BurgersShifted,
            },
            TransmissionPair {
                left: TransmissionMap::Identity,
                right: TransmissionMap::custom("cubic", |w: f64| w + w * w * w / 3.0, |w| 1.0 + w * w, None),
            },
            -1.0,
            1.5,
        )
        .unwrap()
    }

    #[test]
    fn c0_examples() {
        assert_eq!(resonant().c0(0.3, 0.7), 0.3);
        assert_eq!(doubled_right().c0(1.0, 0.5), 0.75);
        let m = cubic_right();
        assert_eq!(m.c0(0.4, 0.0), m.gamma_minus(0.4));
    }

    #[test]
    fn c1_examples() {
        let m = resonant();
        assert!((m.c1(0.8, 0.0) - 0.32).abs() < 1e-16);
        assert_eq!(m.c1(-1.0, 0.5), 0.25);
        assert_eq!(m.c1(1.5, 1.0), 3.125);
    }

    #[test]
    fn u_of_w_examples() {
        assert_eq!(resonant().u_of_w(0.37, 0.9).unwrap(), 0.37);
        assert!((doubled_right().u_of_w(0.75, 0.5).unwrap() - 1.0).abs() < 1e-15);
        let m = cubic_right();
        let w = m.c0(0.42, 0.3);
        assert!((m.u_of_w(w, 0.3).unwrap() - 0.42).abs() <= 1e-12);
    }

    #[test]
    fn u_of_w_bracket_failure() {
        let m = cubic_right();
        assert!(matches!(m.u_of_w(50.0, 0.5), Err(Error::BracketFailure { .. })));
    }

    #[test]
    fn source_coeff_examples() {
        let m = resonant();
        assert_eq!(m.source_coeff(0.0), 0.5);
        assert_eq!(m.source_coeff(-0.5), 0.0);
        let same = CouplingModel::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::Burgers,
            },
            TransmissionPair {
                left: TransmissionMap::Linear(3.0),
                right: TransmissionMap::Linear(3.0),
            },
            -1.0,
            1.0,
        )
        .unwrap();
        for i in 0..20 {
            assert_eq!(same.source_coeff(-1.0 + 0.1 * i as f64), 0.0);
        }
    }

    #[test]
    fn w_flux_examples() {
        let m = resonant();
        assert_eq!(m.w_flux(0.6, 0.0).unwrap(), 0.18);
        assert_eq!(m.w_flux(1.0, 0.5).unwrap(), 1.25);
        assert_eq!(m.w_flux(-1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn eigenvalue_examples() {
        let m = resonant();
        for &(u, v) in &[(0.2, 0.3), (-0.7, 0.9), (1.4, 0.0)] {
            assert!((m.eigenvalue(u, v) - (u + v)).abs() < 1e-15);
        }
        assert_eq!(m.eigenvalue(-1.0, 0.0), -1.0);
        assert_eq!(m.eigenvalue(-0.5, 0.5), 0.0);
    }

    #[test]
    fn entropy_flux_anchor_and_quadratic_oracle() {
        let m = resonant();
        assert_eq!(m.entropy_flux_q(-1.0, 0.3, &EntropyPair::Quadratic).unwrap(), 0.0);
        // Q(u, 0) = int_{-1}^{u} s * s ds by a midpoint sum at 1e5 points
        let u = 1.2;
        let n = 100_000;
        let h = (u + 1.0) / n as f64;
        let oracle: f64 = (0..n)
            .map(|i| {
                let s = -1.0 + (i as f64 + 0.5) * h;
                s * s
            })
            .sum::<f64>()
            * h;
        let q = m.entropy_flux_q(u, 0.0, &EntropyPair::Quadratic).unwrap();
        assert!((q - oracle).abs() < 1e-8, "{q} vs {oracle}");
    }

    #[test]
    fn kruzhkov_flux_examples() {
        let m = resonant();
        assert_eq!(m.kruzhkov_entropy_flux(0.4, 0.2, 0.4).unwrap(), 0.0);
        assert_eq!(m.kruzhkov_entropy_flux(1.0, 0.0, 0.0).unwrap(), 0.5);
        assert_eq!(m.kruzhkov_entropy_flux(-1.0, 0.0, 0.0).unwrap(), -0.5);
    }

    #[test]
    fn catalog_lookup() {
        assert!(
            matches!(TransmissionMap::<f64>::from_name("linear(2.5)").unwrap(), TransmissionMap::Linear(c) if c == 2.5)
        );
        assert!(TransmissionMap::<f64>::from_name("linear(-1)").is_err());
        assert!(FluxFunction::<f64>::from_name("cubic").is_err());
        assert_eq!(
            FluxFunction::<f64>::from_name("burgers_shifted").unwrap().name(),
            "burgers_shifted"
        );
    }

    #[test]
    fn invariants_hold_for_catalog_models() {
        resonant().check_invariants().unwrap();
        doubled_right().check_invariants().unwrap();
        cubic_right().check_invariants().unwrap();
    }

    #[test]
    fn non_monotone_transmission_is_rejected() {
        let m = CouplingModel::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::Burgers,
            },
            TransmissionPair {
                left: TransmissionMap::Identity,
                right: TransmissionMap::custom(
                    "square",
                    |w: f64| w * w,
                    |w| 2.0 * w,
                    Some(Arc::new(|u: f64| u.sqrt())),
                ),
            },
            0.0,
            1.0,
        )
        .unwrap();
        assert!(m.check_invariants().is_err());
    }

    #[test]
    fn single_precision_model() {
        let m = CouplingModel::<f32>::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::BurgersShifted,
            },
            TransmissionPair {
                left: TransmissionMap::Identity,
                right: TransmissionMap::Linear(2.0),
            },
            -1.0,
            1.5,
        )
        .unwrap();
        assert!((m.c0(1.0, 0.5) - 0.75).abs() < 1e-7);
        assert!((m.u_of_w(0.75, 0.5).unwrap() - 1.0).abs() < 1e-6);
    }
}
