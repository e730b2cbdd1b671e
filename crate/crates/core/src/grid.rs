//! Staggered grid: `u` lives on cells `(x_{j-1/2}, x_{j+1/2})`, the color
//! function `v` on the shifted cells `(x_j, x_{j+1})` so that every flux
//! interface sees a single frozen `v`.
//!
//! Indexing: cells `j = 0..J`; color entry `i = 0..=J` belongs to the face
//! between cells `i - 1` and `i`, averaged over `(x_{i-1}, x_i)`. The two
//! outermost entries reach half a cell outside the domain.

use std::sync::Arc;

use crate::coupling::ScalarFn;
use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre5_mean;
use crate::special::{erf, erf_mean};
use crate::Real;

/// Regularised interface profile taking values in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ColorFunction<T> {
    /// `(erf(x / eta + zeta) + 1) / 2`
    ErfProfile {
        eta: T,
        zeta: T,
    },
    Constant(T),
    /// 0 for `x < 0`, 1 for `x > 0`.
    Heaviside,
}

impl<T: Real> ColorFunction<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::ErfProfile { eta, zeta } => {
                if !(eta > T::zero()) || !eta.is_finite() {
                    return Err(Error::Validation {
                        field: "eta".into(),
                        message: format!("must be positive, got {eta}"),
                    });
                }
                if !zeta.is_finite() {
                    return Err(Error::Validation {
                        field: "zeta".into(),
                        message: "must be finite".into(),
                    });
                }
            }
            Self::Constant(c) => {
                if !(c >= T::zero() && c <= T::one()) {
                    return Err(Error::Validation {
                        field: "color_value".into(),
                        message: format!("must lie in [0, 1], got {c}"),
                    });
                }
            }
            Self::Heaviside => {}
        }
        Ok(())
    }

    pub fn value(&self, x: T) -> T {
        match *self {
            Self::ErfProfile { eta, zeta } => T::half() * (erf(x / eta + zeta) + T::one()),
            Self::Constant(c) => c,
            Self::Heaviside => {
                if x > T::zero() {
                    T::one()
                } else if x < T::zero() {
                    T::zero()
                } else {
                    T::half()
                }
            }
        }
    }

    /// Exact mean over `(a, b)`.
    pub fn average(&self, a: T, b: T) -> T {
        match *self {
            Self::ErfProfile { eta, zeta } => {
                let mean = erf_mean(a / eta + zeta, b / eta + zeta);
                (T::half() * (mean + T::one())).max(T::zero()).min(T::one())
            }
            Self::Constant(c) => c,
            Self::Heaviside => {
                let width = b - a;
                if width <= T::zero() {
                    return self.value(a);
                }
                (b.max(T::zero()) - a.max(T::zero())) / width
            }
        }
    }
}

/// Uniform staggered grid on `[x_min, x_max]` carrying the color averages.
#[derive(Clone, Debug)]
pub struct StaggeredGrid<T> {
    x_min: T,
    x_max: T,
    cells: usize,
    dx: T,
    v: Vec<T>,
}

impl<T: Real> StaggeredGrid<T> {
    /// Grid with `cells` u-cells and color identically zero.
    pub fn new(x_min: T, x_max: T, cells: usize) -> Result<Self> {
        if cells == 0 {
            return Err(Error::InvalidInput("grid needs at least one cell".into()));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::InvalidInput(format!("invalid domain [{x_min}, {x_max}]")));
        }
        let dx = (x_max - x_min) / T::lit(cells as f64);
        Ok(Self {
            x_min,
            x_max,
            cells,
            dx,
            v: vec![T::zero(); cells + 1],
        })
    }

    /// Replaces the color entries by the exact cell averages of `color`.
    pub fn with_color(mut self, color: &ColorFunction<T>) -> Result<Self> {
        color.validate()?;
        self.v = cell_average_color(&self, color);
        Ok(self)
    }

    /// Installs an explicit color array (length `J + 1`, entries in `[0, 1]`).
    pub fn with_v(mut self, v: Vec<T>) -> Result<Self> {
        if v.len() != self.cells + 1 {
            return Err(Error::LengthMismatch {
                expected: self.cells + 1,
                found: v.len(),
            });
        }
        if let Some(bad) = v.iter().find(|x| !(**x >= T::zero() && **x <= T::one())) {
            return Err(Error::InvalidInput(format!("color value {bad} outside [0, 1]")));
        }
        self.v = v;
        Ok(self)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dx(&self) -> T {
        self.dx
    }

    pub fn x_min(&self) -> T {
        self.x_min
    }

    pub fn x_max(&self) -> T {
        self.x_max
    }

    /// Color averages `v_{j+1/2}`, one per face.
    pub fn v(&self) -> &[T] {
        &self.v
    }

    /// Face `x_{j-1/2}` for `j = 0..=J`.
    pub fn face(&self, j: usize) -> T {
        self.x_min + (self.x_max - self.x_min) * (T::lit(j as f64) / T::lit(self.cells as f64))
    }

    /// Cell center `x_j`.
    pub fn center(&self, j: usize) -> T {
        T::half() * (self.face(j) + self.face(j + 1))
    }

    pub fn centers(&self) -> Vec<T> {
        (0..self.cells).map(|j| self.center(j)).collect()
    }

    /// Support `(x_{i-1}, x_i)` of color entry `i`.
    pub fn v_cell(&self, i: usize) -> (T, T) {
        let f = self.face(i);
        let h = T::half() * self.dx;
        (f - h, f + h)
    }

    /// Color values seen by cell `j` on its left and right halves.
    #[inline]
    pub fn cell_colors(&self, j: usize) -> (T, T) {
        (self.v[j], self.v[j + 1])
    }
}

/// Exact averages of `color` over every v-cell of `grid`.
pub fn cell_average_color<T: Real>(grid: &StaggeredGrid<T>, color: &ColorFunction<T>) -> Vec<T> {
    (0..=grid.cells())
        .map(|i| {
            let (a, b) = grid.v_cell(i);
            color.average(a, b)
        })
        .collect()
}

/// Initial datum `u0`.
#[derive(Clone)]
pub enum InitialData<T> {
    /// `left` for `x < jump`, `right` for `x > jump`.
    Riemann {
        left: T,
        right: T,
        jump: T,
    },
    Constant(T),
    Smooth(ScalarFn<T>),
}

impl<T: Real> InitialData<T> {
    pub fn smooth(g: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::Smooth(Arc::new(g))
    }
}

impl<T: Real> std::fmt::Debug for InitialData<T> {
    fn fmt(&self, fmt: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Riemann { left, right, jump } => write!(fmt, "Riemann({left}, {right} @ {jump})"),
            Self::Constant(c) => write!(fmt, "Constant({c})"),
            Self::Smooth(_) => write!(fmt, "Smooth"),
        }
    }
}

/// Cell averages of `u0`: exact overlap fractions for Riemann data, 5-point
/// Gauss-Legendre for smooth data.
pub fn cell_average_initial<T: Real>(grid: &StaggeredGrid<T>, u0: &InitialData<T>) -> Vec<T> {
    (0..grid.cells())
        .map(|j| {
            let (a, b) = (grid.face(j), grid.face(j + 1));
            match u0 {
                InitialData::Constant(c) => *c,
                InitialData::Riemann { left, right, jump } => {
                    if b <= *jump {
                        *left
                    } else if a >= *jump {
                        *right
                    } else {
                        let frac = (*jump - a) / (b - a);
                        frac * *left + (T::one() - frac) * *right
                    }
                }
                InitialData::Smooth(g) => gauss_legendre5_mean(&|x| g(x), a, b),
            }
        })
        .collect()
}

/// Pads `u` with one zero-gradient ghost value on each side.
pub fn apply_neumann_ghosts<T: Copy>(u: &[T]) -> Result<Vec<T>> {
    let (first, last) = match (u.first(), u.last()) {
        (Some(a), Some(b)) => (*a, *b),
        _ => return Err(Error::EmptyArray),
    };
    let mut out = Vec::with_capacity(u.len() + 2);
    out.push(first);
    out.extend_from_slice(u);
    out.push(last);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn midpoint_mean(color: &ColorFunction<f64>, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        (0..n).map(|i| color.value(a + (i as f64 + 0.5) * h)).sum::<f64>() / n as f64
    }

    #[test]
    fn constant_color() {
        let g = StaggeredGrid::new(-1.0, 1.0, 10)
            .unwrap()
            .with_color(&ColorFunction::Constant(0.3))
            .unwrap();
        assert!(g.v().iter().all(|&v| v == 0.3));
        assert_eq!(g.v().len(), 11);
    }

    #[test]
    fn erf_symmetric_cell_is_one_half() {
        let c = ColorFunction::<f64>::ErfProfile { eta: 0.01, zeta: 0.0 };
        assert!((c.average(-0.013, 0.013) - 0.5).abs() < 1e-15);
        let g = StaggeredGrid::new(-1.0, 1.0, 100).unwrap().with_color(&c).unwrap();
        assert!((g.v()[50] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn erf_saturated_cell_against_riemann_sum() {
        let c = ColorFunction::<f64>::ErfProfile { eta: 0.01, zeta: 0.0 };
        let avg = c.average(0.05, 0.07);
        assert!(1.0 - avg <= 1e-6 && avg < 1.0);
        assert!((avg - midpoint_mean(&c, 0.05, 0.07, 10_000)).abs() < 1e-9);
    }

    #[test]
    fn heaviside_overlap_fraction() {
        let c = ColorFunction::<f64>::Heaviside;
        assert_eq!(c.average(-0.3, 0.1), 0.25);
        assert_eq!(c.average(-0.3, -0.1), 0.0);
        assert_eq!(c.average(0.2, 0.4), 1.0);
    }

    #[test]
    fn invalid_eta_is_rejected() {
        assert!(ColorFunction::ErfProfile { eta: -1.0, zeta: 0.0 }.validate().is_err());
        assert!(ColorFunction::Constant(1.5).validate().is_err());
    }

    #[test]
    fn riemann_averages() {
        let g = StaggeredGrid::new(-1.0, 1.0, 8).unwrap();
        let u = cell_average_initial(
            &g,
            &InitialData::Riemann {
                left: 2.0,
                right: -1.0,
                jump: 0.0,
            },
        );
        assert_eq!(u, vec![2.0, 2.0, 2.0, 2.0, -1.0, -1.0, -1.0, -1.0]);
        let u = cell_average_initial(
            &g,
            &InitialData::Riemann {
                left: 2.0,
                right: -1.0,
                jump: 0.0625,
            },
        );
        assert_eq!(u[4], 0.25 * 2.0 - 0.75);
        let u = cell_average_initial(
            &g,
            &InitialData::Riemann {
                left: 0.7,
                right: 0.7,
                jump: 0.1,
            },
        );
        assert!(u.iter().all(|&x| x == 0.7));
    }

    #[test]
    fn smooth_average_is_exact_for_polynomials() {
        let g = StaggeredGrid::new(0.0, 1.0, 4).unwrap();
        let u = cell_average_initial(&g, &InitialData::smooth(|x: f64| x * x));
        // mean of x^2 over [0, 1/4] is 1/48
        assert!((u[0] - 1.0 / 48.0).abs() < 1e-15);
    }

    #[test]
    fn ghosts() {
        assert_eq!(apply_neumann_ghosts(&[4.0]).unwrap(), vec![4.0, 4.0, 4.0]);
        assert_eq!(apply_neumann_ghosts(&[1, 2, 3]).unwrap(), vec![1, 1, 2, 3, 3]);
        assert!(matches!(apply_neumann_ghosts::<f64>(&[]), Err(Error::EmptyArray)));
    }

    #[test]
    fn grid_spans_domain() {
        for n in [100, 1000, 5000] {
            let g = StaggeredGrid::new(-1.0, 1.0, n).unwrap();
            assert!((g.dx() * n as f64 - 2.0).abs() < 1e-14);
            assert_eq!(g.face(n), 1.0);
            assert_eq!(g.face(n / 2), 0.0);
        }
    }
}
