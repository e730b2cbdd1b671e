//! Discrete quantities bounded by the convergence analysis, evaluated at
//! run time: local maximum principle, subcell convex combination, discrete
//! Kruzhkov entropy inequalities, weak BV sums, total variation and the
//! well-balanced residual. Also shock tracking, plateau extraction and L1
//! errors for the experiments.

use std::ops::Range;

use crate::coupling::{CouplingModel, EntropyPair};
use crate::error::{f, Error, Result};
use crate::flux::{numerical_entropy_flux_kruzhkov, FrozenFlux, NumericalFlux, ScalarFlux};
use crate::grid::{apply_neumann_ghosts, StaggeredGrid};
use crate::scalar::sgn;
use crate::scheme::{SchemeState, StepEvent, StepObserver, StepReport};
use crate::Real;

pub const MAX_PRINCIPLE_TOL: f64 = 1e-12;
pub const CONVEX_COMBINATION_TOL: f64 = 1e-13;
pub const SUBCELL_MAX_PRINCIPLE_TOL: f64 = 1e-12;
pub const ENTROPY_RESIDUAL_TOL: f64 = 1e-12;
pub const TVD_TOL: f64 = 1e-12;
pub const SUP_NORM_TOL: f64 = 1e-12;
pub const WELL_BALANCED_TOL: f64 = 1e-10;
/// Allowed growth of the weak BV sum relative to the coarsest grid.
pub const WEAK_BV_FACTOR: f64 = 3.0;

/// Largest one-sided violation of `min(u_{j-1}, u_j, u_{j+1}) <= u'_j <= max(...)`,
/// with zero-gradient ghosts at both ends.
pub fn max_principle_violation<T: Real>(u_prev: &[T], u_next: &[T]) -> Result<T> {
    if u_prev.len() != u_next.len() {
        return Err(Error::LengthMismatch {
            expected: u_prev.len(),
            found: u_next.len(),
        });
    }
    let ext = apply_neumann_ghosts(u_prev)?;
    Ok(u_next.iter().enumerate().fold(T::zero(), |worst, (j, &x)| {
        let lo = ext[j].min(ext[j + 1]).min(ext[j + 2]);
        let hi = ext[j].max(ext[j + 1]).max(ext[j + 2]);
        worst.max(lo - x).max(x - hi)
    }))
}

pub fn total_variation<T: Real>(w: &[T]) -> T {
    w.windows(2).fold(T::zero(), |acc, p| acc + (p[1] - p[0]).abs())
}

/// `sum_{j in window} |w^{n+1,-}_{j+1/2,-} - w^{n+1,-}_{j-1/2,+}|^2 dx`.
pub fn weak_bv_increment<T: Real>(report: &StepReport<T>, window: Range<usize>) -> T {
    window.fold(T::zero(), |acc, j| {
        let (l, r) = report.subcell_intermediates(j);
        let d = r - l;
        acc + d * d * report.dx
    })
}

/// Cells whose centers satisfy `lo < x_j < hi`.
pub fn window_cells<T: Real>(grid: &StaggeredGrid<T>, lo: T, hi: T) -> Range<usize> {
    let centers = grid.centers();
    let start = centers.iter().position(|&x| x > lo).unwrap_or(centers.len());
    let end = centers.iter().rposition(|&x| x < hi).map_or(start, |e| e + 1);
    start..end.max(start)
}

/// Signed residuals `(left, right)` of the subcell Kruzhkov inequalities at
/// every face; nonpositive when the inequalities hold.
///
/// ```text
/// left  = U(w-') - U(w-) + r (G - F(w-))
/// right = U(w+') - U(w+) + r (F(w+) - G)
/// ```
/// with `U = |. - k|`, `r = 2 dt / dx`, `F` the Kruzhkov flux and `G` the
/// Crandall-Majda entropy flux of `selector`.
pub fn entropy_residuals<T: Real>(
    report: &StepReport<T>,
    model: &CouplingModel<T>,
    k: T,
    selector: NumericalFlux,
) -> Result<Vec<(T, T)>> {
    let r = report.subcell_ratio();
    report
        .interfaces
        .iter()
        .map(|face| {
            let flux = FrozenFlux::new(model, face.v);
            let fk = flux.value(k)?;
            let kflux = |w: T, fw: T| if w == k { T::zero() } else { sgn(w - k) * (fw - fk) };
            let g = numerical_entropy_flux_kruzhkov(face.w_minus, face.w_plus, k, &flux, selector)?;
            let left =
                (face.w_minus_next - k).abs() - (face.w_minus - k).abs() + r * (g - kflux(face.w_minus, face.f_minus));
            let right =
                (face.w_plus_next - k).abs() - (face.w_plus - k).abs() + r * (kflux(face.w_plus, face.f_plus) - g);
            Ok((left, right))
        })
        .collect()
}

/// `count` equispaced Kruzhkov levels spanning the `w` image of the working range.
pub fn kruzhkov_levels<T: Real>(model: &CouplingModel<T>, count: usize) -> Vec<T> {
    let (m, big_m) = model.range();
    let lo = model.gamma_minus(m).min(model.gamma_plus(m));
    let hi = model.gamma_minus(big_m).max(model.gamma_plus(big_m));
    if count <= 1 {
        return vec![T::half() * (lo + hi)];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * T::lit(i as f64 / (count - 1) as f64))
        .collect()
}

pub fn well_balanced_residual<T: Real>(u: &[T], u_star: T) -> T {
    u.iter().fold(T::zero(), |acc, &x| acc.max((x - u_star).abs()))
}

/// Tracked level crossings and the fitted front speed.
#[derive(Clone, Debug)]
pub struct ShockTrack<T> {
    /// `(t, x)` per snapshot.
    pub positions: Vec<(T, T)>,
    pub speed: T,
}

/// Locates the single crossing of `level` in each snapshot by linear
/// interpolation between cell centers, then fits a least-squares slope over
/// the second half of the snapshots. Crossings whose bracketing centers both
/// fall inside `exclude` are ignored.
pub fn shock_track<T: Real>(
    centers: &[T],
    snapshots: &[(T, Vec<T>)],
    level: T,
    exclude: Option<(T, T)>,
) -> Result<ShockTrack<T>> {
    let mut positions = Vec::with_capacity(snapshots.len());
    for (t, w) in snapshots {
        if w.len() != centers.len() {
            return Err(Error::LengthMismatch {
                expected: centers.len(),
                found: w.len(),
            });
        }
        let mut crossings = Vec::new();
        for i in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[i] - level, w[i + 1] - level);
            if (a >= T::zero()) == (b >= T::zero()) {
                continue;
            }
            let (xa, xb) = (centers[i], centers[i + 1]);
            if let Some((lo, hi)) = exclude {
                if xa >= lo && xb <= hi {
                    continue;
                }
            }
            crossings.push(xa + (xb - xa) * a / (a - b));
        }
        match crossings.len() {
            0 => {
                return Err(Error::NoCrossing {
                    level: f(level),
                    t: f(*t),
                })
            }
            1 => positions.push((*t, crossings[0])),
            count => {
                return Err(Error::MultipleCrossings {
                    level: f(level),
                    t: f(*t),
                    count,
                })
            }
        }
    }
    if positions.len() < 2 {
        return Err(Error::InvalidInput(
            "shock tracking needs at least two snapshots".into(),
        ));
    }
    let tail = &positions[positions.len() / 2..];
    let tail = if tail.len() < 2 {
        &positions[positions.len() - 2..]
    } else {
        tail
    };
    Ok(ShockTrack {
        speed: least_squares_slope(tail),
        positions,
    })
}

fn least_squares_slope<T: Real>(pts: &[(T, T)]) -> T {
    let n = T::lit(pts.len() as f64);
    let (st, sx) = pts
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(t, x)| (a + t, b + x));
    let (mt, mx) = (st / n, sx / n);
    let (num, den) = pts.iter().fold((T::zero(), T::zero()), |(num, den), &(t, x)| {
        (num + (t - mt) * (x - mx), den + (t - mt) * (t - mt))
    });
    num / den
}

/// `int |coarse - reference| dx` for piecewise-constant data, the reference
/// grid refining the coarse one by an integer factor.
pub fn l1_error<T: Real>(coarse: (&StaggeredGrid<T>, &[T]), reference: (&StaggeredGrid<T>, &[T])) -> Result<T> {
    let (cg, cw) = coarse;
    let (rg, rw) = reference;
    if cw.len() != cg.cells() {
        return Err(Error::LengthMismatch {
            expected: cg.cells(),
            found: cw.len(),
        });
    }
    if rw.len() != rg.cells() {
        return Err(Error::LengthMismatch {
            expected: rg.cells(),
            found: rw.len(),
        });
    }
    let tol = T::tolerance(1e-12) * (T::one() + cg.x_min().abs().max(cg.x_max().abs()));
    if (cg.x_min() - rg.x_min()).abs() > tol || (cg.x_max() - rg.x_max()).abs() > tol {
        return Err(Error::IncompatibleGrids("domains differ".into()));
    }
    if rg.cells() % cg.cells() != 0 {
        return Err(Error::IncompatibleGrids(format!(
            "{} cells do not refine {} cells",
            rg.cells(),
            cg.cells()
        )));
    }
    let ratio = rg.cells() / cg.cells();
    let dx = rg.dx();
    Ok(cw.iter().enumerate().fold(T::zero(), |acc, (j, &c)| {
        rw[j * ratio..(j + 1) * ratio]
            .iter()
            .fold(acc, |a, &r| a + (c - r).abs() * dx)
    }))
}

/// Outcome of the two-sided Jensen estimate for an equal-weight discrete measure.
#[derive(Clone, Copy, Debug)]
pub struct JensenCheck<T> {
    pub lower_ok: bool,
    pub upper_ok: bool,
    /// `min U''/2 * variance`
    pub lower: T,
    /// `mean U(w) - U(mean w)`
    pub gap: T,
    /// `max U''/2 * variance`
    pub upper: T,
}

/// Checks `min U''/2 Var <= mean U - U(mean) <= max U''/2 Var` with the
/// extrema of `U''` taken over `[min w, max w]`.
pub fn jensen_bounds_check<T: Real>(values: &[T], entropy: &EntropyPair<T>) -> JensenCheck<T> {
    let n = T::lit(values.len().max(1) as f64);
    let mean = values.iter().fold(T::zero(), |a, &x| a + x) / n;
    let var = values.iter().fold(T::zero(), |a, &x| a + (x - mean) * (x - mean)) / n;
    let mean_u = values.iter().fold(T::zero(), |a, &x| a + entropy.value(x)) / n;
    let gap = mean_u - entropy.value(mean);
    let (lo, hi) = values
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(a, b), &x| (a.min(x), b.max(x)));
    let (lo, hi) = if values.is_empty() {
        (T::zero(), T::zero())
    } else {
        (lo, hi)
    };
    let (s_min, s_max) = entropy.second_bounds(lo, hi);
    let lower = T::half() * s_min * var;
    let upper = if var == T::zero() {
        T::zero()
    } else {
        T::half() * s_max * var
    };
    let scale = T::one() + mean_u.abs() + entropy.value(mean).abs();
    let slack = T::tolerance(1e-12) * scale;
    JensenCheck {
        lower_ok: lower <= gap + slack,
        upper_ok: gap <= upper + slack,
        lower,
        gap,
        upper,
    }
}

/// Median and standard deviation of `w` over cells with `lo <= |x_j| <= hi`.
pub fn plateau<T: Real>(centers: &[T], w: &[T], lo: T, hi: T) -> Option<(T, T)> {
    let mut vals: Vec<T> = centers
        .iter()
        .zip(w)
        .filter(|(x, _)| x.abs() >= lo && x.abs() <= hi)
        .map(|(_, &w)| w)
        .collect();
    if vals.is_empty() {
        return None;
    }
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = vals.len();
    let median = if n % 2 == 1 {
        vals[n / 2]
    } else {
        T::half() * (vals[n / 2 - 1] + vals[n / 2])
    };
    let nt = T::lit(n as f64);
    let mean = vals.iter().fold(T::zero(), |a, &x| a + x) / nt;
    let var = vals.iter().fold(T::zero(), |a, &x| a + (x - mean) * (x - mean)) / nt;
    Some((median, var.sqrt()))
}

/// One line of the diagnostics CSV.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiagnosticsRow<T> {
    pub n: usize,
    pub t: T,
    pub dt: T,
    pub u_min: T,
    pub u_max: T,
    pub max_principle_violation: T,
    pub tv_w: T,
    pub weak_bv_increment: T,
    pub weak_bv_cumulative: T,
    pub max_entropy_residual: T,
}

/// Per-run diagnostics history.
#[derive(Clone, Debug, Default)]
pub struct DiagnosticsRecord<T> {
    pub rows: Vec<DiagnosticsRow<T>>,
    /// `(t, max_j |u_j - u*|)` when a well-balanced target is set.
    pub well_balanced_trace: Vec<(T, T)>,
}

/// Worst value of every inline invariant over a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InvariantWorst<T> {
    pub max_principle: T,
    pub convex_combination: T,
    pub subcell_max_principle: T,
    pub entropy_residual: T,
    pub tvd_increase: T,
    pub sup_norm_excess: T,
    pub well_balanced: T,
    pub weak_bv_decrease: T,
}

impl<T: Real> Default for InvariantWorst<T> {
    fn default() -> Self {
        Self {
            max_principle: T::zero(),
            convex_combination: T::zero(),
            subcell_max_principle: T::zero(),
            entropy_residual: T::neg_infinity(),
            tvd_increase: T::neg_infinity(),
            sup_norm_excess: T::neg_infinity(),
            well_balanced: T::zero(),
            weak_bv_decrease: T::zero(),
        }
    }
}

/// A violated invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantFailure {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
}

impl<T: Real> InvariantWorst<T> {
    /// Compares against the pinned tolerances; only checks that were enabled
    /// in `opts` are reported.
    pub fn failures(&self, opts: &DiagnosticsOptions<T>) -> Vec<InvariantFailure> {
        let mut out = Vec::new();
        let mut check = |name, worst: T, tol: f64| {
            if worst > T::lit(tol) || worst.is_nan() {
                out.push(InvariantFailure {
                    name,
                    worst: f(worst),
                    tolerance: tol,
                });
            }
        };
        check("max_principle", self.max_principle, MAX_PRINCIPLE_TOL);
        check("convex_combination", self.convex_combination, CONVEX_COMBINATION_TOL);
        check(
            "subcell_max_principle",
            self.subcell_max_principle,
            SUBCELL_MAX_PRINCIPLE_TOL,
        );
        check("sup_norm", self.sup_norm_excess, SUP_NORM_TOL);
        check("weak_bv_monotone", self.weak_bv_decrease, 0.0);
        if !opts.entropy_levels.is_empty() {
            check("entropy_residual", self.entropy_residual, ENTROPY_RESIDUAL_TOL);
        }
        if opts.check_tvd {
            check("tvd", self.tvd_increase, TVD_TOL);
        }
        if opts.well_balanced_target.is_some() {
            check("well_balanced", self.well_balanced, WELL_BALANCED_TOL);
        }
        out
    }
}

/// What the recorder evaluates each step.
#[derive(Clone, Debug)]
pub struct DiagnosticsOptions<T> {
    pub selector: NumericalFlux,
    /// Kruzhkov levels for the entropy residuals; empty disables them.
    pub entropy_levels: Vec<T>,
    /// Cells summed in the weak BV increment.
    pub weak_bv_window: Range<usize>,
    pub check_tvd: bool,
    pub well_balanced_target: Option<T>,
    /// `||u_0||_inf` for the sup-norm bound.
    pub initial_sup: T,
}

impl<T: Real> DiagnosticsOptions<T> {
    /// Entropy residuals on 21 levels, weak BV over the whole grid, no TVD or
    /// well-balanced checks.
    pub fn standard(grid: &StaggeredGrid<T>, model: &CouplingModel<T>, state: &SchemeState<T>) -> Self {
        Self {
            selector: NumericalFlux::Godunov,
            entropy_levels: kruzhkov_levels(model, 21),
            weak_bv_window: 0..grid.cells(),
            check_tvd: false,
            well_balanced_target: None,
            initial_sup: state.u.iter().fold(T::zero(), |a, &x| a.max(x.abs())),
        }
    }
}

/// Step observer accumulating [`DiagnosticsRecord`] and [`InvariantWorst`].
pub struct DiagnosticsRecorder<'a, T> {
    model: &'a CouplingModel<T>,
    pub options: DiagnosticsOptions<T>,
    pub record: DiagnosticsRecord<T>,
    pub worst: InvariantWorst<T>,
    errors: Vec<String>,
}

impl<'a, T: Real> DiagnosticsRecorder<'a, T> {
    pub fn new(model: &'a CouplingModel<T>, options: DiagnosticsOptions<T>) -> Self {
        Self {
            model,
            options,
            record: DiagnosticsRecord {
                rows: Vec::new(),
                well_balanced_trace: Vec::new(),
            },
            worst: InvariantWorst::default(),
            errors: Vec::new(),
        }
    }

    /// Evaluation errors raised while observing (e.g. an inversion failure
    /// inside an entropy flux).
    pub fn errors(&self) -> &[String] {
        &self.errors
    }

    pub fn failures(&self) -> Vec<InvariantFailure> {
        let mut out = self.worst.failures(&self.options);
        if !self.errors.is_empty() {
            out.push(InvariantFailure {
                name: "evaluation_error",
                worst: self.errors.len() as f64,
                tolerance: 0.0,
            });
        }
        out
    }

    fn process(&mut self, ev: &StepEvent<'_, T>) -> Result<()> {
        let rep = ev.report;
        let w = &mut self.worst;

        let mp = max_principle_violation(&ev.prev.u, &ev.next.u)?;
        w.max_principle = w.max_principle.max(mp);

        for j in 0..rep.cells() {
            let (l, r) = rep.subcell_intermediates(j);
            w.convex_combination = w.convex_combination.max((rep.w_next[j] - T::half() * (l + r)).abs());
        }
        for face in &rep.interfaces {
            let lo = face.w_minus.min(face.w_plus);
            let hi = face.w_minus.max(face.w_plus);
            for x in [face.w_minus_next, face.w_plus_next] {
                w.subcell_max_principle = w.subcell_max_principle.max(lo - x).max(x - hi);
            }
        }

        let (u_min, u_max) = ev.next.min_max();
        w.sup_norm_excess = w
            .sup_norm_excess
            .max(u_min.abs().max(u_max.abs()) - self.options.initial_sup);

        let tv_prev = total_variation(&rep.w_bar);
        let tv_w = total_variation(&rep.w_next);
        if self.options.check_tvd {
            w.tvd_increase = w.tvd_increase.max(tv_w - tv_prev);
        }

        let mut max_entropy = T::neg_infinity();
        for &k in &self.options.entropy_levels {
            for (l, r) in entropy_residuals(rep, self.model, k, self.options.selector)? {
                max_entropy = max_entropy.max(l).max(r);
            }
        }
        if !self.options.entropy_levels.is_empty() {
            w.entropy_residual = w.entropy_residual.max(max_entropy);
        }

        let inc = weak_bv_increment(rep, self.options.weak_bv_window.clone());
        let prev_cum = self.record.rows.last().map_or(T::zero(), |r| r.weak_bv_cumulative);
        let cum = prev_cum + inc;
        w.weak_bv_decrease = w.weak_bv_decrease.max(prev_cum - cum);

        if let Some(target) = self.options.well_balanced_target {
            let res = well_balanced_residual(&ev.next.u, target);
            w.well_balanced = w.well_balanced.max(res);
            self.record.well_balanced_trace.push((ev.next.t, res));
        }

        self.record.rows.push(DiagnosticsRow {
            n: ev.next.n,
            t: ev.next.t,
            dt: rep.dt,
            u_min,
            u_max,
            max_principle_violation: mp,
            tv_w,
            weak_bv_increment: inc,
            weak_bv_cumulative: cum,
            max_entropy_residual: if self.options.entropy_levels.is_empty() {
                T::zero()
            } else {
                max_entropy
            },
        });
        Ok(())
    }
}

impl<'a, T: Real> StepObserver<T> for DiagnosticsRecorder<'a, T> {
    fn observe(&mut self, event: &StepEvent<'_, T>) {
        if let Err(e) = self.process(event) {
            self.errors.push(format!("step {}: {e}", event.next.n));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{FluxFunction, FluxPair, TransmissionPair};
    use crate::scheme::{InterfaceState, StepReport};

    #[test]
    fn max_principle_examples() {
        assert_eq!(
            max_principle_violation(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap(),
            0.0
        );
        assert_eq!(
            max_principle_violation(&[0.0, 0.0, 0.0], &[0.0, 0.1, 0.0]).unwrap(),
            0.1
        );
        assert!(max_principle_violation(&[0.0, 0.0], &[0.0]).is_err());
    }

    #[test]
    fn total_variation_examples() {
        assert_eq!(total_variation(&[2.0; 5]), 0.0);
        assert_eq!(total_variation(&[1.0, 1.0, 2.0, 0.0]), 3.0);
        assert_eq!(total_variation(&[-1.0, 0.0, 0.5, 2.0]), 3.0);
    }

    #[test]
    fn well_balanced_residual_examples() {
        assert_eq!(well_balanced_residual(&[0.3; 4], 0.3), 0.0);
        assert_eq!(well_balanced_residual(&[0.5, 0.5, 0.75, 0.5], 0.5), 0.25);
    }

    fn single_face(w_minus: f64, w_plus: f64, dt: f64, dx: f64) -> (CouplingModel<f64>, StepReport<f64>) {
        let m = CouplingModel::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::Burgers,
            },
            TransmissionPair::identity(),
            -1.0,
            1.0,
        )
        .unwrap();
        let fl = FrozenFlux::new(&m, 0.0);
        let g = NumericalFlux::Godunov.evaluate(w_minus, w_plus, &fl).unwrap();
        let (fm, fp) = (fl.value(w_minus).unwrap(), fl.value(w_plus).unwrap());
        let r = 2.0 * dt / dx;
        let (a, b) = crate::scheme::subcell_update(w_minus, w_plus, g, fm, fp, r);
        let face = InterfaceState {
            v: 0.0,
            w_minus,
            w_plus,
            g,
            f_minus: fm,
            f_plus: fp,
            w_minus_next: a,
            w_plus_next: b,
        };
        let rep = StepReport {
            dt,
            dx,
            interfaces: vec![face],
            w_bar: vec![],
            w_next: vec![],
        };
        (m, rep)
    }

    #[test]
    fn entropy_residuals_vanish_on_constant_state() {
        let (m, rep) = single_face(0.4, 0.4, 0.01, 0.1);
        for k in [-0.5, 0.0, 0.4, 0.9] {
            let (l, r) = entropy_residuals(&rep, &m, k, NumericalFlux::Godunov).unwrap()[0];
            assert!(l.abs() < 1e-15 && r.abs() < 1e-15);
        }
    }

    #[test]
    fn entropy_residuals_outside_range_reduce_to_conservation() {
        let (m, rep) = single_face(0.8, -0.3, 0.02, 0.1);
        for k in [-5.0, 5.0] {
            let (l, r) = entropy_residuals(&rep, &m, k, NumericalFlux::Godunov).unwrap()[0];
            assert!(l.abs() <= 1e-12 && r.abs() <= 1e-12, "{l} {r}");
        }
    }

    #[test]
    fn entropy_residuals_nonpositive_on_transonic_shock() {
        let (m, rep) = single_face(1.0, -1.0, 0.02, 0.1);
        for k in [-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5] {
            let (l, r) = entropy_residuals(&rep, &m, k, NumericalFlux::Godunov).unwrap()[0];
            assert!(l <= 1e-15 && r <= 1e-15, "k={k}: {l} {r}");
        }
    }

    #[test]
    fn weak_bv_single_cell() {
        let (_, mut rep) = single_face(1.0, -1.0, 0.02, 0.1);
        let mut second = rep.interfaces[0];
        second.w_minus_next = 0.25;
        rep.interfaces.push(second);
        rep.w_bar = vec![0.0];
        rep.w_next = vec![0.0];
        // cell 0: left intermediate = w_plus_next of face 0 = -1, right = 0.25
        assert!((weak_bv_increment(&rep, 0..1) - 1.25 * 1.25 * 0.1).abs() < 1e-15);
        assert_eq!(weak_bv_increment(&rep, 0..0), 0.0);
    }

    #[test]
    fn shock_track_synthetic() {
        let centers: Vec<f64> = (0..200).map(|i| -1.0 + (i as f64 + 0.5) * 0.01).collect();
        let ramps: Vec<(f64, Vec<f64>)> = (0..10)
            .map(|n| {
                let t = 0.05 * n as f64;
                let front = -0.2 + 0.7 * t;
                (
                    t,
                    centers
                        .iter()
                        .map(|&x| (-(x - front) * 20.0).clamp(-1.0, 1.0))
                        .collect(),
                )
            })
            .collect();
        let tr = shock_track(&centers, &ramps, 0.0, None).unwrap();
        assert!((tr.speed - 0.7).abs() < 1e-12);
        let step: Vec<f64> = centers.iter().map(|&x| if x < 0.1 { 1.0 } else { -2.0 }).collect();
        let still: Vec<(f64, Vec<f64>)> = (0..5).map(|n| (0.1 * n as f64, step.clone())).collect();
        assert!(shock_track(&centers, &still, -0.5, None).unwrap().speed.abs() < 1e-12);
        let flat = vec![(0.0, vec![1.0; 200]), (0.1, vec![1.0; 200])];
        assert!(matches!(
            shock_track(&centers, &flat, -0.5, None),
            Err(Error::NoCrossing { .. })
        ));
        let mut bumpy = vec![1.0; 200];
        bumpy[50] = -2.0;
        bumpy[150] = -2.0;
        assert!(matches!(
            shock_track(&centers, &[(0.0, bumpy.clone()), (0.1, bumpy)], -0.5, None),
            Err(Error::MultipleCrossings { .. })
        ));
    }

    #[test]
    fn l1_error_examples() {
        let c = StaggeredGrid::new(-1.0, 1.0, 4).unwrap();
        let r = StaggeredGrid::new(-1.0, 1.0, 12).unwrap();
        assert_eq!(l1_error((&c, &[0.3; 4]), (&r, &[0.3; 12])).unwrap(), 0.0);
        assert!((l1_error::<f64>((&c, &[0.3; 4]), (&r, &[0.1; 12])).unwrap() - 0.4).abs() < 1e-15);
        let bad = StaggeredGrid::new(-1.0, 1.0, 10).unwrap();
        assert!(matches!(
            l1_error((&c, &[0.3; 4]), (&bad, &[0.1; 10])),
            Err(Error::IncompatibleGrids(_))
        ));
    }

    #[test]
    fn jensen_examples() {
        let c = jensen_bounds_check::<f64>(&[0.7; 8], &EntropyPair::Exponential);
        assert!(c.lower_ok && c.upper_ok && c.gap.abs() < 1e-15);
        let vals = [0.1, -0.4, 0.9, 0.3];
        let q = jensen_bounds_check::<f64>(&vals, &EntropyPair::Quadratic);
        assert!(q.lower_ok && q.upper_ok);
        assert!((q.lower - q.gap).abs() < 1e-15 && (q.upper - q.gap).abs() < 1e-15);
    }

    #[test]
    fn window_cells_picks_interior() {
        let g = StaggeredGrid::new(-1.0, 1.0, 10).unwrap();
        assert_eq!(window_cells(&g, -0.5, 0.5), 3..7);
        assert_eq!(window_cells(&g, 2.0, 3.0).len(), 0);
    }

    #[test]
    fn plateau_statistics() {
        let centers = [-0.3, -0.1, 0.1, 0.3];
        let (med, sd) = plateau(&centers, &[5.0, 1.0, 1.0, 5.0], 0.05, 0.2).unwrap();
        assert_eq!((med, sd), (1.0, 0.0));
        assert!(plateau(&centers, &[0.0; 4], 0.5, 0.6).is_none());
    }
}
