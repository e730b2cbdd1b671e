//! The well-balanced time stepper.
//!
//! Each step reconstructs two subcell states per cell at frozen `u`
//! (`w = C0(u_j, v)` on either half), evolves the cell mean of `w` with
//! monotone fluxes at the faces where `v` is locally constant, and recovers
//! `u` by inverting the averaged map. Constant `u` is preserved exactly for
//! any color profile because the face fluxes reduce to `g(a, a) - f(a) = 0`.

use crate::coupling::CouplingModel;
use crate::error::{f, Error, Result};
use crate::flux::{FrozenFlux, NumericalFlux, ScalarFlux};
use crate::grid::{apply_neumann_ghosts, StaggeredGrid};
use crate::Real;

/// Points of the `u` sampling used to bound wave speeds.
pub const SPEED_SAMPLES: usize = 401;

/// Speeds below this make the time step unbounded.
pub const DEGENERATE_SPEED: f64 = 1e-14;

/// Largest admissible CFL number.
pub const MAX_CFL: f64 = 0.5;

pub const MAX_STEPS: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeState<T> {
    /// Cell values `u^n_j`.
    pub u: Vec<T>,
    pub t: T,
    pub n: usize,
}

impl<T: Real> SchemeState<T> {
    pub fn new(u: Vec<T>) -> Self {
        Self { u, t: T::zero(), n: 0 }
    }

    pub fn min_max(&self) -> (T, T) {
        self.u
            .iter()
            .fold((T::infinity(), T::neg_infinity()), |(a, b), &x| (a.min(x), b.max(x)))
    }
}

/// Everything computed at one face `x_{j+1/2}` during a step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InterfaceState<T> {
    pub v: T,
    /// Left trace `w^n_{j+1/2,-} = C0(u_j, v)`.
    pub w_minus: T,
    /// Right trace `w^n_{j+1/2,+} = C0(u_{j+1}, v)`.
    pub w_plus: T,
    pub g: T,
    pub f_minus: T,
    pub f_plus: T,
    /// Subcell intermediate `w^{n+1,-}_{j+1/2,-}`.
    pub w_minus_next: T,
    /// Subcell intermediate `w^{n+1,-}_{j+1/2,+}`.
    pub w_plus_next: T,
}

/// Per-step data consumed by the diagnostics.
///
/// `interfaces[i]` is the face between cells `i - 1` and `i` (ghosts at the
/// two ends), so cell `j` is bounded by `interfaces[j]` and `interfaces[j + 1]`.
#[derive(Clone, Debug)]
pub struct StepReport<T> {
    pub dt: T,
    pub dx: T,
    pub interfaces: Vec<InterfaceState<T>>,
    /// `w^n_j`, mean of the two reconstructed subcell states.
    pub w_bar: Vec<T>,
    /// `w^{n+1}_j` from the flux-difference update.
    pub w_next: Vec<T>,
}

impl<T: Real> StepReport<T> {
    pub fn cells(&self) -> usize {
        self.w_bar.len()
    }

    /// `(w^n_{j-1/2,+}, w^n_{j+1/2,-})`.
    pub fn reconstruction(&self, j: usize) -> (T, T) {
        (self.interfaces[j].w_plus, self.interfaces[j + 1].w_minus)
    }

    /// `(w^{n+1,-}_{j-1/2,+}, w^{n+1,-}_{j+1/2,-})`.
    pub fn subcell_intermediates(&self, j: usize) -> (T, T) {
        (self.interfaces[j].w_plus_next, self.interfaces[j + 1].w_minus_next)
    }

    /// `2 dt / dx`.
    pub fn subcell_ratio(&self) -> T {
        T::two() * self.dt / self.dx
    }
}

/// Subcell states of one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reconstruction<T> {
    pub w_left_plus: T,
    pub w_right_minus: T,
    pub w_bar: T,
}

pub fn reconstruct<T: Real>(u_j: T, v_left: T, v_right: T, model: &CouplingModel<T>) -> Reconstruction<T> {
    let w_left_plus = model.c0(u_j, v_left);
    let w_right_minus = model.c0(u_j, v_right);
    Reconstruction {
        w_left_plus,
        w_right_minus,
        w_bar: T::half() * (w_left_plus + w_right_minus),
    }
}

/// `max_j sup_{u in [m, M]} |df/dw(C0(u, v_{j+1/2}), v_{j+1/2})|`, sampled on
/// [`SPEED_SAMPLES`] points plus the model's breakpoints.
pub fn max_wave_speed<T: Real>(grid: &StaggeredGrid<T>, model: &CouplingModel<T>) -> T {
    let (m, big_m) = model.range();
    let mut us: Vec<T> = (0..SPEED_SAMPLES)
        .map(|i| m + (big_m - m) * T::lit(i as f64 / (SPEED_SAMPLES - 1) as f64))
        .collect();
    us.extend(model.u_breakpoints().into_iter().filter(|p| *p > m && *p < big_m));
    let mut vs = grid.v().to_vec();
    vs.sort_by(|a, b| a.partial_cmp(b).expect("finite color"));
    vs.dedup();
    let mut s = T::zero();
    for &v in &vs {
        for &u in &us {
            s = s.max(model.eigenvalue(u, v).abs());
        }
    }
    s
}

fn check_cfl_number<T: Real>(cfl_number: T) -> Result<()> {
    if !(cfl_number > T::zero() && cfl_number <= T::lit(MAX_CFL)) {
        return Err(Error::Validation {
            field: "cfl_number".into(),
            message: format!("must lie in (0, 0.5], got {cfl_number}"),
        });
    }
    Ok(())
}

/// CFL-limited time step `cfl_number * dx / max speed`.
pub fn cfl_dt<T: Real>(
    _state: &SchemeState<T>,
    grid: &StaggeredGrid<T>,
    model: &CouplingModel<T>,
    cfl_number: T,
) -> Result<T> {
    check_cfl_number(cfl_number)?;
    let speed = max_wave_speed(grid, model);
    if speed < T::lit(DEGENERATE_SPEED) {
        return Err(Error::DegenerateSpeed { speed: f(speed) });
    }
    Ok(cfl_number * grid.dx() / speed)
}

/// Subcell intermediates at one face:
/// `w- - r (g - f(w-))` and `w+ - r (f(w+) - g)` with `r = 2 dt / dx`.
#[inline]
pub fn subcell_update<T: Real>(w_minus: T, w_plus: T, g: T, f_minus: T, f_plus: T, ratio: T) -> (T, T) {
    (w_minus - ratio * (g - f_minus), w_plus - ratio * (f_plus - g))
}

/// Solves `(C0(u, v_left) + C0(u, v_right)) / 2 = w_bar`.
///
/// `C0` is affine in `v`, so the averaged map is `C0(., (v_left + v_right) / 2)`.
pub fn invert_cell_average<T: Real>(w_bar: T, v_left: T, v_right: T, model: &CouplingModel<T>) -> Result<T> {
    model.u_of_w(w_bar, T::half() * (v_left + v_right))
}

fn face_state<T: Real>(
    u_left: T,
    u_right: T,
    v: T,
    model: &CouplingModel<T>,
    selector: NumericalFlux,
    ratio: T,
) -> Result<InterfaceState<T>> {
    let flux = FrozenFlux::new(model, v);
    let w_minus = model.c0(u_left, v);
    let w_plus = model.c0(u_right, v);
    let f_minus = flux.value(w_minus)?;
    let f_plus = flux.value(w_plus)?;
    let g = selector.evaluate(w_minus, w_plus, &flux)?;
    let (w_minus_next, w_plus_next) = subcell_update(w_minus, w_plus, g, f_minus, f_plus, ratio);
    Ok(InterfaceState {
        v,
        w_minus,
        w_plus,
        g,
        f_minus,
        f_plus,
        w_minus_next,
        w_plus_next,
    })
}

/// Advances `state` by `dt`.
pub fn step<T: Real>(
    state: &SchemeState<T>,
    grid: &StaggeredGrid<T>,
    model: &CouplingModel<T>,
    selector: NumericalFlux,
    dt: T,
) -> Result<(SchemeState<T>, StepReport<T>)> {
    let cells = grid.cells();
    if state.u.len() != cells {
        return Err(Error::LengthMismatch {
            expected: cells,
            found: state.u.len(),
        });
    }
    if !(dt > T::zero()) {
        return Err(Error::InvalidInput(format!("time step must be positive, got {dt}")));
    }
    let dx = grid.dx();
    let ratio = T::two() * dt / dx;
    let lambda = dt / dx;
    let u_ext = apply_neumann_ghosts(&state.u)?;
    let v = grid.v();

    let interfaces = (0..=cells)
        .map(|i| face_state(u_ext[i], u_ext[i + 1], v[i], model, selector, ratio))
        .collect::<Result<Vec<_>>>()?;

    let mut w_bar = Vec::with_capacity(cells);
    let mut w_next = Vec::with_capacity(cells);
    let mut u_next = Vec::with_capacity(cells);
    for j in 0..cells {
        let left = &interfaces[j];
        let right = &interfaces[j + 1];
        let wb = T::half() * (left.w_plus + right.w_minus);
        let g_right = right.g - right.f_minus;
        let g_left = left.g - left.f_plus;
        let wn = wb - lambda * (g_right - g_left);
        let un = invert_cell_average(wn, v[j], v[j + 1], model)?;
        if !un.is_finite() {
            return Err(Error::NonFinite("cell update"));
        }
        w_bar.push(wb);
        w_next.push(wn);
        u_next.push(un);
    }

    let next = SchemeState {
        u: u_next,
        t: state.t + dt,
        n: state.n + 1,
    };
    Ok((
        next,
        StepReport {
            dt,
            dx,
            interfaces,
            w_bar,
            w_next,
        },
    ))
}

/// One completed step as seen by observers.
pub struct StepEvent<'a, T> {
    pub prev: &'a SchemeState<T>,
    pub next: &'a SchemeState<T>,
    pub report: &'a StepReport<T>,
}

pub trait StepObserver<T> {
    fn observe(&mut self, event: &StepEvent<'_, T>);
}

impl<T, F> StepObserver<T> for F
where
    F: FnMut(&StepEvent<'_, T>),
{
    fn observe(&mut self, event: &StepEvent<'_, T>) {
        self(event)
    }
}

/// Time loop up to `t_end`, hit exactly by shortening the final step.
///
/// The wave-speed bound depends only on the color and the working range,
/// so it is evaluated once per call.
pub fn run<T: Real>(
    state: SchemeState<T>,
    grid: &StaggeredGrid<T>,
    model: &CouplingModel<T>,
    selector: NumericalFlux,
    t_end: T,
    cfl_number: T,
    observers: &mut [&mut dyn StepObserver<T>],
) -> Result<SchemeState<T>> {
    check_cfl_number(cfl_number)?;
    if t_end < state.t {
        return Err(Error::InvalidInput(format!(
            "end time {t_end} precedes current time {}",
            state.t
        )));
    }
    if t_end == state.t {
        return Ok(state);
    }
    let speed = max_wave_speed(grid, model);
    let dt_cfl = if speed < T::lit(DEGENERATE_SPEED) {
        t_end - state.t
    } else {
        cfl_number * grid.dx() / speed
    };

    let mut state = state;
    let mut taken = 0usize;
    while state.t < t_end {
        if taken >= MAX_STEPS {
            return Err(Error::StepCapExceeded(MAX_STEPS));
        }
        let remaining = t_end - state.t;
        let last = remaining <= dt_cfl * (T::one() + T::lit(1e-12));
        let dt = if last { remaining } else { dt_cfl };
        let (mut next, report) = step(&state, grid, model, selector, dt)?;
        if last {
            next.t = t_end;
        }
        for obs in observers.iter_mut() {
            obs.observe(&StepEvent {
                prev: &state,
                next: &next,
                report: &report,
            });
        }
        state = next;
        taken += 1;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::{FluxFunction, FluxPair, TransmissionMap, TransmissionPair};
    use crate::grid::{cell_average_initial, ColorFunction, InitialData};

    fn model(right: TransmissionMap<f64>, m: f64, big_m: f64) -> CouplingModel<f64> {
        CouplingModel::new(
            FluxPair {
                left: FluxFunction::Burgers,
                right: FluxFunction::BurgersShifted,
            },
            TransmissionPair {
                left: TransmissionMap::Identity,
                right,
            },
            m,
            big_m,
        )
        .unwrap()
    }

    #[test]
    fn reconstruct_examples() {
        let id = model(TransmissionMap::Identity, -1.0, 1.5);
        let r = reconstruct(0.4, 0.3, 0.3, &id);
        assert_eq!((r.w_left_plus, r.w_right_minus, r.w_bar), (0.4, 0.4, 0.4));
        let r = reconstruct(0.4, 0.1, 0.9, &id);
        assert_eq!((r.w_left_plus, r.w_right_minus, r.w_bar), (0.4, 0.4, 0.4));
        let dbl = model(TransmissionMap::Linear(2.0), -1.0, 1.5);
        let r = reconstruct(1.0, 0.0, 1.0, &dbl);
        assert_eq!((r.w_left_plus, r.w_right_minus, r.w_bar), (1.0, 0.5, 0.75));
    }

    #[test]
    fn cfl_examples() {
        let m = model(TransmissionMap::Identity, -1.0, 1.5);
        let state = SchemeState::new(vec![0.0; 10]);
        let g1 = StaggeredGrid::new(-1.0, 1.0, 10)
            .unwrap()
            .with_color(&ColorFunction::Constant(1.0))
            .unwrap();
        let dt = cfl_dt(&state, &g1, &m, 0.5).unwrap();
        assert!((dt - 0.2 * g1.dx()).abs() < 1e-15);
        let g0 = StaggeredGrid::new(-1.0, 1.0, 10).unwrap();
        let dt0 = cfl_dt(&state, &g0, &m, 0.5).unwrap();
        assert!((dt0 - g0.dx() / 3.0).abs() < 1e-15);
        assert!((cfl_dt(&state, &g0, &m, 0.25).unwrap() - 0.5 * dt0).abs() < 1e-16);
        assert!(cfl_dt(&state, &g0, &m, 0.6).is_err());
    }

    #[test]
    fn degenerate_speed() {
        let m = model(TransmissionMap::Identity, 0.0, 0.0);
        let g = StaggeredGrid::new(-1.0, 1.0, 4).unwrap();
        let state = SchemeState::new(vec![0.0; 4]);
        assert!(matches!(
            cfl_dt(&state, &g, &m, 0.5),
            Err(Error::DegenerateSpeed { .. })
        ));
        // run caps the step by the remaining time instead
        let out = run(state.clone(), &g, &m, NumericalFlux::Godunov, 0.3, 0.5, &mut []).unwrap();
        assert_eq!(out.u, state.u);
        assert_eq!(out.t, 0.3);
    }

    #[test]
    fn subcell_update_examples() {
        let m = model(TransmissionMap::Identity, -3.0, 3.0);
        let fl = FrozenFlux::new(&m, 0.0);
        let cases = [
            ((0.7, 0.7), (0.7, 0.7)),
            ((1.0, -1.0), (1.0, -1.0)),
            ((2.0, 0.0), (2.0, 0.8)),
        ];
        for ((a, b), want) in cases {
            let g = NumericalFlux::Godunov.evaluate(a, b, &fl).unwrap();
            let got = subcell_update(a, b, g, fl.value(a).unwrap(), fl.value(b).unwrap(), 0.4);
            assert!(
                (got.0 - want.0).abs() < 1e-15 && (got.1 - want.1).abs() < 1e-15,
                "{got:?}"
            );
        }
    }

    #[test]
    fn invert_cell_average_examples() {
        let dbl = model(TransmissionMap::Linear(2.0), -1.0, 1.5);
        assert!((invert_cell_average(0.75, 0.0, 1.0, &dbl).unwrap() - 1.0).abs() < 1e-15);
        let u = invert_cell_average(0.3, 0.4, 0.4, &dbl).unwrap();
        assert_eq!(u, dbl.u_of_w(0.3, 0.4).unwrap());
        let id = model(TransmissionMap::Identity, -1.0, 1.5);
        assert_eq!(invert_cell_average(0.123, 0.2, 0.7, &id).unwrap(), 0.123);
    }

    #[test]
    fn constant_state_is_preserved() {
        let m = model(TransmissionMap::Linear(2.0), 0.3, 0.3);
        let g = StaggeredGrid::new(-1.0, 1.0, 50)
            .unwrap()
            .with_color(&ColorFunction::ErfProfile { eta: 0.05, zeta: 0.2 })
            .unwrap();
        let mut s = SchemeState::new(vec![0.3; 50]);
        let dt = cfl_dt(&s, &g, &m, 0.45).unwrap();
        for _ in 0..50 {
            let (next, _) = step(&s, &g, &m, NumericalFlux::Godunov, dt).unwrap();
            s = next;
        }
        assert!(s.u.iter().all(|&u| (u - 0.3).abs() <= 1e-13));
    }

    #[test]
    fn run_hits_end_time_and_handles_empty_interval() {
        let g = StaggeredGrid::new(-1.0, 1.0, 40)
            .unwrap()
            .with_color(&ColorFunction::ErfProfile { eta: 0.05, zeta: 0.0 })
            .unwrap();
        let u0 = cell_average_initial(
            &g,
            &InitialData::Riemann {
                left: -1.0,
                right: 1.5,
                jump: 0.0,
            },
        );
        let m = model(TransmissionMap::Identity, -1.0, 1.5);
        let s0 = SchemeState::new(u0);
        let same = run(s0.clone(), &g, &m, NumericalFlux::Godunov, 0.0, 0.45, &mut []).unwrap();
        assert_eq!(same, s0);
        let mut count = 0;
        let mut obs = |_: &StepEvent<'_, f64>| count += 1;
        let out = run(s0, &g, &m, NumericalFlux::Godunov, 0.1, 0.45, &mut [&mut obs]).unwrap();
        assert_eq!(out.t, 0.1);
        assert_eq!(out.n, count);
        assert!(count > 0);
    }

    #[test]
    fn convex_combination_identity_holds() {
        let g = StaggeredGrid::new(-1.0, 1.0, 30)
            .unwrap()
            .with_color(&ColorFunction::ErfProfile { eta: 0.1, zeta: -0.3 })
            .unwrap();
        let u0 = cell_average_initial(
            &g,
            &InitialData::Riemann {
                left: 1.0,
                right: -0.8,
                jump: -0.1,
            },
        );
        let m = model(TransmissionMap::Linear(1.5), -0.8, 1.0);
        let s = SchemeState::new(u0);
        let dt = cfl_dt(&s, &g, &m, 0.5).unwrap();
        for sel in NumericalFlux::ALL {
            let (_, rep) = step(&s, &g, &m, sel, dt).unwrap();
            for j in 0..rep.cells() {
                let (l, r) = rep.subcell_intermediates(j);
                assert!((rep.w_next[j] - 0.5 * (l + r)).abs() <= 1e-13);
            }
        }
    }
}
