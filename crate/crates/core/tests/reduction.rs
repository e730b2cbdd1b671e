mod common;

use common::{burgers_godunov_step, burgers_model, max_abs_diff};
use couplefv::grid::{cell_average_initial, ColorFunction, InitialData, StaggeredGrid};
use couplefv::{run, NumericalFlux, SchemeState, StepEvent};

fn compare(left: f64, right: f64, cells: usize) -> (f64, f64) {
    let grid = StaggeredGrid::new(-1.0, 1.0, cells)
        .unwrap()
        .with_color(&ColorFunction::Constant(0.0))
        .unwrap();
    let model = burgers_model(left.min(right), left.max(right));
    let u0 = cell_average_initial(&grid, &InitialData::Riemann { left, right, jump: 0.0 });
    let mut oracle = u0.clone();
    let mut per_step = 0.0_f64;
    let mut dts = Vec::new();
    let mut obs = |ev: &StepEvent<'_, f64>| {
        let expected = burgers_godunov_step(&ev.prev.u, ev.report.dt, ev.report.dx);
        per_step = per_step.max(max_abs_diff(&expected, &ev.next.u));
        dts.push(ev.report.dt);
    };
    let end = run(
        SchemeState::new(u0),
        &grid,
        &model,
        NumericalFlux::Godunov,
        0.4,
        0.45,
        &mut [&mut obs],
    )
    .unwrap();
    for dt in dts {
        oracle = burgers_godunov_step(&oracle, dt, grid.dx());
    }
    (per_step, max_abs_diff(&oracle, &end.u))
}

#[test]
fn decoupled_scheme_is_plain_godunov() {
    for &(l, r) in &[
        (1.0, -0.5),
        (-1.0, 1.0),
        (-0.5, 1.5),
        (1.0, -2.0),
        (0.3, 0.3),
        (2.0, 1.0),
    ] {
        let (step, end) = compare(l, r, 200);
        assert!(step <= 1e-14, "({l}, {r}): per-step {step:e}");
        assert!(end <= 1e-12, "({l}, {r}): final {end:e}");
    }
}

#[test]
fn shock_moves_at_rankine_hugoniot_speed() {
    // (1, -0.5): s = 0.25, front at x = 0.1 at t = 0.4
    let grid = StaggeredGrid::new(-1.0, 1.0, 400)
        .unwrap()
        .with_color(&ColorFunction::Constant(0.0))
        .unwrap();
    let model = burgers_model(-0.5, 1.0);
    let u0 = cell_average_initial(
        &grid,
        &InitialData::Riemann {
            left: 1.0,
            right: -0.5,
            jump: 0.0,
        },
    );
    let end = run(
        SchemeState::new(u0),
        &grid,
        &model,
        NumericalFlux::Godunov,
        0.4,
        0.45,
        &mut [],
    )
    .unwrap();
    let mass: f64 = end.u.iter().sum::<f64>() * grid.dx();
    // initial mass 1 - 0.5, boundary fluxes f(1) in and f(-0.5) out; equals
    // 1.1 - 0.45 from the exact front position
    let expected: f64 = 0.5 + 0.4 * (0.5 - 0.125);
    assert!((expected - (1.1 - 0.45)).abs() < 1e-15);
    assert!((mass - expected).abs() < 1e-12, "{mass} vs {expected}");
}
