#![allow(dead_code)]

use couplefv::{CouplingModel, FluxFunction, FluxPair, TransmissionMap, TransmissionPair};

/// Exact Riemann flux for `u^2 / 2`, by wave-pattern case analysis.
pub fn burgers_riemann_flux(a: f64, b: f64) -> f64 {
    if a <= b {
        if a >= 0.0 {
            0.5 * a * a
        } else if b <= 0.0 {
            0.5 * b * b
        } else {
            0.0
        }
    } else if a + b > 0.0 {
        0.5 * a * a
    } else {
        0.5 * b * b
    }
}

/// Plain first-order Godunov step for Burgers with zero-gradient ghosts.
pub fn burgers_godunov_step(u: &[f64], dt: f64, dx: f64) -> Vec<f64> {
    let n = u.len();
    let at = |i: isize| u[i.clamp(0, n as isize - 1) as usize];
    (0..n as isize)
        .map(|j| {
            let fl = burgers_riemann_flux(at(j - 1), at(j));
            let fr = burgers_riemann_flux(at(j), at(j + 1));
            at(j) - dt / dx * (fr - fl)
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

pub fn map(slope: Option<f64>) -> TransmissionMap<f64> {
    match slope {
        None => TransmissionMap::Identity,
        Some(c) => TransmissionMap::Linear(c),
    }
}

pub fn resonant_model(left: Option<f64>, right: Option<f64>, m: f64, big_m: f64) -> CouplingModel<f64> {
    CouplingModel::new(
        FluxPair {
            left: FluxFunction::Burgers,
            right: FluxFunction::BurgersShifted,
        },
        TransmissionPair {
            left: map(left),
            right: map(right),
        },
        m,
        big_m,
    )
    .unwrap()
}

pub fn burgers_model(m: f64, big_m: f64) -> CouplingModel<f64> {
    CouplingModel::new(
        FluxPair {
            left: FluxFunction::Burgers,
            right: FluxFunction::Burgers,
        },
        TransmissionPair::identity(),
        m,
        big_m,
    )
    .unwrap()
}
