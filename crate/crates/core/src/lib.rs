//! Finite volume solver for scalar conservation laws coupled across a thin
//! interface through transmission maps and a smooth color function.
//!
//! The scheme works on the coupled variable `w = C0(u, v)` over a staggered
//! grid that carries cell averages of the color `v` on the cell faces. States
//! in equilibrium with the color are preserved exactly.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! `f64`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod flux;
pub mod grid;
pub mod quadrature;
pub mod scalar;
pub mod scheme;
pub mod solve;
pub mod special;

pub use coupling::{CouplingModel, EntropyPair, FluxFunction, FluxPair, Shape, TransmissionMap, TransmissionPair};
pub use diagnostics::{DiagnosticsOptions, DiagnosticsRecord, DiagnosticsRecorder, DiagnosticsRow};
pub use error::{Error, Result};
pub use flux::{FrozenFlux, NumericalFlux, ScalarFlux};
pub use grid::{ColorFunction, InitialData, StaggeredGrid};
pub use scalar::Real;
pub use scheme::{run, step, SchemeState, StepEvent, StepObserver, StepReport};

pub type Model = CouplingModel<f64>;
pub type Grid = StaggeredGrid<f64>;
pub type Color = ColorFunction<f64>;
pub type Initial = InitialData<f64>;
pub type State = SchemeState<f64>;
pub type Report = StepReport<f64>;
pub type Flux = FluxFunction<f64>;
pub type Transmission = TransmissionMap<f64>;
pub type Entropy = EntropyPair<f64>;
