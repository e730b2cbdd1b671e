//! Configuration, presets and the experiment driver behind the CLI.

mod config;
mod preset;
mod runner;

pub use config::{parse_config, ColorKind, ExperimentConfig, InitialKind, InitialVariable, CONFIG_KEYS};
pub use preset::{preset, PRESETS};
pub use runner::{
    cell_w, convergence_study, convergence_table, diagnostics_csv, final_w, run_experiment, setup, simulate,
    write_outputs, ConvergenceRow, RunOutcome, Setup, Snapshot, SHOCK_SAMPLES,
};
