use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use crate::coupling::CouplingModel;
use crate::diagnostics::{
    kruzhkov_levels, l1_error, plateau, shock_track, window_cells, DiagnosticsOptions, DiagnosticsRecord,
    DiagnosticsRecorder, InvariantFailure, InvariantWorst, ShockTrack,
};
use crate::error::{Error, Result};
use crate::grid::{cell_average_initial, StaggeredGrid};
use crate::scheme::{reconstruct, run, SchemeState, StepEvent, StepObserver};

use super::config::{ColorKind, ExperimentConfig, InitialKind};

/// Samples taken for shock tracking, evenly spaced in time.
pub const SHOCK_SAMPLES: usize = 40;

/// Model, grid and initial state of a configuration.
pub struct Setup {
    pub model: CouplingModel<f64>,
    pub grid: StaggeredGrid<f64>,
    pub state: SchemeState<f64>,
}

pub fn setup(config: &ExperimentConfig) -> Result<Setup> {
    config.validate()?;
    let model = config.model()?;
    let grid = StaggeredGrid::new(config.x_min, config.x_max, config.n)?.with_color(&config.color_function()?)?;
    let u = cell_average_initial(&grid, &config.initial_data()?);
    Ok(Setup {
        model,
        grid,
        state: SchemeState::new(u),
    })
}

/// `w_j = (C0(u_j, v_j) + C0(u_j, v_{j+1})) / 2`.
pub fn cell_w(grid: &StaggeredGrid<f64>, model: &CouplingModel<f64>, u: &[f64]) -> Vec<f64> {
    u.iter()
        .enumerate()
        .map(|(j, &uj)| {
            let (vl, vr) = grid.cell_colors(j);
            reconstruct(uj, vl, vr, model).w_bar
        })
        .collect()
}

/// One snapshot file worth of data.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
    /// Color averaged over the cell.
    pub v: Vec<f64>,
}

impl Snapshot {
    fn capture(grid: &StaggeredGrid<f64>, model: &CouplingModel<f64>, state: &SchemeState<f64>) -> Self {
        let v = (0..grid.cells())
            .map(|j| {
                let (a, b) = grid.cell_colors(j);
                0.5 * (a + b)
            })
            .collect();
        Self {
            t: state.t,
            x: grid.centers(),
            u: state.u.clone(),
            w: cell_w(grid, model, &state.u),
            v,
        }
    }

    pub fn file_name(&self) -> String {
        format!("snap_t{:.6}.csv", self.t)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,u,w,v\n");
        for j in 0..self.x.len() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                self.x[j], self.u[j], self.w[j], self.v[j]
            );
        }
        out
    }
}

struct ShockSampler<'a> {
    grid: &'a StaggeredGrid<f64>,
    model: &'a CouplingModel<f64>,
    targets: Vec<f64>,
    next: usize,
    samples: Vec<(f64, Vec<f64>)>,
}

impl StepObserver<f64> for ShockSampler<'_> {
    fn observe(&mut self, event: &StepEvent<'_, f64>) {
        let t = event.next.t;
        if self.next < self.targets.len() && t >= self.targets[self.next] * (1.0 - 1e-12) {
            self.samples.push((t, cell_w(self.grid, self.model, &event.next.u)));
            while self.next < self.targets.len() && t >= self.targets[self.next] * (1.0 - 1e-12) {
                self.next += 1;
            }
        }
    }
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub final_state: SchemeState<f64>,
    pub snapshots: Vec<Snapshot>,
    pub diagnostics: Option<DiagnosticsRecord<f64>>,
    pub worst: Option<InvariantWorst<f64>>,
    pub failures: Vec<InvariantFailure>,
    pub shock: Option<ShockTrack<f64>>,
    pub shock_error: Option<String>,
    /// Median and standard deviation over `10 eta <= |x| <= 0.2`.
    pub plateau: Option<(f64, f64)>,
    pub wall_time: Duration,
}

impl RunOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn final_w(&self, grid: &StaggeredGrid<f64>, model: &CouplingModel<f64>) -> Vec<f64> {
        cell_w(grid, model, &self.final_state.u)
    }

    /// `key = value` lines; every key except `wall_time_s` is deterministic.
    pub fn summary(&self, config: &ExperimentConfig) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        kv("preset", config.preset.clone().unwrap_or_else(|| "none".into()));
        kv("flux_scheme", config.flux_scheme.to_string());
        kv("n", config.n.to_string());
        kv("steps", self.final_state.n.to_string());
        kv("t_end", format!("{}", config.t_end));
        kv("final_time", format!("{:.16e}", self.final_state.t));
        let (lo, hi) = self.final_state.min_max();
        kv("u_min", format!("{lo:.16e}"));
        kv("u_max", format!("{hi:.16e}"));
        if let (Some(w), Some(rec)) = (&self.worst, &self.diagnostics) {
            kv("max_principle_violation", format!("{:.6e}", w.max_principle));
            kv("convex_combination_defect", format!("{:.6e}", w.convex_combination));
            kv(
                "subcell_max_principle_violation",
                format!("{:.6e}", w.subcell_max_principle),
            );
            kv("sup_norm_excess", format!("{:.6e}", w.sup_norm_excess));
            if config.entropy_levels > 0 {
                kv("max_entropy_residual", format!("{:.6e}", w.entropy_residual));
            }
            if config.check_tvd {
                kv("tvd_increase", format!("{:.6e}", w.tvd_increase));
            }
            if let Some(last) = rec.rows.last() {
                kv("weak_bv_cumulative", format!("{:.16e}", last.weak_bv_cumulative));
            }
            if let Some(&(_, res)) = rec.well_balanced_trace.last() {
                kv("well_balanced_residual", format!("{res:.6e}"));
            }
        }
        if let Some(s) = &self.shock {
            kv("shock_speed", format!("{:.16e}", s.speed));
        }
        if let Some(e) = &self.shock_error {
            kv("shock_error", e.clone());
        }
        if let Some((median, sd)) = self.plateau {
            kv("plateau_median", format!("{median:.16e}"));
            kv("plateau_std", format!("{sd:.6e}"));
        }
        kv("status", if self.passed() { "pass".into() } else { "fail".into() });
        if !self.failures.is_empty() {
            let names: Vec<String> = self
                .failures
                .iter()
                .map(|f| format!("{}({:.3e} > {:.0e})", f.name, f.worst, f.tolerance))
                .collect();
            kv("failures", names.join(", "));
        }
        kv("wall_time_s", format!("{:.3}", self.wall_time.as_secs_f64()));
        out
    }
}

/// Diagnostics CSV with the standard header.
pub fn diagnostics_csv(record: &DiagnosticsRecord<f64>) -> String {
    let mut out = String::from(
        "n,t,dt,u_min,u_max,max_principle_violation,tv_w,weak_bv_increment,weak_bv_cumulative,max_entropy_residual\n",
    );
    for r in &record.rows {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
            r.n,
            r.t,
            r.dt,
            r.u_min,
            r.u_max,
            r.max_principle_violation,
            r.tv_w,
            r.weak_bv_increment,
            r.weak_bv_cumulative,
            r.max_entropy_residual
        );
    }
    out
}

/// Runs a configuration without touching the file system.
pub fn simulate(config: &ExperimentConfig) -> Result<RunOutcome> {
    let started = Instant::now();
    let Setup { model, grid, state } = setup(config)?;
    let initial_w = cell_w(&grid, &model, &state.u);

    let options = DiagnosticsOptions {
        selector: config.flux_scheme,
        entropy_levels: if config.entropy_levels > 0 {
            kruzhkov_levels(&model, config.entropy_levels)
        } else {
            Vec::new()
        },
        weak_bv_window: window_cells(&grid, -config.weak_bv_window, config.weak_bv_window),
        check_tvd: config.check_tvd,
        well_balanced_target: (config.initial == InitialKind::Constant).then_some(config.u_star),
        initial_sup: state.u.iter().fold(0.0_f64, |a, &x| a.max(x.abs())),
    };
    let mut recorder = config.diagnostics.then(|| DiagnosticsRecorder::new(&model, options));
    let mut sampler = config.track_shock.then(|| ShockSampler {
        grid: &grid,
        model: &model,
        targets: (1..=SHOCK_SAMPLES)
            .map(|i| config.t_end * i as f64 / SHOCK_SAMPLES as f64)
            .collect(),
        next: 0,
        samples: vec![(0.0, initial_w.clone())],
    });

    let mut state = state;
    let mut snapshots = Vec::new();
    let mut stops = config.snapshot_schedule();
    if stops.last() != Some(&config.t_end) {
        stops.push(config.t_end);
    }
    let wanted = config.snapshot_schedule();
    for stop in stops {
        if stop > state.t {
            let mut observers: Vec<&mut dyn StepObserver<f64>> = Vec::new();
            if let Some(r) = recorder.as_mut() {
                observers.push(r);
            }
            if let Some(s) = sampler.as_mut() {
                observers.push(s);
            }
            state = run(
                state,
                &grid,
                &model,
                config.flux_scheme,
                stop,
                config.cfl_number,
                &mut observers,
            )?;
        }
        if wanted.contains(&stop) {
            snapshots.push(Snapshot::capture(&grid, &model, &state));
        }
    }

    let mut failures = Vec::new();
    let (diagnostics, worst) = match recorder {
        Some(r) => {
            failures.extend(r.failures());
            (Some(r.record), Some(r.worst))
        }
        None => (None, None),
    };

    let (mut shock, mut shock_error) = (None, None);
    if let Some(s) = sampler {
        let level = config
            .shock_level
            .unwrap_or(0.5 * (initial_w[0] + initial_w[initial_w.len() - 1]));
        let exclusion = shock_exclusion(config, &model);
        match shock_track(&grid.centers(), &s.samples, level, exclusion) {
            Ok(track) => shock = Some(track),
            Err(e) => {
                failures.push(InvariantFailure {
                    name: "shock_track",
                    worst: f64::NAN,
                    tolerance: 0.0,
                });
                shock_error = Some(e.to_string());
            }
        }
    }

    let plateau = (config.color == ColorKind::Erf)
        .then(|| {
            plateau(
                &grid.centers(),
                &cell_w(&grid, &model, &state.u),
                10.0 * config.eta,
                0.2,
            )
        })
        .flatten();

    Ok(RunOutcome {
        final_state: state,
        snapshots,
        diagnostics,
        worst,
        failures,
        shock,
        shock_error,
        plateau,
        wall_time: started.elapsed(),
    })
}

/// Interval ignored by shock tracking: the color transition around
/// `x = -zeta eta`, widened by `shock_exclusion` (default `5 eta` when the
/// transmission maps differ from the identity, none otherwise).
fn shock_exclusion(config: &ExperimentConfig, model: &CouplingModel<f64>) -> Option<(f64, f64)> {
    let center = if config.color == ColorKind::Erf {
        -config.zeta * config.eta
    } else {
        0.0
    };
    let half = match config.shock_exclusion {
        Some(h) => h,
        None if model.transmission.is_identity() || config.color != ColorKind::Erf => return None,
        None => 5.0 * config.eta,
    };
    (half > 0.0).then_some((center - half, center + half))
}

/// Writes snapshots, diagnostics and summary into `dir`.
pub fn write_outputs(config: &ExperimentConfig, outcome: &RunOutcome, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for snap in &outcome.snapshots {
        let path = dir.join(snap.file_name());
        fs::write(&path, snap.to_csv())?;
        written.push(path);
    }
    if let Some(rec) = &outcome.diagnostics {
        let path = dir.join("diagnostics.csv");
        fs::write(&path, diagnostics_csv(rec))?;
        written.push(path);
    }
    let path = dir.join("summary.txt");
    fs::write(&path, outcome.summary(config))?;
    written.push(path);
    Ok(written)
}

/// [`simulate`] followed by [`write_outputs`] into the configured directory.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome> {
    let outcome = simulate(config)?;
    write_outputs(config, &outcome, &config.output_dir)?;
    Ok(outcome)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1_error: f64,
    /// `log2(e_{N/2} / e_N)` when the previous row has half as many cells.
    pub order: Option<f64>,
}

/// Final `w` on a grid of `n` cells, diagnostics off.
pub fn final_w(config: &ExperimentConfig, n: usize) -> Result<(StaggeredGrid<f64>, Vec<f64>)> {
    let cfg = ExperimentConfig {
        n,
        diagnostics: false,
        track_shock: false,
        snapshot_times: vec![config.t_end],
        ..config.clone()
    };
    let Setup { model, grid, state } = setup(&cfg)?;
    let state = run(
        state,
        &grid,
        &model,
        cfg.flux_scheme,
        cfg.t_end,
        cfg.cfl_number,
        &mut [],
    )?;
    let w = cell_w(&grid, &model, &state.u);
    Ok((grid, w))
}

/// L1 errors at `t_end` against a run on `n_ref` cells; runs execute on
/// separate threads.
pub fn convergence_study(config: &ExperimentConfig, n_list: &[usize], n_ref: usize) -> Result<Vec<ConvergenceRow>> {
    if n_list.is_empty() {
        return Err(Error::EmptyArray);
    }
    if let Some(&n) = n_list.iter().find(|&&n| n == 0 || !n_ref.is_multiple_of(n)) {
        return Err(Error::IncompatibleGrids(format!(
            "{n_ref} cells do not refine {n} cells"
        )));
    }
    let (reference, runs) = std::thread::scope(|scope| {
        let reference = scope.spawn(|| final_w(config, n_ref));
        let handles: Vec<_> = n_list
            .iter()
            .map(|&n| scope.spawn(move || final_w(config, n)))
            .collect();
        let runs: Vec<_> = handles
            .into_iter()
            .map(|h| h.join().expect("convergence run panicked"))
            .collect();
        (reference.join().expect("reference run panicked"), runs)
    });
    let (ref_grid, ref_w) = reference?;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(n_list.len());
    for (&n, result) in n_list.iter().zip(runs) {
        let (grid, w) = result?;
        let l1 = l1_error((&grid, &w), (&ref_grid, &ref_w))?;
        let order = rows
            .last()
            .filter(|prev| prev.n * 2 == n)
            .map(|prev| (prev.l1_error / l1).log2());
        rows.push(ConvergenceRow { n, l1_error: l1, order });
    }
    Ok(rows)
}

pub fn convergence_table(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n,l1_error,order\n");
    for r in rows {
        let order = r.order.map_or(String::new(), |o| format!("{o:.4}"));
        let _ = writeln!(out, "{},{:.16e},{}", r.n, r.l1_error, order);
    }
    out
}
