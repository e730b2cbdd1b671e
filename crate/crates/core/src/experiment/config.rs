use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::coupling::{CouplingModel, FluxFunction, FluxPair, TransmissionMap, TransmissionPair};
use crate::error::{Error, Result};
use crate::flux::NumericalFlux;
use crate::grid::{ColorFunction, InitialData};
use crate::scheme::MAX_CFL;

use super::preset;

/// Every recognised key with its default, as printed by `--help`.
pub const CONFIG_KEYS: &str = "\
Config file: one `key = value` per line, `#` starts a comment.
  preset             base preset applied before the other keys (none)
  flux_left          burgers | burgers_shifted              (burgers)
  flux_right         burgers | burgers_shifted              (burgers_shifted)
  transmission       identity | linear(c), both sides       (identity)
  transmission_left  overrides the left map                 (unset)
  transmission_right overrides the right map                (unset)
  color              erf | constant | heaviside             (erf)
  eta, zeta          erf thickness and shift                (0.005, 0)
  color_value        value of a constant color              (0)
  x_min, x_max       domain                                 (-1, 1)
  n                  cell count, at least 4                 (1000)
  cfl_number         in (0, 0.5]                            (0.45)
  t_end              final time                             (0.4)
  initial            riemann | constant | sine              (riemann)
  u_left, u_right    Riemann states                         (-1, 1.5)
  x_jump             Riemann jump location                  (0)
  u_star             constant state                         (0.3)
  amplitude, offset  sine data offset + amplitude sin(pi x) (0.5, 0.25)
  initial_variable   u | w; w maps the Riemann states by theta-/theta+ (u)
  flux_scheme        godunov | engquist-osher | rusanov     (godunov)
  snapshot_times     comma separated times                  (t_end)
  output_dir         directory for the run files            (out)
  diagnostics        true | false                           (true)
  entropy_levels     Kruzhkov levels checked, 0 disables    (21)
  check_tvd          assert TV(w) is nonincreasing          (false)
  track_shock        fit a front speed                      (false)
  shock_level        tracked level                          ((w_left + w_right) / 2)
  shock_exclusion    half width of the ignored interface zone (5 eta, 0 for identity maps)
  weak_bv_window     half width of the weak BV window       (0.8)
";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColorKind {
    Erf,
    Constant,
    Heaviside,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialKind {
    Riemann,
    Constant,
    Sine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialVariable {
    U,
    W,
}

macro_rules! keyword_enum {
    ($ty:ty, $field:literal, { $($text:literal => $variant:expr),+ $(,)? }) => {
        impl FromStr for $ty {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s.trim() {
                    $($text => Ok($variant),)+
                    other => Err(Error::Validation { field: $field.into(), message: format!("unknown value `{other}`") }),
                }
            }
        }
    };
}

keyword_enum!(ColorKind, "color", { "erf" => ColorKind::Erf, "constant" => ColorKind::Constant, "heaviside" => ColorKind::Heaviside });
keyword_enum!(InitialKind, "initial", { "riemann" => InitialKind::Riemann, "constant" => InitialKind::Constant, "sine" => InitialKind::Sine });
keyword_enum!(InitialVariable, "initial_variable", { "u" => InitialVariable::U, "w" => InitialVariable::W });

impl fmt::Display for ColorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Erf => "erf",
            Self::Constant => "constant",
            Self::Heaviside => "heaviside",
        })
    }
}

impl fmt::Display for InitialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Riemann => "riemann",
            Self::Constant => "constant",
            Self::Sine => "sine",
        })
    }
}

/// A complete, validated experiment description.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Option<String>,
    pub flux_left: String,
    pub flux_right: String,
    pub transmission: String,
    pub transmission_left: Option<String>,
    pub transmission_right: Option<String>,
    pub color: ColorKind,
    pub eta: f64,
    pub zeta: f64,
    pub color_value: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub cfl_number: f64,
    pub t_end: f64,
    pub initial: InitialKind,
    pub u_left: f64,
    pub u_right: f64,
    pub x_jump: f64,
    pub u_star: f64,
    pub amplitude: f64,
    pub offset: f64,
    pub initial_variable: InitialVariable,
    pub flux_scheme: NumericalFlux,
    /// Empty means `[t_end]`.
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub diagnostics: bool,
    pub entropy_levels: usize,
    pub check_tvd: bool,
    pub track_shock: bool,
    pub shock_level: Option<f64>,
    pub shock_exclusion: Option<f64>,
    pub weak_bv_window: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            preset: None,
            flux_left: "burgers".into(),
            flux_right: "burgers_shifted".into(),
            transmission: "identity".into(),
            transmission_left: None,
            transmission_right: None,
            color: ColorKind::Erf,
            eta: 5e-3,
            zeta: 0.0,
            color_value: 0.0,
            x_min: -1.0,
            x_max: 1.0,
            n: 1000,
            cfl_number: 0.45,
            t_end: 0.4,
            initial: InitialKind::Riemann,
            u_left: -1.0,
            u_right: 1.5,
            x_jump: 0.0,
            u_star: 0.3,
            amplitude: 0.5,
            offset: 0.25,
            initial_variable: InitialVariable::U,
            flux_scheme: NumericalFlux::Godunov,
            snapshot_times: Vec::new(),
            output_dir: PathBuf::from("out"),
            diagnostics: true,
            entropy_levels: 21,
            check_tvd: false,
            track_shock: false,
            shock_level: None,
            shock_exclusion: None,
            weak_bv_window: 0.8,
        }
    }
}

fn parse_num<V: FromStr>(field: &str, value: &str) -> Result<V> {
    value.trim().parse().map_err(|_| Error::Validation {
        field: field.into(),
        message: format!("cannot parse `{}`", value.trim()),
    })
}

fn parse_bool(field: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(Error::Validation {
            field: field.into(),
            message: format!("expected true or false, found `{other}`"),
        }),
    }
}

impl ExperimentConfig {
    /// Sets one key; the value is parsed but not cross-validated.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "preset" => *self = preset(v)?,
            "flux_left" => self.flux_left = v.into(),
            "flux_right" => self.flux_right = v.into(),
            "transmission" => self.transmission = v.into(),
            "transmission_left" => self.transmission_left = Some(v.into()),
            "transmission_right" => self.transmission_right = Some(v.into()),
            "color" => self.color = v.parse()?,
            "eta" => self.eta = parse_num(key, v)?,
            "zeta" => self.zeta = parse_num(key, v)?,
            "color_value" => self.color_value = parse_num(key, v)?,
            "x_min" => self.x_min = parse_num(key, v)?,
            "x_max" => self.x_max = parse_num(key, v)?,
            "n" => self.n = parse_num(key, v)?,
            "cfl_number" => self.cfl_number = parse_num(key, v)?,
            "t_end" => self.t_end = parse_num(key, v)?,
            "initial" => self.initial = v.parse()?,
            "u_left" => self.u_left = parse_num(key, v)?,
            "u_right" => self.u_right = parse_num(key, v)?,
            "x_jump" => self.x_jump = parse_num(key, v)?,
            "u_star" => self.u_star = parse_num(key, v)?,
            "amplitude" => self.amplitude = parse_num(key, v)?,
            "offset" => self.offset = parse_num(key, v)?,
            "initial_variable" => self.initial_variable = v.parse()?,
            "flux_scheme" => {
                self.flux_scheme = v.parse().map_err(|_| Error::Validation {
                    field: key.into(),
                    message: format!("unknown flux `{v}`"),
                })?
            }
            "snapshot_times" => {
                self.snapshot_times = v
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| parse_num(key, s))
                    .collect::<Result<_>>()?
            }
            "output_dir" => self.output_dir = PathBuf::from(v),
            "diagnostics" => self.diagnostics = parse_bool(key, v)?,
            "entropy_levels" => self.entropy_levels = parse_num(key, v)?,
            "check_tvd" => self.check_tvd = parse_bool(key, v)?,
            "track_shock" => self.track_shock = parse_bool(key, v)?,
            "shock_level" => self.shock_level = Some(parse_num(key, v)?),
            "shock_exclusion" => self.shock_exclusion = Some(parse_num(key, v)?),
            "weak_bv_window" => self.weak_bv_window = parse_num(key, v)?,
            other => {
                return Err(Error::Validation {
                    field: other.into(),
                    message: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, message: String| {
            Err(Error::Validation {
                field: field.into(),
                message,
            })
        };
        if !(self.cfl_number > 0.0 && self.cfl_number <= MAX_CFL) {
            return bad("cfl_number", format!("{} is outside (0, {MAX_CFL}]", self.cfl_number));
        }
        if self.n < 4 {
            return bad("n", format!("{} cells, at least 4 required", self.n));
        }
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_min < self.x_max) {
            return bad("x_max", format!("[{}, {}] is not an interval", self.x_min, self.x_max));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end", format!("{} is not positive", self.t_end));
        }
        self.color_function()?.validate()?;
        let transmission = self.transmission_pair()?;
        if self.color == ColorKind::Heaviside && !transmission.is_identity() {
            return bad(
                "color",
                "heaviside color requires identity transmission on both sides".into(),
            );
        }
        self.flux_pair()?;
        for &t in &self.snapshot_times {
            if !(0.0..=self.t_end).contains(&t) {
                return bad("snapshot_times", format!("{t} is outside [0, {}]", self.t_end));
            }
        }
        if !(self.weak_bv_window > 0.0) {
            return bad("weak_bv_window", format!("{} is not positive", self.weak_bv_window));
        }
        if matches!(self.shock_exclusion, Some(e) if !(e >= 0.0)) {
            return bad("shock_exclusion", "must be nonnegative".into());
        }
        for (field, x) in [
            ("u_left", self.u_left),
            ("u_right", self.u_right),
            ("u_star", self.u_star),
            ("amplitude", self.amplitude),
            ("offset", self.offset),
            ("x_jump", self.x_jump),
            ("zeta", self.zeta),
        ] {
            if !x.is_finite() {
                return bad(field, "not finite".into());
            }
        }
        Ok(())
    }

    pub fn color_function(&self) -> Result<ColorFunction<f64>> {
        let c = match self.color {
            ColorKind::Erf => ColorFunction::ErfProfile {
                eta: self.eta,
                zeta: self.zeta,
            },
            ColorKind::Constant => ColorFunction::Constant(self.color_value),
            ColorKind::Heaviside => ColorFunction::Heaviside,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn transmission_pair(&self) -> Result<TransmissionPair<f64>> {
        let lookup = |field: &str, name: &str| {
            TransmissionMap::from_name(name).map_err(|_| Error::Validation {
                field: field.into(),
                message: format!("unknown transmission `{name}`"),
            })
        };
        let left = match &self.transmission_left {
            Some(name) => lookup("transmission_left", name)?,
            None => lookup("transmission", &self.transmission)?,
        };
        let right = match &self.transmission_right {
            Some(name) => lookup("transmission_right", name)?,
            None => lookup("transmission", &self.transmission)?,
        };
        Ok(TransmissionPair { left, right })
    }

    pub fn flux_pair(&self) -> Result<FluxPair<f64>> {
        let lookup = |field: &str, name: &str| {
            FluxFunction::from_name(name).map_err(|_| Error::Validation {
                field: field.into(),
                message: format!("unknown flux `{name}`"),
            })
        };
        Ok(FluxPair {
            left: lookup("flux_left", &self.flux_left)?,
            right: lookup("flux_right", &self.flux_right)?,
        })
    }

    /// Riemann states in `u`, mapping `w` input through `theta-` on the left
    /// and `theta+` on the right.
    pub fn riemann_states(&self) -> Result<(f64, f64)> {
        Ok(match self.initial_variable {
            InitialVariable::U => (self.u_left, self.u_right),
            InitialVariable::W => {
                let t = self.transmission_pair()?;
                (t.left.theta(self.u_left), t.right.theta(self.u_right))
            }
        })
    }

    pub fn initial_data(&self) -> Result<InitialData<f64>> {
        Ok(match self.initial {
            InitialKind::Riemann => {
                let (left, right) = self.riemann_states()?;
                InitialData::Riemann {
                    left,
                    right,
                    jump: self.x_jump,
                }
            }
            InitialKind::Constant => InitialData::Constant(self.u_star),
            InitialKind::Sine => {
                let (a, c) = (self.amplitude, self.offset);
                InitialData::smooth(move |x: f64| c + a * (std::f64::consts::PI * x).sin())
            }
        })
    }

    /// `[m, M]` bounding the initial data, hence the whole run.
    pub fn working_range(&self) -> Result<(f64, f64)> {
        Ok(match self.initial {
            InitialKind::Riemann => {
                let (l, r) = self.riemann_states()?;
                (l.min(r), l.max(r))
            }
            InitialKind::Constant => (self.u_star, self.u_star),
            InitialKind::Sine => (self.offset - self.amplitude.abs(), self.offset + self.amplitude.abs()),
        })
    }

    pub fn model(&self) -> Result<CouplingModel<f64>> {
        let (m, big_m) = self.working_range()?;
        CouplingModel::new(self.flux_pair()?, self.transmission_pair()?, m, big_m)
    }

    /// Requested snapshot times, sorted and deduplicated.
    pub fn snapshot_schedule(&self) -> Vec<f64> {
        let mut times = if self.snapshot_times.is_empty() {
            vec![self.t_end]
        } else {
            self.snapshot_times.clone()
        };
        times.sort_by(|a, b| a.partial_cmp(b).expect("validated times"));
        times.dedup();
        times
    }
}

/// Parses the flat `key = value` format. A `preset` line is applied first
/// wherever it appears; later keys override it.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `key = value`, found `{line}`"),
            });
        };
        let key = key.trim();
        if key.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty key".into(),
            });
        }
        if entries.iter().any(|(_, k, _): &(usize, &str, &str)| *k == key) {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate key `{key}`"),
            });
        }
        entries.push((line_no, key, value.trim()));
    }
    let mut config = ExperimentConfig::default();
    entries.sort_by_key(|&(_, key, _)| key != "preset");
    for (line_no, key, value) in entries {
        config.set(key, value).map_err(|e| match e {
            Error::Validation { field, message } if message == "unknown key" => Error::Parse {
                line: line_no,
                message: format!("unknown key `{field}`"),
            },
            other => other,
        })?;
    }
    config.validate()?;
    Ok(config)
}
