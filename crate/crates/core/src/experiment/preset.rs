use crate::error::{Error, Result};

use super::config::{ColorKind, ExperimentConfig, InitialKind};

pub const PRESETS: [&str; 5] = [
    "resonance-smooth",
    "resonance-shock",
    "state-coupling",
    "decoupled-burgers",
    "well-balanced",
];

/// Named experiment. All presets run on `[-1, 1]` up to `t = 0.4` with
/// `cfl_number = 0.45`.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let base = ExperimentConfig {
        preset: Some(name.to_string()),
        ..ExperimentConfig::default()
    };
    let config = match name {
        // Burgers against shifted Burgers, rarefaction data through the
        // resonant interface.
        "resonance-smooth" => base,
        "resonance-shock" => ExperimentConfig {
            u_left: 1.0,
            u_right: -2.0,
            track_shock: true,
            ..base
        },
        "state-coupling" => ExperimentConfig {
            color: ColorKind::Heaviside,
            check_tvd: true,
            ..base
        },
        "decoupled-burgers" => ExperimentConfig {
            flux_right: "burgers".into(),
            color: ColorKind::Constant,
            color_value: 0.0,
            u_left: 1.0,
            u_right: -0.5,
            ..base
        },
        "well-balanced" => ExperimentConfig {
            transmission_right: Some("linear(2)".into()),
            eta: 0.01,
            n: 200,
            initial: InitialKind::Constant,
            u_star: 0.3,
            ..base
        },
        other => return Err(Error::UnknownPreset(other.to_string())),
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values() {
        let s = preset("resonance-smooth").unwrap();
        assert_eq!((s.u_left, s.u_right, s.eta), (-1.0, 1.5, 5e-3));
        assert_eq!((s.x_min, s.x_max), (-1.0, 1.0));
        assert_eq!(preset("resonance-shock").unwrap().u_right, -2.0);
        let wb = preset("well-balanced").unwrap();
        assert_eq!((wb.initial, wb.u_star), (InitialKind::Constant, 0.3));
        assert!(!wb.transmission_pair().unwrap().is_identity());
        let sc = preset("state-coupling").unwrap();
        assert_eq!(sc.color, ColorKind::Heaviside);
        assert!(sc.transmission_pair().unwrap().is_identity());
        assert_eq!(
            preset("decoupled-burgers").unwrap().color_function().unwrap(),
            crate::grid::ColorFunction::Constant(0.0)
        );
    }

    #[test]
    fn every_listed_preset_resolves() {
        for name in PRESETS {
            assert_eq!(preset(name).unwrap().preset.as_deref(), Some(name));
        }
        assert!(matches!(preset("resonance"), Err(Error::UnknownPreset(_))));
    }
}
