//! TOML scenario files.
//!
//! Powers and gains are written in dB, angles in degrees and intensities in
//! points/m². Each threshold is given in exactly one of three forms: linear
//! (`connection`), dB (`connection_db`) or code rate in bits/s/Hz
//! (`connection_rate`, converted with `T = 2^R - 1`). Unknown keys are rejected.
//!
//! ```toml
//! bs_intensity = 2e-4
//! eve_intensity = 1e-4
//! tx_power_db = 30.0
//! bandwidth_hz = 2e9
//! noise_figure_db = 10.0
//! eavesdropper_mode = "non_colluding"
//!
//! [blockage]
//! los_fraction = 0.12
//! los_radius = 200.0
//!
//! [path_loss]
//! alpha_los = 2.0
//! alpha_nlos = 2.92
//! beta_los_db = 61.4
//! beta_nlos_db = 72.0
//!
//! [fading]
//! nakagami_los = 3
//! nakagami_nlos = 2
//!
//! [antenna]
//! kind = "sectored"            # or "artificial_noise"
//! main_gain_db = 15.0
//! side_gain_db = -3.0          # sectored only
//! beamwidth_deg = 9.0
//! # an_gain_db = 3.0           # artificial_noise only
//! # power_split = 0.5          # artificial_noise only
//!
//! [thresholds]
//! connection_db = 10.0
//! secrecy_db = 0.0
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{
    db_to_linear, linear_to_db, AnPattern, Antenna, AntennaPattern, BlockageModel, EavesdropperMode,
    FadingParams, PathLossModel, ScenarioParams, Thresholds,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    bs_intensity: f64,
    eve_intensity: f64,
    tx_power_db: f64,
    bandwidth_hz: f64,
    noise_figure_db: f64,
    eavesdropper_mode: ModeFile,
    blockage: BlockageFile,
    path_loss: PathLossFile,
    fading: FadingFile,
    antenna: AntennaFile,
    thresholds: ThresholdsFile,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum ModeFile {
    NonColluding,
    Colluding,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BlockageFile {
    los_fraction: f64,
    los_radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathLossFile {
    alpha_los: f64,
    alpha_nlos: f64,
    beta_los_db: f64,
    beta_nlos_db: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FadingFile {
    nakagami_los: u32,
    nakagami_nlos: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum AntennaKind {
    Sectored,
    ArtificialNoise,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntennaFile {
    kind: AntennaKind,
    main_gain_db: f64,
    beamwidth_deg: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side_gain_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    an_gain_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    power_split: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ThresholdsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connection: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connection_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    connection_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    secrecy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    secrecy_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    secrecy_rate: Option<f64>,
}

fn one_threshold(name: &str, linear: Option<f64>, db: Option<f64>, rate: Option<f64>) -> Result<f64> {
    match (linear, db, rate) {
        (Some(t), None, None) => Ok(t),
        (None, Some(d), None) => Ok(db_to_linear(d)),
        (None, None, Some(r)) => Ok(Thresholds::from_rate(r)),
        (None, None, None) => Err(Error::validation(
            format!("thresholds.{name}"),
            format!("missing; give one of `{name}`, `{name}_db` or `{name}_rate`"),
        )),
        _ => Err(Error::validation(
            format!("thresholds.{name}"),
            format!("exactly one of `{name}`, `{name}_db`, `{name}_rate` is allowed"),
        )),
    }
}

impl ScenarioFile {
    fn into_params(self) -> Result<ScenarioParams> {
        let a = &self.antenna;
        let antenna = match a.kind {
            AntennaKind::Sectored => {
                if a.an_gain_db.is_some() || a.power_split.is_some() {
                    return Err(Error::validation(
                        "antenna",
                        "`an_gain_db` and `power_split` only apply to kind = \"artificial_noise\"",
                    ));
                }
                let side = a
                    .side_gain_db
                    .ok_or_else(|| Error::validation("antenna.side_gain_db", "required for sectored antennas"))?;
                Antenna::Sectored(AntennaPattern {
                    main_gain: db_to_linear(a.main_gain_db),
                    side_gain: db_to_linear(side),
                    beamwidth_deg: a.beamwidth_deg,
                })
            }
            AntennaKind::ArtificialNoise => {
                if a.side_gain_db.is_some() {
                    return Err(Error::validation(
                        "antenna.side_gain_db",
                        "artificial-noise patterns have no sidelobe",
                    ));
                }
                let an = a
                    .an_gain_db
                    .ok_or_else(|| Error::validation("antenna.an_gain_db", "required for artificial_noise"))?;
                let phi = a
                    .power_split
                    .ok_or_else(|| Error::validation("antenna.power_split", "required for artificial_noise"))?;
                Antenna::ArtificialNoise(AnPattern {
                    info_gain: db_to_linear(a.main_gain_db),
                    an_gain: db_to_linear(an),
                    beamwidth_deg: a.beamwidth_deg,
                    power_split: phi,
                })
            }
        };
        let t = &self.thresholds;
        let thresholds = Thresholds {
            connection: one_threshold("connection", t.connection, t.connection_db, t.connection_rate)?,
            secrecy: one_threshold("secrecy", t.secrecy, t.secrecy_db, t.secrecy_rate)?,
        };
        let params = ScenarioParams {
            bs_intensity: self.bs_intensity,
            eve_intensity: self.eve_intensity,
            tx_power: db_to_linear(self.tx_power_db),
            bandwidth_hz: self.bandwidth_hz,
            noise_figure_db: self.noise_figure_db,
            blockage: BlockageModel {
                los_fraction: self.blockage.los_fraction,
                los_radius: self.blockage.los_radius,
            },
            path_loss: PathLossModel {
                alpha_los: self.path_loss.alpha_los,
                alpha_nlos: self.path_loss.alpha_nlos,
                beta_los_db: self.path_loss.beta_los_db,
                beta_nlos_db: self.path_loss.beta_nlos_db,
            },
            fading: FadingParams {
                nakagami_los: self.fading.nakagami_los,
                nakagami_nlos: self.fading.nakagami_nlos,
            },
            antenna,
            thresholds,
            eavesdropper_mode: match self.eavesdropper_mode {
                ModeFile::NonColluding => EavesdropperMode::NonColluding,
                ModeFile::Colluding => EavesdropperMode::Colluding,
            },
        };
        params.validate()?;
        Ok(params)
    }

    fn from_params(p: &ScenarioParams) -> Self {
        let antenna = match &p.antenna {
            Antenna::Sectored(s) => AntennaFile {
                kind: AntennaKind::Sectored,
                main_gain_db: linear_to_db(s.main_gain),
                beamwidth_deg: s.beamwidth_deg,
                side_gain_db: Some(linear_to_db(s.side_gain)),
                an_gain_db: None,
                power_split: None,
            },
            Antenna::ArtificialNoise(a) => AntennaFile {
                kind: AntennaKind::ArtificialNoise,
                main_gain_db: linear_to_db(a.info_gain),
                beamwidth_deg: a.beamwidth_deg,
                side_gain_db: None,
                an_gain_db: Some(linear_to_db(a.an_gain)),
                power_split: Some(a.power_split),
            },
        };
        // Linear thresholds survive zero (T = 0 has no dB form).
        let thresholds = ThresholdsFile {
            connection: Some(p.thresholds.connection),
            secrecy: Some(p.thresholds.secrecy),
            ..Default::default()
        };
        ScenarioFile {
            bs_intensity: p.bs_intensity,
            eve_intensity: p.eve_intensity,
            tx_power_db: linear_to_db(p.tx_power),
            bandwidth_hz: p.bandwidth_hz,
            noise_figure_db: p.noise_figure_db,
            eavesdropper_mode: match p.eavesdropper_mode {
                EavesdropperMode::NonColluding => ModeFile::NonColluding,
                EavesdropperMode::Colluding => ModeFile::Colluding,
            },
            blockage: BlockageFile { los_fraction: p.blockage.los_fraction, los_radius: p.blockage.los_radius },
            path_loss: PathLossFile {
                alpha_los: p.path_loss.alpha_los,
                alpha_nlos: p.path_loss.alpha_nlos,
                beta_los_db: p.path_loss.beta_los_db,
                beta_nlos_db: p.path_loss.beta_nlos_db,
            },
            fading: FadingFile { nakagami_los: p.fading.nakagami_los, nakagami_nlos: p.fading.nakagami_nlos },
            antenna,
            thresholds,
        }
    }
}

/// Parse and validate a scenario from TOML text.
pub fn parse_scenario(text: &str) -> Result<ScenarioParams> {
    let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_params()
}

/// Read, parse and validate a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ScenarioParams> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Serialize a scenario to the TOML file format.
pub fn to_toml(params: &ScenarioParams) -> Result<String> {
    toml::to_string(&ScenarioFile::from_params(params)).map_err(|e| Error::Parse(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{preset, PRESET_NAMES};
    use approx::assert_relative_eq;

    const BASE: &str = r#"
bs_intensity = 2e-4
eve_intensity = 1e-4
tx_power_db = 30.0
bandwidth_hz = 2e9
noise_figure_db = 10.0
eavesdropper_mode = "non_colluding"

[blockage]
los_fraction = 0.081
los_radius = 250.0

[path_loss]
alpha_los = 2.0
alpha_nlos = 2.92
beta_los_db = 61.4
beta_nlos_db = 72.0

[fading]
nakagami_los = 3
nakagami_nlos = 2

[antenna]
kind = "sectored"
main_gain_db = 15.0
side_gain_db = -3.0
beamwidth_deg = 9.0

[thresholds]
connection_db = 10.0
secrecy_rate = 1.0
"#;

    #[test]
    fn parses_and_converts_once() {
        let p = parse_scenario(BASE).unwrap();
        assert_eq!(p.blockage.los_fraction, 0.081);
        assert_eq!(p.blockage.los_radius, 250.0);
        assert_relative_eq!(p.tx_power, 1000.0, max_relative = 1e-12);
        assert_relative_eq!(p.thresholds.connection, 10.0, max_relative = 1e-12);
        assert_eq!(p.thresholds.secrecy, 1.0);
        let s = p.sectored().unwrap();
        assert_relative_eq!(s.main_gain, 10f64.powf(1.5), max_relative = 1e-12);
    }

    #[test]
    fn invalid_los_fraction_is_validation_error() {
        let text = BASE.replace("los_fraction = 0.081", "los_fraction = 1.3");
        assert!(matches!(parse_scenario(&text), Err(Error::Validation { .. })));
    }

    #[test]
    fn unknown_key_reports_location() {
        let text = BASE.replace("los_radius = 250.0", "los_radius = 250.0\nlos_radus = 3.0");
        match parse_scenario(&text) {
            Err(Error::Parse(msg)) => {
                assert!(msg.contains("los_radus"), "{msg}");
                assert!(msg.contains("line"), "{msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn missing_field_is_parse_error() {
        let text = BASE.replace("bandwidth_hz = 2e9\n", "");
        match parse_scenario(&text) {
            Err(Error::Parse(msg)) => assert!(msg.contains("bandwidth_hz"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn threshold_forms_are_exclusive() {
        let both = BASE.replace("secrecy_rate = 1.0", "secrecy_rate = 1.0\nsecrecy_db = 0.0");
        assert!(matches!(parse_scenario(&both), Err(Error::Validation { .. })));
        let none = BASE.replace("secrecy_rate = 1.0", "");
        assert!(matches!(parse_scenario(&none), Err(Error::Validation { .. })));
    }

    #[test]
    fn antenna_kind_fields_checked() {
        let text = BASE.replace("kind = \"sectored\"", "kind = \"artificial_noise\"");
        assert!(parse_scenario(&text).is_err());
        let text = BASE
            .replace("kind = \"sectored\"", "kind = \"artificial_noise\"")
            .replace("side_gain_db = -3.0", "an_gain_db = 3.0\npower_split = 0.5");
        let p = parse_scenario(&text).unwrap();
        assert_eq!(p.an_pattern().unwrap().power_split, 0.5);
    }

    #[test]
    fn presets_round_trip() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            let text = to_toml(&p).unwrap();
            let back = parse_scenario(&text).unwrap();
            assert_scenarios_close(&p, &back);
            let again = parse_scenario(&to_toml(&back).unwrap()).unwrap();
            assert_scenarios_close(&back, &again);
        }
    }

    pub(crate) fn assert_scenarios_close(a: &ScenarioParams, b: &ScenarioParams) {
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()) || x == y;
        assert!(close(a.tx_power, b.tx_power));
        assert_eq!(a.bs_intensity, b.bs_intensity);
        assert_eq!(a.eve_intensity, b.eve_intensity);
        assert_eq!(a.blockage, b.blockage);
        assert_eq!(a.path_loss, b.path_loss);
        assert_eq!(a.fading, b.fading);
        assert_eq!(a.thresholds, b.thresholds);
        assert_eq!(a.eavesdropper_mode, b.eavesdropper_mode);
        match (&a.antenna, &b.antenna) {
            (Antenna::Sectored(x), Antenna::Sectored(y)) => {
                assert!(close(x.main_gain, y.main_gain) && close(x.side_gain, y.side_gain));
                assert_eq!(x.beamwidth_deg, y.beamwidth_deg);
            }
            (Antenna::ArtificialNoise(x), Antenna::ArtificialNoise(y)) => {
                assert!(close(x.info_gain, y.info_gain) && close(x.an_gain, y.an_gain));
                assert_eq!(x.beamwidth_deg, y.beamwidth_deg);
                assert_eq!(x.power_split, y.power_split);
            }
            _ => panic!("antenna kind changed"),
        }
    }
}
