//! Built-in figure scenarios and the two measured blockage environments.
//!
//! Every figure shares the 28 GHz link budget below; captions that leave a
//! parameter open (eavesdropper intensity, second antenna patterns) are filled
//! with fixed choices listed in the README.

use super::{
    db_to_linear, AnPattern, Antenna, AntennaPattern, Axis, BlockageModel, EavesdropperMode, FadingParams,
    Metric, PathLossModel, ScenarioParams, Thresholds,
};
use crate::error::{Error, Result};

/// Names accepted by [`preset`] and [`figure_preset`].
pub const PRESET_NAMES: [&str; 13] = [
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "fig6",
    "fig7",
    "fig8",
    "fig9",
    "connectivity",
    "np-grid",
    "chicago",
    "manhattan",
];

/// Names accepted by [`figure_preset`].
pub const FIGURE_NAMES: [&str; 11] =
    ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "connectivity", "np-grid"];

/// AN-assisted single-slope network with Rayleigh fading and no receiver noise,
/// used as the sub-6 GHz comparison point.
#[derive(Debug, Clone, PartialEq)]
pub struct MicrowaveParams {
    pub bs_intensity: f64,
    pub eve_intensity: f64,
    pub path_loss_exponent: f64,
    /// Array size `M`; the confidential-to-AN gain ratio is `M - 1`.
    pub antennas: u32,
    /// Half-width of the confidential sector in degrees (`|θ| ≤` this value).
    pub info_beamwidth_deg: f64,
    pub power_split: f64,
    pub thresholds: Thresholds,
}

impl MicrowaveParams {
    pub fn gain_ratio(&self) -> f64 {
        f64::from(self.antennas) - 1.0
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bs_intensity >= 0.0) || !(self.eve_intensity >= 0.0) {
            return Err(Error::validation("microwave", "intensities must be non-negative"));
        }
        if !(self.path_loss_exponent > 2.0) {
            return Err(Error::validation("microwave.path_loss_exponent", "must exceed 2"));
        }
        if self.antennas < 2 {
            return Err(Error::validation("microwave.antennas", "need at least 2 antennas"));
        }
        if !(self.info_beamwidth_deg > 0.0 && self.info_beamwidth_deg <= 180.0) {
            return Err(Error::validation("microwave.info_beamwidth_deg", "must lie in (0, 180]"));
        }
        if !(0.0..=1.0).contains(&self.power_split) {
            return Err(Error::validation("microwave.power_split", "must lie in [0, 1]"));
        }
        Ok(())
    }
}

/// Microwave comparison network: exponent 2.7, six antennas, 60° confidential sector.
pub fn microwave_preset() -> MicrowaveParams {
    MicrowaveParams {
        bs_intensity: 8e-4,
        eve_intensity: 1e-4,
        path_loss_exponent: 2.7,
        antennas: 6,
        info_beamwidth_deg: 30.0,
        power_split: 0.5,
        thresholds: Thresholds { connection: db_to_linear(0.0), secrecy: db_to_linear(-30.0) },
    }
}

/// One curve of a figure: a label and its full parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub params: ScenarioParams,
}

/// Everything needed to regenerate one figure.
#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub name: &'static str,
    pub title: &'static str,
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub metrics: Vec<Metric>,
    pub curves: Vec<Curve>,
    pub microwave: Option<MicrowaveParams>,
}

const MAIN_DB: f64 = 15.0;
const SIDE_DB: f64 = -3.0;
const AN_DB: f64 = 3.0;

fn base() -> ScenarioParams {
    ScenarioParams {
        bs_intensity: 2e-4,
        eve_intensity: 1e-4,
        tx_power: db_to_linear(30.0),
        bandwidth_hz: 2e9,
        noise_figure_db: 10.0,
        blockage: BlockageModel { los_fraction: 0.12, los_radius: 200.0 },
        path_loss: PathLossModel { alpha_los: 2.0, alpha_nlos: 2.92, beta_los_db: 61.4, beta_nlos_db: 72.0 },
        fading: FadingParams { nakagami_los: 3, nakagami_nlos: 2 },
        antenna: sectored(9.0, MAIN_DB, SIDE_DB),
        thresholds: Thresholds { connection: db_to_linear(10.0), secrecy: db_to_linear(0.0) },
        eavesdropper_mode: EavesdropperMode::NonColluding,
    }
}

fn sectored(beamwidth_deg: f64, main_db: f64, side_db: f64) -> Antenna {
    Antenna::Sectored(AntennaPattern {
        main_gain: db_to_linear(main_db),
        side_gain: db_to_linear(side_db),
        beamwidth_deg,
    })
}

fn an(beamwidth_deg: f64, info_db: f64, an_db: f64, phi: f64) -> Antenna {
    Antenna::ArtificialNoise(AnPattern {
        info_gain: db_to_linear(info_db),
        an_gain: db_to_linear(an_db),
        beamwidth_deg,
        power_split: phi,
    })
}

fn with(mut p: ScenarioParams, f: impl FnOnce(&mut ScenarioParams)) -> ScenarioParams {
    f(&mut p);
    p
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Sectored patterns compared in the noise-limited figures (beamwidth, M_s dB, m_s dB).
pub const SECTORED_PATTERNS: [(f64, f64, f64); 3] = [(9.0, 15.0, -3.0), (30.0, 10.0, -3.0), (60.0, 6.0, -3.0)];
/// AN patterns compared in the power-split figure (beamwidth, M_s dB, M_a dB).
pub const AN_PATTERNS: [(f64, f64, f64); 3] = [(9.0, 15.0, 3.0), (30.0, 10.0, 3.0), (60.0, 6.0, 3.0)];

/// Eavesdropper grid shared by the λ_E sweeps.
pub fn eve_grid() -> Vec<f64> {
    vec![1e-5, 5e-5, 1e-4, 1.5e-4, 2e-4, 2.5e-4, 3e-4, 4e-4]
}

/// 50-point power-split grid strictly inside (0, 1).
pub fn phi_grid() -> Vec<f64> {
    linspace(0.01, 0.99, 50)
}

fn lambda_label(name: &str, v: f64) -> String {
    format!("{name}={v:e}")
}

fn pattern_label(bw: f64, main: f64, other: f64) -> String {
    format!("theta_b={bw}deg,M_s={main}dB,side={other}dB")
}

/// The first curve of a figure, or a named blockage environment.
pub fn preset(name: &str) -> Result<ScenarioParams> {
    match name {
        "chicago" => Ok(with(base(), |p| p.blockage = BlockageModel { los_fraction: 0.081, los_radius: 250.0 })),
        "manhattan" => Ok(with(base(), |p| p.blockage = BlockageModel { los_fraction: 0.117, los_radius: 200.0 })),
        _ => figure_preset(name)?
            .curves
            .into_iter()
            .next()
            .map(|c| c.params)
            .ok_or_else(|| Error::Unsupported(format!("figure `{name}` has no curves"))),
    }
}

/// Full figure definition with all curves.
pub fn figure_preset(name: &str) -> Result<FigurePreset> {
    let fig = match name {
        "fig1" => FigurePreset {
            name: "fig1",
            title: "secure connectivity, non-colluding eavesdroppers, vs lambda_E",
            axis: Axis::EveIntensity,
            grid: eve_grid(),
            metrics: vec![Metric::TauN],
            curves: [5e-4, 2e-4, 6e-5]
                .iter()
                .map(|&lb| Curve { label: lambda_label("lambda_b", lb), params: with(base(), |p| p.bs_intensity = lb) })
                .collect(),
            microwave: None,
        },
        "fig2" => FigurePreset {
            name: "fig2",
            title: "secure connectivity, colluding eavesdroppers, vs lambda_E",
            axis: Axis::EveIntensity,
            grid: eve_grid(),
            metrics: vec![Metric::TauC, Metric::TauCExact],
            curves: [5e-4, 2e-4, 6e-5]
                .iter()
                .map(|&lb| Curve {
                    label: lambda_label("lambda_b", lb),
                    params: with(base(), |p| {
                        p.bs_intensity = lb;
                        p.eavesdropper_mode = EavesdropperMode::Colluding;
                    }),
                })
                .collect(),
            microwave: None,
        },
        "fig3" => FigurePreset {
            name: "fig3",
            title: "secrecy probability, colluding eavesdroppers, vs T_e",
            axis: Axis::SecrecyThresholdDb,
            grid: linspace(-20.0, 20.0, 9),
            metrics: vec![Metric::PSec],
            curves: [1e-4, 5e-4]
                .iter()
                .map(|&le| Curve {
                    label: lambda_label("lambda_e", le),
                    params: with(base(), |p| {
                        p.bs_intensity = 5e-4;
                        p.eve_intensity = le;
                        p.blockage = BlockageModel { los_fraction: 0.081, los_radius: 250.0 };
                        p.eavesdropper_mode = EavesdropperMode::Colluding;
                    }),
                })
                .collect(),
            microwave: None,
        },
        "fig4" => FigurePreset {
            name: "fig4",
            title: "connection probability with artificial noise vs T_c",
            axis: Axis::ConnectionThresholdDb,
            grid: linspace(-10.0, 30.0, 9),
            metrics: vec![Metric::PCon],
            curves: [1e-4, 1e-3]
                .iter()
                .map(|&lb| Curve {
                    label: lambda_label("lambda_b", lb),
                    params: with(base(), |p| {
                        p.bs_intensity = lb;
                        p.antenna = an(9.0, MAIN_DB, AN_DB, 0.5);
                    }),
                })
                .collect(),
            microwave: None,
        },
        "fig5" => FigurePreset {
            name: "fig5",
            title: "secrecy probability with artificial noise vs T_e",
            axis: Axis::SecrecyThresholdDb,
            grid: linspace(-20.0, 20.0, 9),
            metrics: vec![Metric::PSec],
            curves: [1e-4, 1e-3]
                .iter()
                .map(|&le| Curve {
                    label: lambda_label("lambda_e", le),
                    params: with(base(), |p| {
                        p.bs_intensity = 5e-5;
                        p.eve_intensity = le;
                        p.antenna = an(9.0, MAIN_DB, AN_DB, 0.5);
                    }),
                })
                .collect(),
            microwave: None,
        },
        "fig6" => FigurePreset {
            name: "fig6",
            title: "perfect-link density, noise-limited, vs lambda_E",
            axis: Axis::EveIntensity,
            grid: eve_grid(),
            metrics: vec![Metric::Np],
            curves: SECTORED_PATTERNS
                .iter()
                .flat_map(|&(bw, main, side)| {
                    [EavesdropperMode::NonColluding, EavesdropperMode::Colluding].map(move |mode| Curve {
                        label: format!(
                            "{},{}",
                            pattern_label(bw, main, side),
                            if mode == EavesdropperMode::Colluding { "colluding" } else { "non_colluding" }
                        ),
                        params: with(base(), |p| {
                            p.antenna = sectored(bw, main, side);
                            p.eavesdropper_mode = mode;
                        }),
                    })
                })
                .collect(),
            microwave: None,
        },
        "fig7" => FigurePreset {
            name: "fig7",
            title: "perfect-link density with artificial noise vs phi",
            axis: Axis::PowerSplit,
            grid: phi_grid(),
            metrics: vec![Metric::Np],
            curves: AN_PATTERNS
                .iter()
                .flat_map(|&(bw, main, a)| {
                    [3e-4, 1e-3].map(move |le| Curve {
                        label: format!("{},{}", pattern_label(bw, main, a), lambda_label("lambda_e", le)),
                        params: with(base(), |p| {
                            p.bs_intensity = 8e-4;
                            p.eve_intensity = le;
                            p.antenna = an(bw, main, a, 0.5);
                        }),
                    })
                })
                .collect(),
            microwave: None,
        },
        "fig8" => FigurePreset {
            name: "fig8",
            title: "perfect-link density with artificial noise vs phi and theta_b",
            axis: Axis::PowerSplit,
            grid: phi_grid(),
            metrics: vec![Metric::Np],
            curves: [5.0, 9.0, 15.0, 30.0, 45.0]
                .iter()
                .map(|&bw| Curve {
                    label: format!("theta_b={bw}deg"),
                    params: with(base(), |p| {
                        p.bs_intensity = 8e-4;
                        p.eve_intensity = 1e-3;
                        p.antenna = an(bw, MAIN_DB, AN_DB, 0.5);
                    }),
                })
                .collect(),
            microwave: None,
        },
        "fig9" => FigurePreset {
            name: "fig9",
            title: "mmWave versus microwave perfect-link density vs lambda_E",
            axis: Axis::EveIntensity,
            grid: eve_grid(),
            metrics: vec![Metric::Np],
            curves: vec![Curve {
                label: "mmwave".into(),
                params: with(base(), |p| {
                    p.bs_intensity = 8e-4;
                    p.antenna = an(9.0, MAIN_DB, AN_DB, 0.5);
                    p.thresholds = Thresholds { connection: db_to_linear(0.0), secrecy: db_to_linear(-30.0) };
                }),
            }],
            microwave: Some(microwave_preset()),
        },
        "connectivity" => FigurePreset {
            name: "connectivity",
            title: "secure connectivity, both eavesdropper modes, vs lambda_E",
            axis: Axis::EveIntensity,
            grid: eve_grid(),
            metrics: vec![Metric::Tau],
            curves: SECTORED_PATTERNS
                .iter()
                .flat_map(|&(bw, main, side)| {
                    [EavesdropperMode::NonColluding, EavesdropperMode::Colluding].map(move |mode| Curve {
                        label: format!(
                            "{},{}",
                            pattern_label(bw, main, side),
                            if mode == EavesdropperMode::Colluding { "colluding" } else { "non_colluding" }
                        ),
                        params: with(base(), |p| {
                            p.bs_intensity = 5e-5;
                            p.blockage = BlockageModel { los_fraction: 0.081, los_radius: 250.0 };
                            p.antenna = sectored(bw, main, side);
                            p.eavesdropper_mode = mode;
                        }),
                    })
                })
                .collect(),
            microwave: None,
        },
        "np-grid" => FigurePreset {
            name: "np-grid",
            title: "perfect-link density with artificial noise over phi and lambda_E",
            axis: Axis::PowerSplit,
            grid: phi_grid(),
            metrics: vec![Metric::Np],
            curves: [1e-4, 2e-4, 4e-4, 6e-4, 8e-4, 1e-3]
                .iter()
                .map(|&le| Curve {
                    label: lambda_label("lambda_e", le),
                    params: with(base(), |p| {
                        p.bs_intensity = 1e-3;
                        p.eve_intensity = le;
                        p.antenna = an(30.0, 10.0, AN_DB, 0.5);
                    }),
                })
                .collect(),
            microwave: None,
        },
        other => {
            return Err(Error::Unsupported(format!(
                "unknown preset `{other}` (expected one of {})",
                PRESET_NAMES.join(", ")
            )))
        }
    };
    Ok(fig)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn every_preset_validates() {
        for name in PRESET_NAMES {
            preset(name).unwrap().validate().unwrap();
        }
        for name in FIGURE_NAMES {
            let f = figure_preset(name).unwrap();
            assert!(!f.curves.is_empty());
            for c in &f.curves {
                c.params.validate().unwrap();
            }
            assert!(f.grid.windows(2).all(|w| w[1] > w[0]), "{name}");
        }
        microwave_preset().validate().unwrap();
    }

    #[test]
    fn blockage_environments() {
        let c = preset("chicago").unwrap();
        assert_eq!((c.blockage.los_fraction, c.blockage.los_radius), (0.081, 250.0));
        let m = preset("manhattan").unwrap();
        assert_eq!((m.blockage.los_fraction, m.blockage.los_radius), (0.117, 200.0));
    }

    #[test]
    fn fig2_caption_values() {
        let f = figure_preset("fig2").unwrap();
        let lbs: Vec<f64> = f.curves.iter().map(|c| c.params.bs_intensity).collect();
        assert_eq!(lbs, vec![5e-4, 2e-4, 6e-5]);
        let p = &f.curves[0].params;
        assert_relative_eq!(p.tx_power, 1000.0, max_relative = 1e-12);
        assert_eq!((p.blockage.los_fraction, p.blockage.los_radius), (0.12, 200.0));
        let s = p.sectored().unwrap();
        assert_eq!(s.beamwidth_deg, 9.0);
        assert_relative_eq!(s.main_gain, db_to_linear(15.0));
        assert_relative_eq!(s.side_gain, db_to_linear(-3.0));
        assert_eq!(p.path_loss.beta_los_db, 61.4);
        assert_eq!(p.path_loss.alpha_nlos, 2.92);
    }

    #[test]
    fn fig5_caption_values() {
        let p = preset("fig5").unwrap();
        let a = p.an_pattern().unwrap();
        assert_eq!(a.power_split, 0.5);
        assert_relative_eq!(a.an_gain, db_to_linear(3.0));
        assert_eq!(p.bs_intensity, 5e-5);
    }

    #[test]
    fn microwave_baseline_values() {
        let m = figure_preset("fig9").unwrap().microwave.unwrap();
        assert_eq!(m.path_loss_exponent, 2.7);
        assert_eq!(m.antennas, 6);
        assert_eq!(m.bs_intensity, 8e-4);
        assert_eq!(m.gain_ratio(), 5.0);
        let mm = preset("fig9").unwrap();
        assert_eq!(mm.bs_intensity, 8e-4);
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(preset("fig10"), Err(Error::Unsupported(_))));
    }
}
