//! Network parameterization shared by the analytical and simulation layers.
//!
//! Gains and powers are stored in linear units; decibels only appear in the
//! configuration file (see [`config`]). Beamwidths are stored in degrees and the
//! main-lobe probability of a sectored pattern is `θ_b / 180`, i.e. the main
//! lobe covers `|θ| ≤ θ_b` for a uniformly distributed angle `θ ∈ [-180°, 180°]`.

pub mod config;
pub mod presets;

use crate::error::{Error, Result};

pub use config::{load_scenario, parse_scenario, to_toml};
pub use presets::{figure_preset, microwave_preset, preset, Curve, FigurePreset, MicrowaveParams, FIGURE_NAMES, PRESET_NAMES};

/// dB to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Linear power ratio to dB.
pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Thermal noise power `N_0 = 10^{(-174 + 10 log10(BW) + F_dB)/10}` in linear units (mW).
pub fn noise_power(bandwidth_hz: f64, noise_figure_db: f64) -> Result<f64> {
    if !(bandwidth_hz > 0.0) || !bandwidth_hz.is_finite() {
        return Err(Error::validation("bandwidth_hz", "must be positive"));
    }
    Ok(db_to_linear(noise_power_db(bandwidth_hz, noise_figure_db)))
}

pub fn noise_power_db(bandwidth_hz: f64, noise_figure_db: f64) -> f64 {
    -174.0 + 10.0 * bandwidth_hz.log10() + noise_figure_db
}

/// LOS or NLOS state of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkState {
    Los,
    Nlos,
}

impl LinkState {
    pub const BOTH: [LinkState; 2] = [LinkState::Los, LinkState::Nlos];
}

/// LOS ball: a link shorter than `los_radius` is LOS with probability `los_fraction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockageModel {
    pub los_fraction: f64,
    pub los_radius: f64,
}

impl BlockageModel {
    pub fn los_probability(&self, distance: f64) -> f64 {
        if distance <= self.los_radius {
            self.los_fraction
        } else {
            0.0
        }
    }

    /// Fraction `q_j` of points inside the ball carrying state `j`.
    pub fn state_fraction(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.los_fraction,
            LinkState::Nlos => 1.0 - self.los_fraction,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.los_fraction) {
            return Err(Error::validation("blockage.los_fraction", format!("{} not in [0, 1]", self.los_fraction)));
        }
        if !(self.los_radius > 0.0) || !self.los_radius.is_finite() {
            return Err(Error::validation("blockage.los_radius", "must be positive and finite"));
        }
        Ok(())
    }
}

/// Dual-slope path loss `C_j r^{-α_j}` with `C_j = 10^{-β_j/10}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub beta_los_db: f64,
    pub beta_nlos_db: f64,
}

impl PathLossModel {
    pub fn exponent(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.alpha_los,
            LinkState::Nlos => self.alpha_nlos,
        }
    }

    pub fn intercept(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => db_to_linear(-self.beta_los_db),
            LinkState::Nlos => db_to_linear(-self.beta_nlos_db),
        }
    }

    /// Linear path gain of a link of the given length and state.
    pub fn gain(&self, state: LinkState, distance: f64) -> f64 {
        self.intercept(state) * distance.powf(-self.exponent(state))
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("path_loss.alpha_los", self.alpha_los), ("path_loss.alpha_nlos", self.alpha_nlos)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::validation(name, "exponent must be positive"));
            }
        }
        if !(self.alpha_los < self.alpha_nlos) {
            return Err(Error::validation("path_loss", "requires alpha_los < alpha_nlos"));
        }
        if !(self.alpha_nlos > 2.0) {
            return Err(Error::validation(
                "path_loss.alpha_nlos",
                "must exceed 2 so the aggregate NLOS field is finite",
            ));
        }
        if !(self.intercept(LinkState::Los) > self.intercept(LinkState::Nlos)) {
            return Err(Error::validation("path_loss", "requires C_L > C_N (beta_los_db < beta_nlos_db)"));
        }
        Ok(())
    }
}

/// Two-level sectored pattern; gains are linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaPattern {
    pub main_gain: f64,
    pub side_gain: f64,
    pub beamwidth_deg: f64,
}

impl AntennaPattern {
    /// `Pr(G_b = M_s) = θ_b / 180`.
    pub fn main_lobe_probability(&self) -> f64 {
        self.beamwidth_deg / 180.0
    }

    /// `(gain, probability)` pairs of the random directivity gain seen off-boresight.
    pub fn gain_levels(&self) -> [(f64, f64); 2] {
        let p = self.main_lobe_probability();
        [(self.main_gain, p), (self.side_gain, 1.0 - p)]
    }

    fn validate(&self) -> Result<()> {
        if !(self.side_gain > 0.0) || !(self.main_gain > self.side_gain) || !self.main_gain.is_finite() {
            return Err(Error::validation("antenna", "requires main_gain > side_gain > 0"));
        }
        if !(self.beamwidth_deg > 0.0 && self.beamwidth_deg < 180.0) {
            return Err(Error::validation("antenna.beamwidth_deg", "must lie in (0, 180)"));
        }
        Ok(())
    }
}

/// Sector pattern with artificial noise: `φ P_t` radiated with gain `M_s` inside the
/// information sector and `(1-φ) P_t` with gain `M_a` elsewhere; sidelobes are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnPattern {
    pub info_gain: f64,
    pub an_gain: f64,
    pub beamwidth_deg: f64,
    pub power_split: f64,
}

impl AnPattern {
    /// `Pr_x(M_s) = θ_b / 180`.
    pub fn info_sector_probability(&self) -> f64 {
        self.beamwidth_deg / 180.0
    }

    /// `Pr_x(M_a) = (180 - θ_b) / 180`.
    pub fn an_sector_probability(&self) -> f64 {
        1.0 - self.info_sector_probability()
    }

    fn validate(&self) -> Result<()> {
        if !(self.info_gain > 0.0) || !(self.an_gain > 0.0) || !self.info_gain.is_finite() || !self.an_gain.is_finite() {
            return Err(Error::validation("antenna", "gains must be positive"));
        }
        if !(self.beamwidth_deg > 0.0 && self.beamwidth_deg <= 180.0) {
            return Err(Error::validation("antenna.beamwidth_deg", "must lie in (0, 180]"));
        }
        if !(0.0..=1.0).contains(&self.power_split) {
            return Err(Error::validation("antenna.power_split", format!("{} not in [0, 1]", self.power_split)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Antenna {
    Sectored(AntennaPattern),
    ArtificialNoise(AnPattern),
}

impl Antenna {
    /// Gain of the beam pointed at the intended user.
    pub fn main_gain(&self) -> f64 {
        match self {
            Antenna::Sectored(p) => p.main_gain,
            Antenna::ArtificialNoise(p) => p.info_gain,
        }
    }

    pub fn beamwidth_deg(&self) -> f64 {
        match self {
            Antenna::Sectored(p) => p.beamwidth_deg,
            Antenna::ArtificialNoise(p) => p.beamwidth_deg,
        }
    }
}

/// Integer Nakagami shapes; the small-scale power gain is gamma(N, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FadingParams {
    pub nakagami_los: u32,
    pub nakagami_nlos: u32,
}

impl FadingParams {
    pub fn shape(&self, state: LinkState) -> u32 {
        match state {
            LinkState::Los => self.nakagami_los,
            LinkState::Nlos => self.nakagami_nlos,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.nakagami_los == 0 || self.nakagami_nlos == 0 {
            return Err(Error::validation("fading", "Nakagami shapes must be integers >= 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EavesdropperMode {
    NonColluding,
    Colluding,
}

/// Linear SINR thresholds for connection (`T_c`) and secrecy (`T_e`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub connection: f64,
    pub secrecy: f64,
}

impl Thresholds {
    /// Threshold for a code rate in bits/s/Hz, `T = 2^R - 1`.
    pub fn from_rate(rate_bits: f64) -> f64 {
        2f64.powf(rate_bits) - 1.0
    }

    /// Codeword rate `R_b = log2(1 + T_c)`.
    pub fn codeword_rate(&self) -> f64 {
        (1.0 + self.connection).log2()
    }

    /// Confidential rate `R_s = R_b - R_e`.
    pub fn secrecy_rate(&self) -> f64 {
        self.codeword_rate() - (1.0 + self.secrecy).log2()
    }
}

/// Complete parameterization of one network scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    /// λ_B, points per m².
    pub bs_intensity: f64,
    /// λ_E, points per m².
    pub eve_intensity: f64,
    /// P_t, linear (mW).
    pub tx_power: f64,
    pub bandwidth_hz: f64,
    pub noise_figure_db: f64,
    pub blockage: BlockageModel,
    pub path_loss: PathLossModel,
    pub fading: FadingParams,
    pub antenna: Antenna,
    pub thresholds: Thresholds,
    pub eavesdropper_mode: EavesdropperMode,
}

impl ScenarioParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.bs_intensity >= 0.0) || !self.bs_intensity.is_finite() {
            return Err(Error::validation("bs_intensity", "must be non-negative"));
        }
        if !(self.eve_intensity >= 0.0) || !self.eve_intensity.is_finite() {
            return Err(Error::validation("eve_intensity", "must be non-negative"));
        }
        if !(self.tx_power > 0.0) || !self.tx_power.is_finite() {
            return Err(Error::validation("tx_power", "must be positive"));
        }
        if !(self.bandwidth_hz > 0.0) || !self.bandwidth_hz.is_finite() {
            return Err(Error::validation("bandwidth_hz", "must be positive"));
        }
        if !self.noise_figure_db.is_finite() {
            return Err(Error::validation("noise_figure_db", "must be finite"));
        }
        self.blockage.validate()?;
        self.path_loss.validate()?;
        self.fading.validate()?;
        match &self.antenna {
            Antenna::Sectored(p) => p.validate()?,
            Antenna::ArtificialNoise(p) => p.validate()?,
        }
        let t = &self.thresholds;
        if !(t.connection >= 0.0) || !(t.secrecy >= 0.0) || t.connection.is_nan() || t.secrecy.is_nan() {
            return Err(Error::validation("thresholds", "must be non-negative"));
        }
        Ok(())
    }

    /// Linear noise power derived from bandwidth and noise figure.
    pub fn noise_power(&self) -> f64 {
        db_to_linear(noise_power_db(self.bandwidth_hz, self.noise_figure_db))
    }

    pub fn sectored(&self) -> Result<&AntennaPattern> {
        match &self.antenna {
            Antenna::Sectored(p) => Ok(p),
            Antenna::ArtificialNoise(_) => Err(Error::validation(
                "antenna",
                "operation needs a sectored (non-AN) antenna pattern",
            )),
        }
    }

    pub fn an_pattern(&self) -> Result<&AnPattern> {
        match &self.antenna {
            Antenna::ArtificialNoise(p) => Ok(p),
            Antenna::Sectored(_) => Err(Error::validation(
                "antenna",
                "operation needs an artificial-noise antenna pattern",
            )),
        }
    }

    /// Set one sweepable parameter. Threshold values are given in dB.
    pub fn set_axis(&mut self, axis: Axis, value: f64) -> Result<()> {
        match axis {
            Axis::EveIntensity => self.eve_intensity = value,
            Axis::BsIntensity => self.bs_intensity = value,
            Axis::ConnectionThresholdDb => self.thresholds.connection = db_to_linear(value),
            Axis::SecrecyThresholdDb => self.thresholds.secrecy = db_to_linear(value),
            Axis::PowerSplit => self.an_pattern_mut()?.power_split = value,
            Axis::Beamwidth => match &mut self.antenna {
                Antenna::Sectored(p) => p.beamwidth_deg = value,
                Antenna::ArtificialNoise(p) => p.beamwidth_deg = value,
            },
        }
        self.validate()
    }

    pub fn axis_value(&self, axis: Axis) -> f64 {
        match axis {
            Axis::EveIntensity => self.eve_intensity,
            Axis::BsIntensity => self.bs_intensity,
            Axis::ConnectionThresholdDb => linear_to_db(self.thresholds.connection),
            Axis::SecrecyThresholdDb => linear_to_db(self.thresholds.secrecy),
            Axis::PowerSplit => match &self.antenna {
                Antenna::ArtificialNoise(p) => p.power_split,
                Antenna::Sectored(_) => f64::NAN,
            },
            Axis::Beamwidth => self.antenna.beamwidth_deg(),
        }
    }

    fn an_pattern_mut(&mut self) -> Result<&mut AnPattern> {
        match &mut self.antenna {
            Antenna::ArtificialNoise(p) => Ok(p),
            Antenna::Sectored(_) => Err(Error::validation("antenna.power_split", "only defined for AN patterns")),
        }
    }
}

/// Parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    EveIntensity,
    BsIntensity,
    ConnectionThresholdDb,
    SecrecyThresholdDb,
    PowerSplit,
    Beamwidth,
}

impl Axis {
    pub const ALL: [Axis; 6] = [
        Axis::EveIntensity,
        Axis::BsIntensity,
        Axis::ConnectionThresholdDb,
        Axis::SecrecyThresholdDb,
        Axis::PowerSplit,
        Axis::Beamwidth,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Axis::EveIntensity => "lambda_e",
            Axis::BsIntensity => "lambda_b",
            Axis::ConnectionThresholdDb => "tc_db",
            Axis::SecrecyThresholdDb => "te_db",
            Axis::PowerSplit => "phi",
            Axis::Beamwidth => "theta_b",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .iter()
            .copied()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown axis `{s}` (expected one of lambda_e, lambda_b, tc_db, te_db, phi, theta_b)")))
    }
}

/// Quantities a sweep can report. `Tau`, `PCon` and `PSec` resolve to the
/// formula matching the scenario's antenna kind and eavesdropper mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Secure connectivity for the scenario's eavesdropper mode (bound when colluding).
    Tau,
    TauN,
    /// Colluding secure connectivity, binomial upper bound.
    TauC,
    /// Colluding secure connectivity via Laplace-transform derivatives.
    TauCExact,
    PCon,
    PSec,
    Np,
    /// Secrecy throughput `N_p R_s`.
    Omega,
}

impl Metric {
    pub const ALL: [Metric; 8] = [
        Metric::Tau,
        Metric::TauN,
        Metric::TauC,
        Metric::TauCExact,
        Metric::PCon,
        Metric::PSec,
        Metric::Np,
        Metric::Omega,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Metric::Tau => "tau",
            Metric::TauN => "tau_n",
            Metric::TauC => "tau_c",
            Metric::TauCExact => "tau_c_exact",
            Metric::PCon => "p_con",
            Metric::PSec => "p_sec",
            Metric::Np => "n_p",
            Metric::Omega => "omega",
        }
    }

    /// Whether the value is a probability (as opposed to a density).
    pub fn is_probability(&self) -> bool {
        !matches!(self, Metric::Np | Metric::Omega)
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL.iter().copied().find(|m| m.name() == s).ok_or_else(|| {
            let names: Vec<_> = Metric::ALL.iter().map(|m| m.name()).collect();
            Error::Parse(format!("unknown metric `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn noise_power_examples() {
        assert_relative_eq!(noise_power_db(2e9, 10.0), -70.989_700_043_360_19, max_relative = 1e-12);
        assert_relative_eq!(noise_power(2e9, 10.0).unwrap(), 10f64.powf(-7.098_970_004_336_019), max_relative = 1e-12);
        assert_eq!(noise_power_db(1.0, 0.0), -174.0);
        assert_relative_eq!(noise_power_db(28e6, 7.0), -92.528_419_686_577_8, max_relative = 1e-12);
        assert!(noise_power(0.0, 10.0).is_err());
        assert!(noise_power(-1.0, 10.0).is_err());
    }

    #[test]
    fn db_round_trip() {
        for &v in &[-30.0, -3.0, 0.0, 15.0, 61.4, 72.0] {
            assert_relative_eq!(linear_to_db(db_to_linear(v)), v, max_relative = 1e-12, epsilon = 1e-12);
        }
    }

    #[test]
    fn rate_to_threshold() {
        assert_eq!(Thresholds::from_rate(1.0), 1.0);
        assert_relative_eq!(Thresholds::from_rate(3.0), 7.0);
        let t = Thresholds { connection: 7.0, secrecy: 1.0 };
        assert_relative_eq!(t.secrecy_rate(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gain_pmf_sums_to_one() {
        let p = AntennaPattern { main_gain: 31.6, side_gain: 0.5, beamwidth_deg: 9.0 };
        let total: f64 = p.gain_levels().iter().map(|(_, pr)| pr).sum();
        assert_relative_eq!(total, 1.0);
        assert_relative_eq!(p.main_lobe_probability(), 0.05);
    }

    #[test]
    fn invalid_los_fraction_rejected() {
        let mut s = preset("fig2").unwrap();
        s.blockage.los_fraction = 1.3;
        assert!(matches!(s.validate(), Err(Error::Validation { .. })));
    }

    #[test]
    fn path_loss_regime_enforced() {
        let mut s = preset("fig2").unwrap();
        s.path_loss.beta_los_db = 80.0;
        assert!(s.validate().is_err());
        let mut s = preset("fig2").unwrap();
        s.path_loss.alpha_los = 3.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn axis_names_parse() {
        for a in Axis::ALL {
            assert_eq!(a.name().parse::<Axis>().unwrap(), a);
        }
        assert!("bogus".parse::<Axis>().is_err());
    }

    #[test]
    fn set_axis_updates_and_validates() {
        let mut s = preset("fig7").unwrap();
        s.set_axis(Axis::PowerSplit, 0.3).unwrap();
        assert_eq!(s.axis_value(Axis::PowerSplit), 0.3);
        assert!(s.set_axis(Axis::PowerSplit, 1.5).is_err());
        let mut s = preset("fig1").unwrap();
        assert!(s.set_axis(Axis::PowerSplit, 0.3).is_err());
        s.set_axis(Axis::ConnectionThresholdDb, 10.0).unwrap();
        assert_relative_eq!(s.thresholds.connection, 10.0, max_relative = 1e-12);
    }
}
