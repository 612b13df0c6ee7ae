//! Closed-form and single-integral expressions for secure connectivity,
//! connection and secrecy probabilities and the perfect-link density.

pub mod an;
pub mod association;
pub mod field;
pub mod noise;

pub use an::{an_connection_probability, an_secrecy_probability};
pub use association::AssociationLaw;
pub use field::MarkedField;
pub use noise::{
    colluding_secrecy_probability, connection_probability, connectivity_bound, connectivity_exact,
    connectivity_non_colluding, secrecy_probability_non_colluding,
};

use crate::error::{Error, Result};
use crate::numerics::{factorial, QuadratureSettings};
use crate::scenario::{Antenna, EavesdropperMode, Metric, ScenarioParams};

/// Constant `a_j` in the binomial bound on a normalized gamma CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundConstant {
    /// `(N!)^{-1/N}`
    #[default]
    FactorialRoot,
    /// `N^{-1/N}`
    ShapeRoot,
}

impl BoundConstant {
    pub fn value(&self, shape: u32) -> f64 {
        let n = shape as f64;
        match self {
            BoundConstant::FactorialRoot => factorial(shape).powf(-1.0 / n),
            BoundConstant::ShapeRoot => n.powf(-1.0 / n),
        }
    }
}

/// Scale applied to the exponential argument in the colluding secrecy approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SecrecyConstant {
    /// `N (N!)^{-1/N}`: the bound constant for a mean-one gamma variable.
    #[default]
    NormalizedFactorialRoot,
    /// `(N!)^{-1/N}`
    FactorialRoot,
    /// `(N!)^{1/N}`
    InverseFactorialRoot,
}

impl SecrecyConstant {
    pub fn value(&self, terms: u32) -> f64 {
        let n = terms as f64;
        let root = factorial(terms).powf(1.0 / n);
        match self {
            SecrecyConstant::NormalizedFactorialRoot => n / root,
            SecrecyConstant::FactorialRoot => 1.0 / root,
            SecrecyConstant::InverseFactorialRoot => root,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalysisSettings {
    pub quadrature: QuadratureSettings,
    pub bound_constant: BoundConstant,
    /// Number of terms N in the colluding secrecy approximation.
    pub secrecy_terms: u32,
    pub secrecy_constant: SecrecyConstant,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            quadrature: QuadratureSettings::default().with_tolerance(1e-8, 1e-13),
            bound_constant: BoundConstant::default(),
            secrecy_terms: 5,
            secrecy_constant: SecrecyConstant::default(),
        }
    }
}

impl AnalysisSettings {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if self.secrecy_terms == 0 || self.secrecy_terms > 20 {
            return Err(Error::validation("secrecy_terms", "must lie in 1..=20"));
        }
        Ok(())
    }
}

/// Connection and secrecy probabilities with the derived densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecrecyMetrics {
    pub p_con: f64,
    pub p_sec: f64,
    /// Perfect-link density `λ_B p_con p_sec`.
    pub n_p: f64,
    /// Secrecy throughput `N_p R_s`.
    pub omega: f64,
}

/// Connection and secrecy probabilities for the scenario's antenna kind and
/// eavesdropper mode.
pub fn secrecy_metrics(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<SecrecyMetrics> {
    params.validate()?;
    settings.validate()?;
    let (p_con, p_sec) = match params.antenna {
        Antenna::Sectored(_) => {
            let p_con = connection_probability(params, settings)?;
            let p_sec = match params.eavesdropper_mode {
                EavesdropperMode::NonColluding => secrecy_probability_non_colluding(params)?,
                EavesdropperMode::Colluding => colluding_secrecy_probability(params, settings)?,
            };
            (p_con, p_sec)
        }
        Antenna::ArtificialNoise(_) => (
            an_connection_probability(params, settings)?,
            an_secrecy_probability(params, settings)?,
        ),
    };
    let n_p = params.bs_intensity * p_con * p_sec;
    Ok(SecrecyMetrics { p_con, p_sec, n_p, omega: n_p * params.thresholds.secrecy_rate() })
}

/// Evaluate one metric.
pub fn evaluate(params: &ScenarioParams, metric: Metric, settings: &AnalysisSettings) -> Result<f64> {
    params.validate()?;
    settings.validate()?;
    match metric {
        Metric::TauN => connectivity_non_colluding(params, settings),
        Metric::TauC => connectivity_bound(params, settings),
        Metric::TauCExact => connectivity_exact(params, settings),
        Metric::Tau => {
            if let Antenna::ArtificialNoise(_) = params.antenna {
                return Err(Error::Unsupported("secure connectivity with artificial noise".into()));
            }
            match params.eavesdropper_mode {
                EavesdropperMode::NonColluding => connectivity_non_colluding(params, settings),
                EavesdropperMode::Colluding => connectivity_bound(params, settings),
            }
        }
        Metric::PCon => secrecy_metrics_part(params, settings, true),
        Metric::PSec => secrecy_metrics_part(params, settings, false),
        Metric::Np => Ok(secrecy_metrics(params, settings)?.n_p),
        Metric::Omega => Ok(secrecy_metrics(params, settings)?.omega),
    }
}

fn secrecy_metrics_part(params: &ScenarioParams, settings: &AnalysisSettings, connection: bool) -> Result<f64> {
    match (params.antenna, connection) {
        (Antenna::Sectored(_), true) => connection_probability(params, settings),
        (Antenna::Sectored(_), false) => match params.eavesdropper_mode {
            EavesdropperMode::NonColluding => secrecy_probability_non_colluding(params),
            EavesdropperMode::Colluding => colluding_secrecy_probability(params, settings),
        },
        (Antenna::ArtificialNoise(_), true) => an_connection_probability(params, settings),
        (Antenna::ArtificialNoise(_), false) => an_secrecy_probability(params, settings),
    }
}
