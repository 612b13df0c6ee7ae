//! Parameter sweeps comparing analytical values with simulation estimates,
//! and their CSV form.

use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::analysis::{evaluate, AnalysisSettings};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate_an, simulate_noise_limited, EmpiricalMetrics, SimulationConfig};
use crate::scenario::{Antenna, Axis, EavesdropperMode, Metric, ScenarioParams};

/// Which halves of a comparison to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytical,
    Simulation,
    Both,
}

impl Mode {
    pub fn analytical(&self) -> bool {
        matches!(self, Mode::Analytical | Mode::Both)
    }

    pub fn simulation(&self) -> bool {
        matches!(self, Mode::Simulation | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytical" => Ok(Mode::Analytical),
            "simulation" => Ok(Mode::Simulation),
            "both" => Ok(Mode::Both),
            other => Err(Error::Parse(format!("unknown mode `{other}` (expected analytical, simulation or both)"))),
        }
    }
}

/// Smallest trial count accepted when a sweep simulates.
pub const MIN_TRIALS: u64 = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub grid: Vec<f64>,
    pub metrics: Vec<Metric>,
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    /// Overrides the per-metric default tolerance.
    pub tolerance: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    axis: String,
    grid: Vec<f64>,
    metrics: Vec<String>,
    trials: Option<u64>,
    seed: Option<u64>,
    mode: Option<String>,
    tolerance: Option<f64>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::validation("grid", "must not be empty"));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("grid", "values must be finite"));
        }
        let up = self.grid.windows(2).all(|w| w[0] < w[1]);
        let down = self.grid.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) {
            return Err(Error::validation("grid", "must be strictly monotone"));
        }
        if self.metrics.is_empty() {
            return Err(Error::validation("metrics", "must not be empty"));
        }
        if self.mode.simulation() && self.trials < MIN_TRIALS {
            return Err(Error::validation("trials", format!("must be at least {MIN_TRIALS} when simulating")));
        }
        if let Some(t) = self.tolerance {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::validation("tolerance", "must be finite and non-negative"));
            }
        }
        Ok(())
    }

    /// Parse a sweep from TOML with keys `axis`, `grid`, `metrics` and optional
    /// `trials` (default 100000), `seed` (1), `mode` ("both") and `tolerance`.
    pub fn from_toml(text: &str) -> Result<Self> {
        let f: SweepFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let spec = SweepSpec {
            axis: f.axis.parse()?,
            grid: f.grid,
            metrics: f.metrics.iter().map(|m| m.parse()).collect::<Result<_>>()?,
            trials: f.trials.unwrap_or(100_000),
            seed: f.seed.unwrap_or(1),
            mode: f.mode.as_deref().unwrap_or("both").parse()?,
            tolerance: f.tolerance,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// How an analytical value relates to the quantity it approximates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Exact,
    UpperBound,
    LowerBound,
    Approximation,
}

impl Relation {
    pub fn of(params: &ScenarioParams, metric: Metric) -> Relation {
        let colluding = params.eavesdropper_mode == EavesdropperMode::Colluding;
        match (&params.antenna, metric) {
            (Antenna::Sectored(_), Metric::TauC) => Relation::UpperBound,
            (Antenna::Sectored(_), Metric::Tau) if colluding => Relation::UpperBound,
            (Antenna::Sectored(_), Metric::PSec | Metric::Np | Metric::Omega) if colluding => Relation::Approximation,
            (Antenna::Sectored(_), _) => Relation::Exact,
            (Antenna::ArtificialNoise(_), Metric::PCon) => Relation::UpperBound,
            (Antenna::ArtificialNoise(_), Metric::PSec) => Relation::LowerBound,
            (Antenna::ArtificialNoise(_), _) => Relation::Approximation,
        }
    }

    /// Absolute tolerance on the probability scale.
    pub fn default_tolerance(&self) -> f64 {
        match self {
            Relation::Exact | Relation::Approximation => 0.01,
            Relation::UpperBound | Relation::LowerBound => 0.02,
        }
    }
}

/// Scale turning a metric into a probability-like quantity for tolerances.
pub fn metric_scale(params: &ScenarioParams, metric: Metric) -> f64 {
    match metric {
        Metric::Np => params.bs_intensity,
        Metric::Omega => params.bs_intensity * params.thresholds.secrecy_rate(),
        _ => 1.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Only one side was computed.
    NotCompared,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotCompared => "na",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub axis: Axis,
    pub axis_value: f64,
    pub metric: Metric,
    pub analytical: Option<f64>,
    pub empirical: Option<EmpiricalMetrics>,
    pub relation: Relation,
    /// Allowed absolute difference before the 3σ widening, in metric units.
    pub tolerance: f64,
}

impl Row {
    pub fn abs_diff(&self) -> Option<f64> {
        Some((self.analytical? - self.empirical?.estimate).abs())
    }

    /// `|analytical - empirical| ≤ max(tolerance, 3σ)`.
    pub fn status(&self) -> Status {
        match (self.abs_diff(), self.empirical) {
            (Some(d), Some(e)) if d <= self.tolerance.max(3.0 * e.std_error) => Status::Pass,
            (Some(_), _) => Status::Fail,
            _ => Status::NotCompared,
        }
    }

    /// Whether the analytical value sits on the promised side of the estimate (within 3σ).
    pub fn direction_holds(&self) -> Option<bool> {
        let (a, e) = (self.analytical?, self.empirical?);
        match self.relation {
            Relation::UpperBound => Some(a >= e.estimate - 3.0 * e.std_error),
            Relation::LowerBound => Some(a <= e.estimate + 3.0 * e.std_error),
            _ => None,
        }
    }
}

pub const CSV_HEADER: &str = "axis_name,axis_value,metric,analytical,empirical,ci95,abs_diff,status";

/// Scientific notation with 9 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.8e}")
}

fn opt(v: Option<f64>) -> String {
    v.map(format_value).unwrap_or_default()
}

pub fn write_csv<W: Write>(mut w: W, rows: &[Row]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.axis.name(),
            format_value(r.axis_value),
            r.metric.name(),
            opt(r.analytical),
            opt(r.empirical.map(|e| e.estimate)),
            opt(r.empirical.map(|e| e.ci_halfwidth)),
            opt(r.abs_diff()),
            r.status().as_str()
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Scenario copies with the axis set to each grid value.
pub fn sweep_points(params: &ScenarioParams, axis: Axis, grid: &[f64]) -> Result<Vec<ScenarioParams>> {
    grid.iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut p = params.clone();
            p.set_axis(axis, v).map_err(|e| context(e, axis, i, v))?;
            Ok(p)
        })
        .collect()
}

fn context(e: Error, axis: Axis, index: usize, value: f64) -> Error {
    match e {
        Error::Validation { field, detail } => {
            Error::Validation { field, detail: format!("{detail} (grid point {index}, {} = {value})", axis.name()) }
        }
        other => other,
    }
}

/// Simulated estimates for every point and metric, with points batched per antenna kind.
pub fn simulate_points(points: &[ScenarioParams], metrics: &[Metric], config: &SimulationConfig) -> Result<Vec<Vec<EmpiricalMetrics>>> {
    let (an_idx, sec_idx): (Vec<usize>, Vec<usize>) =
        (0..points.len()).partition(|&i| matches!(points[i].antenna, Antenna::ArtificialNoise(_)));
    let mut out: Vec<Vec<EmpiricalMetrics>> = vec![Vec::new(); points.len()];
    if !sec_idx.is_empty() {
        let pts: Vec<_> = sec_idx.iter().map(|&i| points[i].clone()).collect();
        let sim = simulate_noise_limited(&pts, config)?;
        for (k, &i) in sec_idx.iter().enumerate() {
            out[i] = metrics.iter().map(|&m| sim.metric(k, m)).collect::<Result<_>>()?;
        }
    }
    if !an_idx.is_empty() {
        let pts: Vec<_> = an_idx.iter().map(|&i| points[i].clone()).collect();
        let sim = simulate_an(&pts, config)?;
        for (k, &i) in an_idx.iter().enumerate() {
            out[i] = metrics.iter().map(|&m| sim.metric(k, m)).collect::<Result<_>>()?;
        }
    }
    Ok(out)
}

/// Analytical failure at one grid point.
#[derive(Debug)]
pub struct SweepFailure {
    pub index: usize,
    pub value: f64,
    pub error: Error,
}

/// Rows computed so far and the failure that stopped the sweep, if any.
#[derive(Debug)]
pub struct SweepOutcome {
    pub rows: Vec<Row>,
    pub error: Option<SweepFailure>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.rows.iter().all(|r| r.status() != Status::Fail)
    }
}

/// Evaluate a sweep. Rows come out in grid order; an analytical failure stops
/// the sweep at that grid point and keeps the rows before it.
pub fn run_sweep(params: &ScenarioParams, spec: &SweepSpec, settings: &AnalysisSettings) -> Result<SweepOutcome> {
    spec.validate()?;
    settings.validate()?;
    let points = sweep_points(params, spec.axis, &spec.grid)?;
    for &m in &spec.metrics {
        if matches!(params.antenna, Antenna::ArtificialNoise(_))
            && matches!(m, Metric::Tau | Metric::TauN | Metric::TauC | Metric::TauCExact)
        {
            return Err(Error::Unsupported(format!("metric `{}` needs a sectored antenna", m.name())));
        }
    }
    let empirical = if spec.mode.simulation() {
        Some(simulate_points(&points, &spec.metrics, &SimulationConfig::new(spec.trials, spec.seed))?)
    } else {
        None
    };
    let analytical: Vec<Result<Vec<f64>>> = if spec.mode.analytical() {
        points
            .par_iter()
            .map(|p| spec.metrics.iter().map(|&m| evaluate(p, m, settings)).collect())
            .collect()
    } else {
        points.iter().map(|_| Ok(Vec::new())).collect()
    };
    let mut rows = Vec::new();
    for (i, (p, a)) in points.iter().zip(analytical).enumerate() {
        let a = match a {
            Ok(a) => a,
            Err(error) => return Ok(SweepOutcome { rows, error: Some(SweepFailure { index: i, value: spec.grid[i], error }) }),
        };
        for (k, &m) in spec.metrics.iter().enumerate() {
            let relation = Relation::of(p, m);
            rows.push(Row {
                axis: spec.axis,
                axis_value: spec.grid[i],
                metric: m,
                analytical: a.get(k).copied(),
                empirical: empirical.as_ref().map(|e| e[i][k]),
                relation,
                tolerance: spec.tolerance.unwrap_or_else(|| relation.default_tolerance()) * metric_scale(p, m),
            });
        }
    }
    Ok(SweepOutcome { rows, error: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::preset;

    fn spec(grid: Vec<f64>, mode: Mode) -> SweepSpec {
        SweepSpec { axis: Axis::EveIntensity, grid, metrics: vec![Metric::TauN], trials: 1000, seed: 1, mode, tolerance: None }
    }

    #[test]
    fn grid_validation() {
        assert!(spec(vec![], Mode::Analytical).validate().is_err());
        assert!(spec(vec![1e-4, 1e-4], Mode::Analytical).validate().is_err());
        assert!(spec(vec![2e-4, 1e-4], Mode::Analytical).validate().is_ok());
        let mut s = spec(vec![1e-4], Mode::Both);
        s.trials = 999;
        assert!(s.validate().is_err());
        s.mode = Mode::Analytical;
        assert!(s.validate().is_ok());
    }

    #[test]
    fn analytical_mode_leaves_empirical_blank() {
        let out = run_sweep(&preset("fig1").unwrap(), &spec(vec![1e-5, 1e-4], Mode::Analytical), &AnalysisSettings::default()).unwrap();
        assert_eq!(out.rows.len(), 2);
        assert!(out.rows.iter().all(|r| r.empirical.is_none() && r.status() == Status::NotCompared));
        let mut buf = Vec::new();
        write_csv(&mut buf, &out.rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let line = text.lines().nth(1).unwrap();
        assert!(line.starts_with("lambda_e,1.00000000e-5,tau_n,"));
        assert!(line.ends_with(",,,,na"));
    }

    #[test]
    fn sweep_file_round_trip() {
        let s = SweepSpec::from_toml("axis = \"te_db\"\ngrid = [-10.0, 0.0]\nmetrics = [\"p_sec\"]\nmode = \"analytical\"\n").unwrap();
        assert_eq!(s.axis, Axis::SecrecyThresholdDb);
        assert_eq!(s.trials, 100_000);
        assert!(SweepSpec::from_toml("axis = \"te_db\"\ngrid = []\nmetrics = [\"p_sec\"]\n").is_err());
        assert!(SweepSpec::from_toml("axis = \"nope\"\ngrid = [1.0]\nmetrics = [\"p_sec\"]\n").is_err());
    }

    #[test]
    fn status_uses_three_sigma_floor() {
        let e = EmpiricalMetrics { estimate: 0.5, ci_halfwidth: 0.1, std_error: 0.05, trials: 100, seed: 1 };
        let row = Row {
            axis: Axis::EveIntensity,
            axis_value: 1.0,
            metric: Metric::TauN,
            analytical: Some(0.64),
            empirical: Some(e),
            relation: Relation::Exact,
            tolerance: 0.01,
        };
        assert_eq!(row.status(), Status::Pass);
        assert_eq!(Row { analytical: Some(0.66), ..row.clone() }.status(), Status::Fail);
        assert_eq!(Row { relation: Relation::UpperBound, analytical: Some(0.3), ..row }.direction_holds(), Some(false));
    }

    #[test]
    fn tau_rejected_for_artificial_noise() {
        let s = spec(vec![1e-4], Mode::Analytical);
        assert!(run_sweep(&preset("fig4").unwrap(), &s, &AnalysisSettings::default()).is_err());
    }
}
