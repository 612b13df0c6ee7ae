//! Regenerate a figure preset: one CSV per curve plus a summary of tolerance,
//! bound-direction and shape checks.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;

use crate::analysis::{evaluate, AnalysisSettings};
use crate::error::{Error, Result};
use crate::montecarlo::{simulate_microwave, SimulationConfig};
use crate::scenario::{figure_preset, Axis, Metric};
use crate::sweep::{metric_scale, simulate_points, sweep_points, write_csv, Mode, Relation, Row, Status, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureOptions {
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
    pub tolerance: Option<f64>,
}

/// Location of a curve's maximum on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Argmax {
    pub index: usize,
    pub axis_value: f64,
    pub value: f64,
    /// Not at either end of the grid.
    pub interior: bool,
    /// The curve rises to the maximum and falls after it.
    pub unimodal: bool,
}

impl Argmax {
    pub fn of(grid: &[f64], values: &[f64]) -> Option<Argmax> {
        if values.is_empty() {
            return None;
        }
        let (index, &value) = values.iter().enumerate().fold((0, &f64::NEG_INFINITY), |a, b| if *b.1 > *a.1 { b } else { a });
        let unimodal = values[..=index].windows(2).all(|w| w[0] <= w[1]) && values[index..].windows(2).all(|w| w[0] >= w[1]);
        Some(Argmax { index, axis_value: grid[index], value, interior: index > 0 && index + 1 < values.len(), unimodal })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveReport {
    pub label: String,
    pub rows: Vec<Row>,
    pub analytical_argmax: Option<Argmax>,
    pub empirical_argmax: Option<Argmax>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureReport {
    pub name: String,
    pub title: String,
    pub axis: Axis,
    pub curves: Vec<CurveReport>,
    pub checks: Vec<Check>,
}

impl FigureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Write `curve_<k>.csv` for each curve and `summary.txt` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        for (k, c) in self.curves.iter().enumerate() {
            let f = fs::File::create(dir.join(format!("curve_{k}.csv")))?;
            write_csv(std::io::BufWriter::new(f), &c.rows)?;
        }
        fs::write(dir.join("summary.txt"), self.summary())?;
        Ok(())
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "figure {}: {}", self.name, self.title);
        for (k, c) in self.curves.iter().enumerate() {
            let _ = writeln!(s, "curve_{k}: {}", c.label);
            let arg = |name: &str, a: &Option<Argmax>, s: &mut String| {
                if let Some(a) = a {
                    let _ = writeln!(
                        s,
                        "  {name} argmax {}={:.8e} value={:.8e} interior={} unimodal={}",
                        self.axis.name(),
                        a.axis_value,
                        a.value,
                        a.interior,
                        a.unimodal
                    );
                }
            };
            arg("analytical", &c.analytical_argmax, &mut s);
            arg("empirical", &c.empirical_argmax, &mut s);
        }
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        s
    }
}

fn argmax_figure(name: &str) -> bool {
    matches!(name, "fig7" | "fig8" | "np-grid")
}

/// Compute every curve of a figure preset.
pub fn reproduce_figure(name: &str, options: &FigureOptions, settings: &AnalysisSettings) -> Result<FigureReport> {
    let fig = figure_preset(name)?;
    let spec = SweepSpec {
        axis: fig.axis,
        grid: fig.grid.clone(),
        metrics: fig.metrics.clone(),
        trials: options.trials,
        seed: options.seed,
        mode: options.mode,
        tolerance: options.tolerance,
    };
    spec.validate()?;
    settings.validate()?;
    let config = SimulationConfig::new(options.trials, options.seed);

    // all curves in one batch so shared geometries share realizations
    let per_curve: Vec<Vec<_>> = fig.curves.iter().map(|c| sweep_points(&c.params, fig.axis, &fig.grid)).collect::<Result<_>>()?;
    let flat: Vec<_> = per_curve.iter().flatten().cloned().collect();
    let empirical = if options.mode.simulation() { Some(simulate_points(&flat, &fig.metrics, &config)?) } else { None };
    let analytical: Vec<Vec<f64>> = if options.mode.analytical() {
        flat.par_iter()
            .map(|p| fig.metrics.iter().map(|&m| evaluate(p, m, settings)).collect::<Result<Vec<f64>>>())
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let mut curves = Vec::new();
    let mut flat_index = 0;
    for (c, points) in fig.curves.iter().zip(&per_curve) {
        let mut rows = Vec::new();
        for (i, p) in points.iter().enumerate() {
            for (k, &m) in fig.metrics.iter().enumerate() {
                let relation = Relation::of(p, m);
                rows.push(Row {
                    axis: fig.axis,
                    axis_value: fig.grid[i],
                    metric: m,
                    analytical: analytical.get(flat_index).map(|a| a[k]),
                    empirical: empirical.as_ref().map(|e| e[flat_index][k]),
                    relation,
                    tolerance: options.tolerance.unwrap_or_else(|| relation.default_tolerance()) * metric_scale(p, m),
                });
            }
            flat_index += 1;
        }
        let first = fig.metrics[0];
        let series = |f: &dyn Fn(&Row) -> Option<f64>| -> Option<Vec<f64>> {
            rows.iter().filter(|r| r.metric == first).map(f).collect()
        };
        let (analytical_argmax, empirical_argmax) = if argmax_figure(name) {
            (
                series(&|r| r.analytical).and_then(|v| Argmax::of(&fig.grid, &v)),
                series(&|r| r.empirical.map(|e| e.estimate)).and_then(|v| Argmax::of(&fig.grid, &v)),
            )
        } else {
            (None, None)
        };
        curves.push(CurveReport { label: c.label.clone(), rows, analytical_argmax, empirical_argmax });
    }

    if let Some(mw) = &fig.microwave {
        if options.mode.simulation() {
            let sim = simulate_microwave(mw, &fig.grid, &config)?;
            let rows = (0..fig.grid.len())
                .map(|i| {
                    Ok(Row {
                        axis: fig.axis,
                        axis_value: fig.grid[i],
                        metric: Metric::Np,
                        analytical: None,
                        empirical: Some(sim.metric(i, Metric::Np)?),
                        relation: Relation::Exact,
                        tolerance: 0.0,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            curves.push(CurveReport { label: "microwave".into(), rows, analytical_argmax: None, empirical_argmax: None });
        }
    }

    let checks = checks(name, &curves);
    Ok(FigureReport { name: fig.name.into(), title: fig.title.into(), axis: fig.axis, curves, checks })
}

fn checks(name: &str, curves: &[CurveReport]) -> Vec<Check> {
    let mut out = Vec::new();
    for c in curves {
        let failed: Vec<String> = c
            .rows
            .iter()
            .filter(|r| r.status() == Status::Fail)
            .map(|r| format!("{}@{:.3e} (diff {:.3e})", r.metric.name(), r.axis_value, r.abs_diff().unwrap_or(f64::NAN)))
            .collect();
        let compared = c.rows.iter().filter(|r| r.status() != Status::NotCompared).count();
        if compared > 0 {
            out.push(Check {
                name: format!("tolerance {}", c.label),
                passed: failed.is_empty(),
                detail: if failed.is_empty() { format!("{compared} rows within tolerance") } else { failed.join(", ") },
            });
        }
        let wrong: Vec<String> = c
            .rows
            .iter()
            .filter(|r| r.direction_holds() == Some(false))
            .map(|r| format!("{}@{:.3e}", r.metric.name(), r.axis_value))
            .collect();
        if c.rows.iter().any(|r| r.direction_holds().is_some()) {
            out.push(Check {
                name: format!("bound direction {}", c.label),
                passed: wrong.is_empty(),
                detail: if wrong.is_empty() { "analytical bound on the promised side".into() } else { wrong.join(", ") },
            });
        }
    }
    if name == "fig4" && curves.len() >= 2 {
        let a: Option<Vec<f64>> = curves[0].rows.iter().map(|r| r.analytical).collect();
        let b: Option<Vec<f64>> = curves[1].rows.iter().map(|r| r.analytical).collect();
        if let (Some(a), Some(b)) = (a, b) {
            let signs: Vec<bool> = a.iter().zip(&b).map(|(x, y)| x > y).collect();
            let crosses = signs.iter().any(|&s| s) && signs.iter().any(|&s| !s);
            out.push(Check {
                name: "curves cross".into(),
                passed: crosses,
                detail: format!("{} > {} at {} of {} points", curves[0].label, curves[1].label, signs.iter().filter(|&&s| s).count(), signs.len()),
            });
        }
    }
    if name == "fig7" {
        for c in curves {
            if let Some(a) = c.analytical_argmax {
                out.push(Check {
                    name: format!("interior argmax {}", c.label),
                    passed: a.interior && a.unimodal,
                    detail: format!("argmax at {:.2}, interior={}, unimodal={}", a.axis_value, a.interior, a.unimodal),
                });
            }
        }
    }
    if let (Some(mm), Some(mw)) = (curves.iter().find(|c| c.label == "mmwave"), curves.iter().find(|c| c.label == "microwave")) {
        let worse: Vec<String> = mm
            .rows
            .iter()
            .zip(&mw.rows)
            .filter_map(|(a, b)| {
                let (x, y) = (a.empirical?.estimate, b.empirical?.estimate);
                (x < y).then(|| format!("{:.3e}", a.axis_value))
            })
            .collect();
        out.push(Check {
            name: "mmwave dominates microwave".into(),
            passed: worse.is_empty(),
            detail: if worse.is_empty() { "at every grid point".into() } else { format!("fails at {}", worse.join(", ")) },
        });
    }
    out
}

/// Figure names accepted by [`reproduce_figure`].
pub fn check_figure_name(name: &str) -> Result<()> {
    figure_preset(name).map(|_| ()).map_err(|_| Error::Unsupported(format!("unknown figure `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_shapes() {
        let g = [0.0, 1.0, 2.0, 3.0];
        let a = Argmax::of(&g, &[1.0, 3.0, 2.0, 0.5]).unwrap();
        assert_eq!((a.index, a.interior, a.unimodal), (1, true, true));
        let b = Argmax::of(&g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(!b.interior);
        let c = Argmax::of(&g, &[1.0, 3.0, 1.0, 2.0]).unwrap();
        assert!(!c.unimodal);
    }

    #[test]
    fn analytical_fig4_crosses() {
        let opts = FigureOptions { trials: 1000, seed: 1, mode: Mode::Analytical, tolerance: None };
        let r = reproduce_figure("fig4", &opts, &AnalysisSettings::default()).unwrap();
        assert_eq!(r.curves.len(), 2);
        assert!(r.checks.iter().any(|c| c.name == "curves cross" && c.passed));
        assert!(r.summary().contains("figure fig4"));
    }

    #[test]
    fn unknown_figure() {
        assert!(check_figure_name("fig10").is_err());
    }
}
