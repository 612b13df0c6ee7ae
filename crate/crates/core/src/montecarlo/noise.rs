//! Noise-limited links with sector antennas.
//!
//! Points that differ only in `λ_E`, `T_c`, `T_e` or eavesdropper mode share
//! realizations: eavesdroppers are drawn at the largest `λ_E` and thinned by
//! a uniform mark, and thresholds are applied to per-trial statistics.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scenario::{EavesdropperMode, LinkState, Metric, ScenarioParams, Thresholds};

use super::realization::{gamma_int, link_state, poisson, RadialArrivals};
use super::{far_field_mean, run_chunked, window_radius, EmpiricalMetrics, SimulationConfig};

const EVENTS: usize = 5;
const TAU_N: usize = 0;
const TAU_C: usize = 1;
const P_CON: usize = 2;
const P_SEC_N: usize = 3;
const P_SEC_C: usize = 4;

/// Per-point empirical metrics of the noise-limited model.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSimOutput {
    pub params: Vec<ScenarioParams>,
    pub tau_n: Vec<EmpiricalMetrics>,
    pub tau_c: Vec<EmpiricalMetrics>,
    pub p_con: Vec<EmpiricalMetrics>,
    pub p_sec_n: Vec<EmpiricalMetrics>,
    pub p_sec_c: Vec<EmpiricalMetrics>,
    /// Fraction of realizations without any BS in the window, per point.
    pub void_fraction: Vec<f64>,
}

impl NoiseSimOutput {
    pub fn metric(&self, point: usize, metric: Metric) -> Result<EmpiricalMetrics> {
        let p = &self.params[point];
        let colluding = p.eavesdropper_mode == EavesdropperMode::Colluding;
        let p_sec = if colluding { self.p_sec_c[point] } else { self.p_sec_n[point] };
        Ok(match metric {
            Metric::Tau => {
                if colluding {
                    self.tau_c[point]
                } else {
                    self.tau_n[point]
                }
            }
            Metric::TauN => self.tau_n[point],
            Metric::TauC | Metric::TauCExact => self.tau_c[point],
            Metric::PCon => self.p_con[point],
            Metric::PSec => p_sec,
            Metric::Np => EmpiricalMetrics::product(p.bs_intensity, &self.p_con[point], &p_sec),
            Metric::Omega => {
                EmpiricalMetrics::product(p.bs_intensity, &self.p_con[point], &p_sec).scaled(p.thresholds.secrecy_rate())
            }
        })
    }
}

/// Parameters with the batched fields cleared.
fn signature(p: &ScenarioParams) -> ScenarioParams {
    let mut s = p.clone();
    s.eve_intensity = 0.0;
    s.thresholds = Thresholds { connection: 0.0, secrecy: 0.0 };
    s.eavesdropper_mode = EavesdropperMode::NonColluding;
    s
}

/// Group point indices by a signature, preserving first-appearance order.
pub(crate) fn group_points<S: PartialEq>(points: &[ScenarioParams], sig: impl Fn(&ScenarioParams) -> S) -> Vec<Vec<usize>> {
    let mut keys: Vec<S> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let k = sig(p);
        match keys.iter().position(|x| *x == k) {
            Some(g) => groups[g].push(i),
            None => {
                keys.push(k);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Sorted distinct values and, per point, the index of its value.
pub(crate) fn levels(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut sorted: Vec<f64> = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let idx = values.iter().map(|v| sorted.iter().position(|s| s == v).unwrap_or(0)).collect();
    (sorted, idx)
}

/// Bucket of a thinning mark: the smallest level whose process keeps the point.
#[inline]
pub(crate) fn bucket(mark: f64, ratios: &[f64]) -> usize {
    ratios.iter().position(|&r| mark < r).unwrap_or(ratios.len())
}

/// Serving link: (path gain C r^{-α}, state), or `None` when no BS lies within `window`.
pub(crate) fn serving_link<R: Rng + ?Sized>(rng: &mut R, params: &ScenarioParams, window: f64) -> Option<(f64, LinkState)> {
    if params.bs_intensity <= 0.0 {
        return None;
    }
    let pl = &params.path_loss;
    let (c, d) = (params.blockage.los_fraction, params.blockage.los_radius);
    let mut arrivals = RadialArrivals::new(params.bs_intensity);
    let mut best: Option<(f64, LinkState)> = None;
    loop {
        let r = arrivals.next(rng);
        if r > window {
            break;
        }
        if r > d {
            if let Some((g, _)) = best {
                if pl.gain(LinkState::Nlos, r) < g {
                    break;
                }
            }
        }
        let state = link_state(rng, r, c, d);
        let g = pl.gain(state, r);
        if best.is_none_or(|(b, _)| g > b) {
            best = Some((g, state));
        }
    }
    best
}

struct Scratch {
    max: Vec<f64>,
    sum: Vec<f64>,
}

/// Simulate a list of sectored noise-limited scenarios.
pub fn simulate_noise_limited(points: &[ScenarioParams], config: &SimulationConfig) -> Result<NoiseSimOutput> {
    config.validate()?;
    for p in points {
        p.validate()?;
        p.sectored()?;
    }
    if points.is_empty() {
        return Err(Error::validation("points", "nothing to simulate"));
    }
    let n = points.len();
    let mut counts = vec![[0u64; EVENTS]; n];
    let mut voids = vec![0u64; n];

    for group in group_points(points, signature) {
        let base = &points[group[0]];
        let pattern = *base.sectored()?;
        let pl = base.path_loss;
        let (c, d) = (base.blockage.los_fraction, base.blockage.los_radius);
        let fading = base.fading;
        let window = window_radius(base, config.window);
        let noise = base.noise_power();
        let tx = base.tx_power;
        let p_main = pattern.main_lobe_probability();

        let lambdas: Vec<f64> = group.iter().map(|&i| points[i].eve_intensity).collect();
        let (lam_levels, lam_idx) = levels(&lambdas);
        let lam_max = *lam_levels.last().unwrap_or(&0.0);
        let ratios: Vec<f64> = lam_levels.iter().map(|l| if lam_max > 0.0 { l / lam_max } else { 0.0 }).collect();
        let nl = lam_levels.len();
        let tcs: Vec<f64> = group.iter().map(|&i| points[i].thresholds.connection).collect();
        let tes: Vec<f64> = group.iter().map(|&i| points[i].thresholds.secrecy).collect();
        let gsize = group.len();
        // far-field eavesdroppers per unit intensity, folded into the colluding sum
        let tail = pattern.gain_levels().iter().map(|(g, p)| g * p).sum::<f64>()
            * far_field_mean(pl.intercept(LinkState::Nlos), pl.alpha_nlos, f64::from(fading.nakagami_nlos), window.max(d));
        let tails: Vec<f64> = lam_levels.iter().map(|l| l * tail).collect();

        let acc = run_chunked(
            config,
            || vec![0u64; gsize * EVENTS + 1],
            || Scratch { max: vec![0.0; nl], sum: vec![0.0; nl] },
            |rng, s, acc: &mut Vec<u64>| {
                // user link
                let user = serving_link(rng, base, window).map(|(g, state)| pattern.main_gain * g * gamma_int(rng, fading.shape(state)));
                // eavesdroppers around the serving BS
                s.max.iter_mut().for_each(|v| *v = 0.0);
                s.sum.iter_mut().for_each(|v| *v = 0.0);
                let count = poisson(rng, lam_max * PI * window * window);
                for _ in 0..count {
                    let b = bucket(rng.random::<f64>(), &ratios);
                    let r = window * rng.random::<f64>().sqrt();
                    let state = link_state(rng, r, c, d);
                    let gain = if rng.random::<f64>() < p_main { pattern.main_gain } else { pattern.side_gain };
                    let y = gain * pl.gain(state, r) * gamma_int(rng, fading.shape(state));
                    if b < nl {
                        s.max[b] = s.max[b].max(y);
                        s.sum[b] += y;
                    }
                }
                for k in 1..nl {
                    s.max[k] = s.max[k].max(s.max[k - 1]);
                    s.sum[k] += s.sum[k - 1];
                }
                for (v, t) in s.sum.iter_mut().zip(&tails) {
                    *v += t;
                }
                match user {
                    None => acc[gsize * EVENTS] += 1,
                    Some(x) => {
                        for (j, &k) in lam_idx.iter().enumerate() {
                            let row = j * EVENTS;
                            acc[row + TAU_N] += u64::from(x >= s.max[k]);
                            acc[row + TAU_C] += u64::from(x >= s.sum[k]);
                            acc[row + P_CON] += u64::from(tx * x >= tcs[j] * noise);
                        }
                    }
                }
                for (j, &k) in lam_idx.iter().enumerate() {
                    let row = j * EVENTS;
                    acc[row + P_SEC_N] += u64::from(tx * s.max[k] <= tes[j] * noise);
                    acc[row + P_SEC_C] += u64::from(tx * s.sum[k] <= tes[j] * noise);
                }
            },
        )?;
        for (j, &i) in group.iter().enumerate() {
            for e in 0..EVENTS {
                counts[i][e] = acc[j * EVENTS + e];
            }
            voids[i] = acc[gsize * EVENTS];
        }
    }

    let m = |i: usize, e: usize| EmpiricalMetrics::from_counts(counts[i][e], config.trials, config.seed);
    Ok(NoiseSimOutput {
        params: points.to_vec(),
        tau_n: (0..n).map(|i| m(i, TAU_N)).collect(),
        tau_c: (0..n).map(|i| m(i, TAU_C)).collect(),
        p_con: (0..n).map(|i| m(i, P_CON)).collect(),
        p_sec_n: (0..n).map(|i| m(i, P_SEC_N)).collect(),
        p_sec_c: (0..n).map(|i| m(i, P_SEC_C)).collect(),
        void_fraction: voids.iter().map(|&v| v as f64 / config.trials as f64).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{db_to_linear, preset};

    fn fig1_points(les: &[f64]) -> Vec<ScenarioParams> {
        les.iter()
            .map(|&le| {
                let mut p = preset("fig1").unwrap();
                p.eve_intensity = le;
                p
            })
            .collect()
    }

    #[test]
    fn zero_threshold_connects_always() {
        let mut pts = fig1_points(&[1e-4]);
        pts[0].thresholds.connection = 0.0;
        let out = simulate_noise_limited(&pts, &SimulationConfig::new(500, 1)).unwrap();
        assert_eq!(out.p_con[0].estimate, 1.0);
        assert_eq!(out.void_fraction[0], 0.0);
    }

    #[test]
    fn colluding_never_beats_non_colluding_on_paired_runs() {
        let pts = fig1_points(&[5e-5, 2e-4, 4e-4]);
        let out = simulate_noise_limited(&pts, &SimulationConfig::new(2000, 7)).unwrap();
        for i in 0..pts.len() {
            assert!(out.tau_c[i].estimate <= out.tau_n[i].estimate);
            assert!(out.p_sec_c[i].estimate <= out.p_sec_n[i].estimate);
        }
        // more eavesdroppers, less security (thinning keeps the runs nested)
        assert!(out.tau_n[0].estimate >= out.tau_n[1].estimate && out.tau_n[1].estimate >= out.tau_n[2].estimate);
    }

    #[test]
    fn batched_matches_single_point_runs() {
        let cfg = SimulationConfig::new(1500, 3);
        let both = simulate_noise_limited(&fig1_points(&[1e-4, 4e-4]), &cfg).unwrap();
        let single = simulate_noise_limited(&fig1_points(&[4e-4]), &cfg).unwrap();
        // the largest level is simulated without thinning either way
        assert_eq!(both.tau_n[1], single.tau_n[0]);
    }

    #[test]
    fn no_eavesdroppers_is_always_secure() {
        let pts = fig1_points(&[0.0]);
        let out = simulate_noise_limited(&pts, &SimulationConfig::new(300, 2)).unwrap();
        assert_eq!(out.tau_n[0].estimate, 1.0);
        assert_eq!(out.p_sec_c[0].estimate, 1.0);
    }

    #[test]
    fn threshold_sweep_is_monotone() {
        let pts: Vec<_> = [-10.0, 0.0, 10.0]
            .iter()
            .map(|&t| {
                let mut p = preset("fig1").unwrap();
                p.thresholds.connection = db_to_linear(t);
                p.thresholds.secrecy = db_to_linear(t);
                p
            })
            .collect();
        let out = simulate_noise_limited(&pts, &SimulationConfig::new(1000, 5)).unwrap();
        assert!(out.p_con[0].estimate >= out.p_con[1].estimate && out.p_con[1].estimate >= out.p_con[2].estimate);
        assert!(out.p_sec_n[0].estimate <= out.p_sec_n[1].estimate && out.p_sec_n[1].estimate <= out.p_sec_n[2].estimate);
    }

    #[test]
    fn bucket_assignment() {
        let ratios = [0.25, 0.5, 1.0];
        assert_eq!(bucket(0.1, &ratios), 0);
        assert_eq!(bucket(0.3, &ratios), 1);
        assert_eq!(bucket(0.99, &ratios), 2);
    }
}
