//! Samplers for the distance laws and the eavesdropper path-loss process.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scenario::{LinkState, ScenarioParams};

use super::realization::{gamma_int, link_state, poisson, RadialArrivals};
use super::trial_rng;

/// Distance samples from independent BS realizations.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DistanceSamples {
    /// Nearest LOS BS, only from realizations that have one.
    pub nearest_los: Vec<f64>,
    pub nearest_nlos: Vec<f64>,
    /// Serving distance, split by the serving link state.
    pub serving_los: Vec<f64>,
    pub serving_nlos: Vec<f64>,
    pub draws: u64,
}

/// Sample nearest-LOS, nearest-NLOS and serving distances from `draws` realizations.
pub fn sample_nearest_distances(params: &ScenarioParams, draws: u64, seed: u64) -> Result<DistanceSamples> {
    params.validate()?;
    if params.bs_intensity <= 0.0 {
        return Err(Error::validation("bs_intensity", "distance laws need a positive BS intensity"));
    }
    let pl = &params.path_loss;
    let (c, d) = (params.blockage.los_fraction, params.blockage.los_radius);
    let mut out = DistanceSamples { draws, ..Default::default() };
    for t in 0..draws {
        let mut rng = trial_rng(seed, t);
        let mut arrivals = RadialArrivals::new(params.bs_intensity);
        let mut los: Option<f64> = None;
        let mut nlos: Option<f64> = None;
        let mut best: Option<(f64, LinkState, f64)> = None;
        loop {
            let r = arrivals.next(&mut rng);
            // LOS only inside the ball; past it, nothing can beat the current best
            let serving_settled = r > d && best.is_some_and(|(g, _, _)| pl.gain(LinkState::Nlos, r) < g);
            if nlos.is_some() && serving_settled {
                break;
            }
            let state = link_state(&mut rng, r, c, d);
            match state {
                LinkState::Los => {
                    los.get_or_insert(r);
                }
                LinkState::Nlos => {
                    nlos.get_or_insert(r);
                }
            }
            let g = pl.gain(state, r);
            if best.is_none_or(|(b, _, _)| g > b) {
                best = Some((g, state, r));
            }
        }
        out.nearest_los.extend(los);
        out.nearest_nlos.extend(nlos);
        if let Some((_, state, r)) = best {
            match state {
                LinkState::Los => out.serving_los.push(r),
                LinkState::Nlos => out.serving_nlos.push(r),
            }
        }
    }
    Ok(out)
}

/// Mean of a count over independent draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountEstimate {
    pub mean: f64,
    pub std_error: f64,
}

/// Average number of eavesdroppers whose inverse gain `1/(G C_j g d^{-α_j})`
/// is at most `t`, for each `t`.
pub fn sample_plpf_counts(params: &ScenarioParams, t_values: &[f64], draws: u64, seed: u64) -> Result<Vec<CountEstimate>> {
    params.validate()?;
    let pattern = *params.sectored()?;
    if draws < 2 {
        return Err(Error::validation("draws", "need at least 2 draws"));
    }
    if t_values.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
        return Err(Error::validation("t", "values must be positive and finite"));
    }
    let pl = &params.path_loss;
    let (c, d) = (params.blockage.los_fraction, params.blockage.los_radius);
    let t_max = t_values.iter().copied().fold(0.0, f64::max);
    // beyond this radius even a fading draw of 60 (tail ~1e-24 for the shapes used) falls short
    let shape_max = params.fading.nakagami_los.max(params.fading.nakagami_nlos) as f64;
    let reach = |state: LinkState| {
        (pattern.main_gain * pl.intercept(state) * t_max * (60.0 + 10.0 * shape_max)).powf(1.0 / pl.exponent(state))
    };
    let window = d.max(reach(LinkState::Nlos));
    let p_main = pattern.main_lobe_probability();
    let mut sum = vec![0.0; t_values.len()];
    let mut sum_sq = vec![0.0; t_values.len()];
    let mut counts = vec![0u64; t_values.len()];
    for k in 0..draws {
        let mut rng = trial_rng(seed, k);
        counts.iter_mut().for_each(|c| *c = 0);
        let n = poisson(&mut rng, params.eve_intensity * PI * window * window);
        for _ in 0..n {
            let r = window * rng.random::<f64>().sqrt();
            let state = link_state(&mut rng, r, c, d);
            let gain = if rng.random::<f64>() < p_main { pattern.main_gain } else { pattern.side_gain };
            let y = gain * pl.gain(state, r) * gamma_int(&mut rng, params.fading.shape(state));
            for (cnt, &t) in counts.iter_mut().zip(t_values) {
                *cnt += u64::from(y * t >= 1.0);
            }
        }
        for i in 0..t_values.len() {
            let v = counts[i] as f64;
            sum[i] += v;
            sum_sq[i] += v * v;
        }
    }
    let n = draws as f64;
    Ok((0..t_values.len())
        .map(|i| {
            let mean = sum[i] / n;
            let var = (sum_sq[i] / n - mean * mean).max(0.0) * n / (n - 1.0);
            CountEstimate { mean, std_error: (var / n).sqrt() }
        })
        .collect())
}
