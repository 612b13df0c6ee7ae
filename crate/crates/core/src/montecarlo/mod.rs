//! Monte Carlo oracle: samples network realizations around a typical user and
//! estimates every metric with confidence intervals.
//!
//! Trials use independent ChaCha8 streams `(seed, trial)`, are grouped in
//! fixed-size chunks, and chunk accumulators are merged in chunk order, so
//! results do not depend on the number of worker threads.

pub mod an;
pub mod lemmas;
pub mod noise;
pub mod realization;
pub mod stats;

pub use an::{simulate_an, simulate_microwave, AnSimOutput, MICROWAVE_WINDOW};
pub use lemmas::{sample_nearest_distances, sample_plpf_counts, CountEstimate, DistanceSamples};
pub use noise::{simulate_noise_limited, NoiseSimOutput};
pub use realization::{sample_realization, NetworkRealization, RealizationPoint};
pub use stats::{ks_critical_value, ks_statistic, wilson_halfwidth, EmpiricalMetrics};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scenario::{LinkState, ScenarioParams};

/// How the simulation window is sized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindowRule {
    /// `max(5D, R)` with `R` the distance at which the NLOS path gain at `P_t M_s`
    /// is 30 dB below the noise power.
    Auto,
    /// Auto radius scaled by a factor (truncation-adequacy checks).
    Scaled(f64),
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub trials: u64,
    pub seed: u64,
    pub window: WindowRule,
    /// Trials per work unit; part of the reproducibility contract.
    pub chunk_size: u64,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimulationConfig { trials, seed, window: WindowRule::Auto, chunk_size: 500 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::validation("trials", "must be at least 1"));
        }
        if self.chunk_size == 0 {
            return Err(Error::validation("chunk_size", "must be at least 1"));
        }
        match self.window {
            WindowRule::Scaled(f) if !(f > 0.0 && f.is_finite()) => {
                Err(Error::validation("window", "scale must be positive"))
            }
            WindowRule::Fixed(r) if !(r > 0.0 && r.is_finite()) => {
                Err(Error::validation("window", "radius must be positive"))
            }
            _ => Ok(()),
        }
    }
}

/// Window radius for a scenario.
pub fn window_radius(params: &ScenarioParams, rule: WindowRule) -> f64 {
    let auto = || {
        let pl = &params.path_loss;
        let gain = params.tx_power * params.antenna.main_gain() * pl.intercept(LinkState::Nlos);
        let reach = (gain * 1e3 / params.noise_power()).powf(1.0 / pl.alpha_nlos);
        (5.0 * params.blockage.los_radius).max(reach)
    };
    match rule {
        WindowRule::Auto => auto(),
        WindowRule::Scaled(f) => f * auto(),
        WindowRule::Fixed(r) => r,
    }
}

/// Mean aggregate `Σ C g d^{-α}` of a unit-intensity field beyond radius `w`
/// (Campbell's theorem; all links NLOS past the ball). Added to simulated sums
/// in place of the truncated far field.
pub(crate) fn far_field_mean(intercept: f64, alpha: f64, mean_fading: f64, w: f64) -> f64 {
    2.0 * std::f64::consts::PI * intercept * mean_fading * w.powf(2.0 - alpha) / (alpha - 2.0)
}

/// Accumulator merged across chunks in a fixed order.
pub(crate) trait Accumulator: Send {
    fn merge(&mut self, other: Self);
}

impl Accumulator for Vec<u64> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

impl Accumulator for Vec<f64> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            *a += b;
        }
    }
}

impl<A: Accumulator, B: Accumulator> Accumulator for (A, B) {
    fn merge(&mut self, other: Self) {
        self.0.merge(other.0);
        self.1.merge(other.1);
    }
}

/// RNG for one trial.
pub(crate) fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Run `trial` for every trial index with per-chunk scratch space and a
/// deterministic reduction.
pub(crate) fn run_chunked<A, S, NA, NS, T>(config: &SimulationConfig, new_acc: NA, new_scratch: NS, trial: T) -> Result<A>
where
    A: Accumulator,
    NA: Fn() -> A + Sync,
    NS: Fn() -> S + Sync,
    T: Fn(&mut ChaCha8Rng, &mut S, &mut A) + Sync,
{
    config.validate()?;
    let chunks = config.trials.div_ceil(config.chunk_size);
    let parts: Vec<A> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = new_acc();
            let mut scratch = new_scratch();
            let start = c * config.chunk_size;
            let end = (start + config.chunk_size).min(config.trials);
            for t in start..end {
                let mut rng = trial_rng(config.seed, t);
                trial(&mut rng, &mut scratch, &mut acc);
            }
            acc
        })
        .collect();
    let mut iter = parts.into_iter();
    let mut total = iter.next().unwrap_or_else(&new_acc);
    for part in iter {
        total.merge(part);
    }
    Ok(total)
}
