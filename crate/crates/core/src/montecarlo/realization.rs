//! Sampling primitives and a full network snapshot.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::scenario::{Antenna, LinkState, ScenarioParams};

/// Gamma(shape, 1) for integer shape: minus the log of a product of uniforms.
#[inline]
pub(crate) fn gamma_int<R: Rng + ?Sized>(rng: &mut R, shape: u32) -> f64 {
    let mut prod = 1.0;
    for _ in 0..shape {
        prod *= 1.0 - rng.random::<f64>();
    }
    -prod.ln()
}

pub(crate) fn poisson<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|d| d.sample(rng) as u64).unwrap_or(0)
}

/// Increasing distances of a homogeneous PPP of intensity `lambda` from the origin.
pub(crate) struct RadialArrivals {
    cumulative: f64,
    scale: f64,
}

impl RadialArrivals {
    pub(crate) fn new(lambda: f64) -> Self {
        RadialArrivals { cumulative: 0.0, scale: 1.0 / (PI * lambda) }
    }

    #[inline]
    pub(crate) fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        self.cumulative -= (1.0 - rng.random::<f64>()).ln();
        (self.cumulative * self.scale).sqrt()
    }
}

/// Link state from the LOS-ball blockage model.
#[inline]
pub(crate) fn link_state<R: Rng + ?Sized>(rng: &mut R, distance: f64, los_fraction: f64, los_radius: f64) -> LinkState {
    if distance <= los_radius && rng.random::<f64>() < los_fraction {
        LinkState::Los
    } else {
        LinkState::Nlos
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealizationPoint {
    pub x: f64,
    pub y: f64,
    /// LOS flag of the link to the receiver of interest (user for BSs,
    /// serving BS for eavesdroppers).
    pub los: bool,
    /// Directional gain on that link.
    pub gain: f64,
    /// Small-scale fading power of that link.
    pub fading: f64,
}

/// Snapshot of one network realization around the typical user at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkRealization {
    pub bs_points: Vec<RealizationPoint>,
    /// Index of the minimum-path-loss BS; `None` marks a void realization.
    pub serving: Option<usize>,
    /// Eavesdroppers, positioned around the serving BS (or the origin when void).
    pub eve_points: Vec<RealizationPoint>,
    pub window_radius: f64,
}

impl NetworkRealization {
    pub fn is_void(&self) -> bool {
        self.serving.is_none()
    }
}

/// Sample BSs and eavesdroppers in a disk of radius `window_radius`.
///
/// BS gains toward the user are the main-lobe gain for the serving BS and an
/// independent sector draw for the others. Eavesdropper gains are independent
/// draws of the serving BS's pattern (sector role for artificial noise:
/// main gain inside the information sector, zero outside).
pub fn sample_realization<R: Rng + ?Sized>(params: &ScenarioParams, window_radius: f64, rng: &mut R) -> NetworkRealization {
    let pl = &params.path_loss;
    let c = params.blockage.los_fraction;
    let d = params.blockage.los_radius;
    let (main, side, p_main) = match params.antenna {
        Antenna::Sectored(a) => (a.main_gain, a.side_gain, a.main_lobe_probability()),
        Antenna::ArtificialNoise(a) => (a.info_gain, 0.0, a.info_sector_probability()),
    };
    let disk_point = |rng: &mut R| {
        let r = window_radius * rng.random::<f64>().sqrt();
        let theta = 2.0 * PI * rng.random::<f64>();
        (r, r * theta.cos(), r * theta.sin())
    };

    let n_bs = poisson(rng, params.bs_intensity * PI * window_radius * window_radius);
    let mut bs_points = Vec::with_capacity(n_bs as usize);
    let mut best: Option<(usize, f64)> = None;
    for i in 0..n_bs as usize {
        let (r, x, y) = disk_point(rng);
        let state = link_state(rng, r, c, d);
        let g = pl.gain(state, r);
        if best.is_none_or(|(_, b)| g > b) {
            best = Some((i, g));
        }
        let gain = if rng.random::<f64>() < p_main { main } else { side };
        let fading = gamma_int(rng, params.fading.shape(state));
        bs_points.push(RealizationPoint { x, y, los: state == LinkState::Los, gain, fading });
    }
    let serving = best.map(|(i, _)| i);
    if let Some(i) = serving {
        bs_points[i].gain = main;
    }
    let (cx, cy) = serving.map(|i| (bs_points[i].x, bs_points[i].y)).unwrap_or((0.0, 0.0));

    let n_eve = poisson(rng, params.eve_intensity * PI * window_radius * window_radius);
    let mut eve_points = Vec::with_capacity(n_eve as usize);
    for _ in 0..n_eve {
        let (r, x, y) = disk_point(rng);
        let state = link_state(rng, r, c, d);
        let gain = if rng.random::<f64>() < p_main { main } else { side };
        let fading = gamma_int(rng, params.fading.shape(state));
        eve_points.push(RealizationPoint { x: cx + x, y: cy + y, los: state == LinkState::Los, gain, fading });
    }
    NetworkRealization { bs_points, serving, eve_points, window_radius }
}
