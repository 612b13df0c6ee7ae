//! Artificial-noise (AN) networks.
//!
//! Connection and secrecy events are estimated from independent realizations,
//! matching the product form of the perfect-link density. Points sharing a
//! geometry are batched: eavesdropper intensities by thinning, `φ` and the
//! thresholds through per-trial statistics.

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};
use crate::scenario::{EavesdropperMode, LinkState, Metric, MicrowaveParams, ScenarioParams, Thresholds};

use super::noise::{bucket, group_points, levels};
use super::realization::{gamma_int, poisson, RadialArrivals};
use super::{far_field_mean, run_chunked, window_radius, EmpiricalMetrics, SimulationConfig, WindowRule};

/// Per-point empirical metrics of an AN network.
#[derive(Debug, Clone, PartialEq)]
pub struct AnSimOutput {
    pub bs_intensity: Vec<f64>,
    pub secrecy_rate: Vec<f64>,
    pub p_con: Vec<EmpiricalMetrics>,
    pub p_sec: Vec<EmpiricalMetrics>,
    pub void_fraction: Vec<f64>,
}

impl AnSimOutput {
    pub fn metric(&self, point: usize, metric: Metric) -> Result<EmpiricalMetrics> {
        let np = || EmpiricalMetrics::product(self.bs_intensity[point], &self.p_con[point], &self.p_sec[point]);
        match metric {
            Metric::PCon => Ok(self.p_con[point]),
            Metric::PSec => Ok(self.p_sec[point]),
            Metric::Np => Ok(np()),
            Metric::Omega => Ok(np().scaled(self.secrecy_rate[point])),
            other => Err(Error::Unsupported(format!("metric `{}` is not defined for artificial-noise networks", other.name()))),
        }
    }
}

/// Geometry and link budget shared by a batch of points.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AnModel {
    pub bs_intensity: f64,
    pub los_fraction: f64,
    pub los_radius: f64,
    /// `[LOS, NLOS]`.
    pub alpha: [f64; 2],
    pub intercept: [f64; 2],
    pub shape: [u32; 2],
    pub info_gain: f64,
    pub an_gain: f64,
    /// Half-width of the information sector, degrees.
    pub half_width_deg: f64,
    pub tx_power: f64,
    pub noise: f64,
    pub window: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct AnPoint {
    pub eve_intensity: f64,
    pub phi: f64,
    pub tc: f64,
    pub te: f64,
}

impl AnModel {
    fn from_params(p: &ScenarioParams, rule: WindowRule) -> Result<Self> {
        let an = p.an_pattern()?;
        let pl = &p.path_loss;
        Ok(AnModel {
            bs_intensity: p.bs_intensity,
            los_fraction: p.blockage.los_fraction,
            los_radius: p.blockage.los_radius,
            alpha: [pl.alpha_los, pl.alpha_nlos],
            intercept: [pl.intercept(LinkState::Los), pl.intercept(LinkState::Nlos)],
            shape: [p.fading.nakagami_los, p.fading.nakagami_nlos],
            info_gain: an.info_gain,
            an_gain: an.an_gain,
            half_width_deg: an.beamwidth_deg,
            tx_power: p.tx_power,
            noise: p.noise_power(),
            window: window_radius(p, rule),
        })
    }

    fn microwave(p: &MicrowaveParams, rule: WindowRule) -> Self {
        AnModel {
            bs_intensity: p.bs_intensity,
            los_fraction: 1.0,
            los_radius: f64::INFINITY,
            alpha: [p.path_loss_exponent; 2],
            intercept: [1.0; 2],
            shape: [1; 2],
            info_gain: p.gain_ratio(),
            an_gain: 1.0,
            half_width_deg: p.info_beamwidth_deg,
            tx_power: 1.0,
            noise: 0.0,
            window: match rule {
                WindowRule::Fixed(r) => r,
                WindowRule::Scaled(f) => f * MICROWAVE_WINDOW,
                WindowRule::Auto => MICROWAVE_WINDOW,
            },
        }
    }

    #[inline]
    fn state<R: Rng + ?Sized>(&self, rng: &mut R, d: f64) -> usize {
        if d <= self.los_radius && (self.los_fraction >= 1.0 || rng.random::<f64>() < self.los_fraction) {
            0
        } else {
            1
        }
    }

    /// Path gain times fading for a fresh link of length `d`.
    #[inline]
    fn link<R: Rng + ?Sized>(&self, rng: &mut R, d: f64) -> f64 {
        let s = self.state(rng, d);
        self.intercept[s] * d.powf(-self.alpha[s]) * gamma_int(rng, self.shape[s])
    }
}

/// Window of the interference-limited microwave network, meters.
pub const MICROWAVE_WINDOW: f64 = 1000.0;

struct Bs {
    x: f64,
    y: f64,
    psi: f64,
}

/// Eavesdropper inside the information sector that may decode.
struct Cand {
    sig: f64,
    b: usize,
    x: f64,
    y: f64,
}

struct Scratch {
    /// Path gain, fading, info role of every BS seen by the user.
    links: Vec<(f64, f64, bool)>,
    bss: Vec<Bs>,
    arrivals: Option<RadialArrivals>,
    done: bool,
    cands: Vec<Cand>,
    exposed: Vec<bool>,
}

/// Counts: per point `[connected, secure]`, then one void slot.
fn run_model(model: &AnModel, points: &[AnPoint], config: &SimulationConfig) -> Result<Vec<u64>> {
    let n = points.len();
    let lambdas: Vec<f64> = points.iter().map(|p| p.eve_intensity).collect();
    let (lam_levels, lam_idx) = levels(&lambdas);
    let lam_max = *lam_levels.last().unwrap_or(&0.0);
    let ratios: Vec<f64> = lam_levels.iter().map(|l| if lam_max > 0.0 { l / lam_max } else { 0.0 }).collect();
    let half = model.half_width_deg.to_radians();
    let info_prob = (model.half_width_deg / 180.0).min(1.0);
    let w = model.window;
    let phi_max = points.iter().map(|p| p.phi).fold(0.0, f64::max);
    let te_min = points.iter().map(|p| p.te).fold(f64::INFINITY, f64::min);
    let m = *model;
    // far-field BSs beyond the window, per unit intensity
    let ff = m.bs_intensity * far_field_mean(m.intercept[1], m.alpha[1], f64::from(m.shape[1]), w);

    run_chunked(
        config,
        || vec![0u64; 2 * n + 1],
        || Scratch { links: Vec::new(), bss: Vec::new(), arrivals: None, done: false, cands: Vec::new(), exposed: Vec::new() },
        |rng, s, acc: &mut Vec<u64>| {
            // connection: user at the origin, minimum-path-loss association
            s.links.clear();
            let mut best: Option<usize> = None;
            if m.bs_intensity > 0.0 {
                let mut arr = RadialArrivals::new(m.bs_intensity);
                loop {
                    let r = arr.next(rng);
                    if r > w {
                        break;
                    }
                    let st = m.state(rng, r);
                    let pl = m.intercept[st] * r.powf(-m.alpha[st]);
                    let fading = gamma_int(rng, m.shape[st]);
                    let info = info_prob >= 1.0 || rng.random::<f64>() < info_prob;
                    if best.is_none_or(|b| pl > s.links[b].0) {
                        best = Some(s.links.len());
                    }
                    s.links.push((pl, fading, info));
                }
            }
            match best {
                None => acc[2 * n] += 1,
                Some(b) => {
                    let (mut i_info, mut i_an) = (info_prob * ff, (1.0 - info_prob) * ff);
                    for (k, &(pl, f, info)) in s.links.iter().enumerate() {
                        if k == b {
                            continue;
                        }
                        if info {
                            i_info += pl * f;
                        } else {
                            i_an += pl * f;
                        }
                    }
                    let p = m.tx_power;
                    let sig = p * m.info_gain * s.links[b].0 * s.links[b].1;
                    let (i_info, i_an) = (p * m.info_gain * i_info, p * m.an_gain * i_an);
                    for (j, pt) in points.iter().enumerate() {
                        let ok = pt.phi > 0.0 && pt.phi * sig >= pt.tc * (pt.phi * i_info + (1.0 - pt.phi) * i_an + m.noise);
                        acc[2 * j] += u64::from(ok);
                    }
                }
            }

            // secrecy: serving BS at the origin, eavesdroppers in its information sector
            s.bss.clear();
            s.arrivals = (m.bs_intensity > 0.0).then(|| RadialArrivals::new(m.bs_intensity));
            s.done = s.arrivals.is_none();
            s.cands.clear();
            let psi = PI * (2.0 * rng.random::<f64>() - 1.0);
            let count = poisson(rng, lam_max * PI * w * w * info_prob);
            for _ in 0..count {
                let b = bucket(rng.random::<f64>(), &ratios);
                let r = w * rng.random::<f64>().sqrt();
                let angle = psi + half.min(PI) * (2.0 * rng.random::<f64>() - 1.0);
                let sig = m.tx_power * m.info_gain * m.link(rng, r);
                if b >= lam_levels.len() || phi_max == 0.0 || phi_max * sig < te_min * m.noise {
                    continue;
                }
                s.cands.push(Cand { sig, b, x: r * angle.cos(), y: r * angle.sin() });
            }
            // strongest first: once every point is exposed the rest cannot matter
            s.cands.sort_by(|a, b| b.sig.total_cmp(&a.sig));
            s.exposed.clear();
            s.exposed.resize(n, false);
            for c in &s.cands {
                // largest AN level that still lets this eavesdropper decode at an open point
                let mut stop = f64::NEG_INFINITY;
                let mut noise_only = false;
                for (j, pt) in points.iter().enumerate() {
                    if s.exposed[j] || lam_idx[j] < c.b || pt.phi == 0.0 || pt.phi * c.sig < pt.te * m.noise {
                        continue;
                    }
                    if pt.phi >= 1.0 || pt.te <= 0.0 {
                        noise_only = true;
                    } else {
                        stop = stop.max((pt.phi * c.sig / pt.te - m.noise) / (1.0 - pt.phi));
                    }
                }
                if stop < 0.0 && !noise_only {
                    continue;
                }
                let mut a = 0.0;
                if stop >= 0.0 && m.an_gain > 0.0 && info_prob < 1.0 {
                    let limit = stop / (m.tx_power * m.an_gain);
                    let mut k = 0;
                    loop {
                        if k == s.bss.len() {
                            if s.done {
                                break;
                            }
                            let arr = s.arrivals.as_mut().expect("arrivals present until done");
                            let rb = arr.next(rng);
                            if rb > w {
                                s.done = true;
                                break;
                            }
                            let t = PI * (2.0 * rng.random::<f64>() - 1.0);
                            let bpsi = PI * (2.0 * rng.random::<f64>() - 1.0);
                            s.bss.push(Bs { x: rb * t.cos(), y: rb * t.sin(), psi: bpsi });
                        }
                        let bs = &s.bss[k];
                        k += 1;
                        let (dx, dy) = (c.x - bs.x, c.y - bs.y);
                        let mut off = (dy.atan2(dx) - bs.psi).rem_euclid(2.0 * PI);
                        if off > PI {
                            off = 2.0 * PI - off;
                        }
                        if off <= half {
                            continue;
                        }
                        a += m.link(rng, dx.hypot(dy));
                        if a > limit {
                            break;
                        }
                    }
                    a = (a + (1.0 - info_prob) * ff) * m.tx_power * m.an_gain;
                }
                for (j, pt) in points.iter().enumerate() {
                    if !s.exposed[j]
                        && c.b <= lam_idx[j]
                        && pt.phi > 0.0
                        && pt.phi * c.sig >= pt.te * ((1.0 - pt.phi) * a + m.noise)
                    {
                        s.exposed[j] = true;
                    }
                }
            }
            for j in 0..n {
                acc[2 * j + 1] += u64::from(!s.exposed[j]);
            }
        },
    )
}

fn signature(p: &ScenarioParams) -> ScenarioParams {
    let mut s = p.clone();
    s.eve_intensity = 0.0;
    s.thresholds = Thresholds { connection: 0.0, secrecy: 0.0 };
    s.eavesdropper_mode = EavesdropperMode::NonColluding;
    if let crate::scenario::Antenna::ArtificialNoise(a) = &mut s.antenna {
        a.power_split = 0.0;
    }
    s
}

fn output(counts: &[u64], void: &[u64], bs_intensity: Vec<f64>, secrecy_rate: Vec<f64>, config: &SimulationConfig) -> AnSimOutput {
    let n = bs_intensity.len();
    let m = |c: u64| EmpiricalMetrics::from_counts(c, config.trials, config.seed);
    AnSimOutput {
        bs_intensity,
        secrecy_rate,
        p_con: (0..n).map(|i| m(counts[2 * i])).collect(),
        p_sec: (0..n).map(|i| m(counts[2 * i + 1])).collect(),
        void_fraction: void.iter().map(|&v| v as f64 / config.trials as f64).collect(),
    }
}

/// Simulate a list of AN scenarios (non-colluding eavesdroppers).
pub fn simulate_an(points: &[ScenarioParams], config: &SimulationConfig) -> Result<AnSimOutput> {
    config.validate()?;
    if points.is_empty() {
        return Err(Error::validation("points", "nothing to simulate"));
    }
    for p in points {
        p.validate()?;
        p.an_pattern()?;
    }
    let n = points.len();
    let mut counts = vec![0u64; 2 * n];
    let mut void = vec![0u64; n];
    for group in group_points(points, signature) {
        let model = AnModel::from_params(&points[group[0]], config.window)?;
        let pts: Vec<AnPoint> = group
            .iter()
            .map(|&i| {
                let p = &points[i];
                AnPoint {
                    eve_intensity: p.eve_intensity,
                    phi: p.an_pattern().map(|a| a.power_split).unwrap_or(0.0),
                    tc: p.thresholds.connection,
                    te: p.thresholds.secrecy,
                }
            })
            .collect();
        let acc = run_model(&model, &pts, config)?;
        for (j, &i) in group.iter().enumerate() {
            counts[2 * i] = acc[2 * j];
            counts[2 * i + 1] = acc[2 * j + 1];
            void[i] = acc[2 * group.len()];
        }
    }
    Ok(output(
        &counts,
        &void,
        points.iter().map(|p| p.bs_intensity).collect(),
        points.iter().map(|p| p.thresholds.secrecy_rate()).collect(),
        config,
    ))
}

/// Simulate the interference-limited microwave baseline at each eavesdropper intensity.
///
/// Rayleigh fading, a single path-loss slope, no receiver noise, sector
/// half-width `info_beamwidth_deg` and a confidential-to-AN gain ratio of `M - 1`.
/// `WindowRule::Auto` means a 1 km window.
pub fn simulate_microwave(params: &MicrowaveParams, eve_intensities: &[f64], config: &SimulationConfig) -> Result<AnSimOutput> {
    config.validate()?;
    params.validate()?;
    if eve_intensities.is_empty() {
        return Err(Error::validation("eve_intensities", "nothing to simulate"));
    }
    if eve_intensities.iter().any(|l| !(*l >= 0.0 && l.is_finite())) {
        return Err(Error::validation("eve_intensities", "must be finite and non-negative"));
    }
    let model = AnModel::microwave(params, config.window);
    let pts: Vec<AnPoint> = eve_intensities
        .iter()
        .map(|&le| AnPoint {
            eve_intensity: le,
            phi: params.power_split,
            tc: params.thresholds.connection,
            te: params.thresholds.secrecy,
        })
        .collect();
    let acc = run_model(&model, &pts, config)?;
    let n = pts.len();
    Ok(output(
        &acc[..2 * n],
        &vec![acc[2 * n]; n],
        vec![params.bs_intensity; n],
        vec![params.thresholds.secrecy_rate(); n],
        config,
    ))
}
