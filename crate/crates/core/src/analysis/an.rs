//! Sector antennas that spend part of the power on artificial noise.
//!
//! Both results rest on the binomial bound `Pr(g < x) ≥ (1 - e^{-a x})^N` for a
//! unit-scale gamma variable: the connection probability is bounded from
//! above and the secrecy probability from below.

use std::f64::consts::PI;

use crate::error::Result;
use crate::numerics::{binomial, try_integrate, try_integrate_piecewise, QuadratureSettings};
use crate::scenario::{LinkState, ScenarioParams};

use super::{AnalysisSettings, AssociationLaw, MarkedField};

/// `∫_lo^hi ρ [1 - (1 + κ ρ^{-α})^{-N}] dρ`; `hi` may be infinite when `α > 2` and `lo > 0`.
pub(crate) fn radial_interference(kappa: f64, alpha: f64, shape: u32, lo: f64, hi: f64, quad: &QuadratureSettings) -> Result<f64> {
    if !(hi > lo) || kappa == 0.0 {
        return Ok(0.0);
    }
    let n = shape as i32;
    let radial = |rho: f64| -> Result<f64> {
        if rho == 0.0 {
            return Ok(0.0);
        }
        let w = kappa * rho.powf(-alpha);
        Ok(rho * -(-(n as f64) * w.ln_1p()).exp_m1())
    };
    // κ ρ^{-α} = 1 marks the knee of the integrand
    let knee = kappa.powf(1.0 / alpha);
    if hi.is_finite() {
        return try_integrate_piecewise(radial, lo, hi, &[knee], quad);
    }
    let mut total = 0.0;
    let mut start = lo;
    if knee > lo {
        total += try_integrate(radial, lo, knee, quad)?;
        start = knee;
    }
    // t = w/(1+w), v = t^{1-2/α}: the integrand becomes (1-t)^{2/α-1} Σ_{k<N} (1-t)^k / e
    let p = 2.0 / alpha;
    let e = 1.0 - p;
    let w0 = kappa * start.powf(-alpha);
    let t0 = w0 / (1.0 + w0);
    let v0 = t0.powf(e);
    let tail = try_integrate(
        |v| {
            let t = v.powf(1.0 / e);
            let one_minus = 1.0 - t;
            let mut sum = 0.0;
            let mut pow = 1.0;
            for _ in 0..shape {
                sum += pow;
                pow *= one_minus;
            }
            Ok(one_minus.powf(p - 1.0) * sum)
        },
        0.0,
        v0,
        quad,
    )?;
    Ok(total + kappa.powf(p) / alpha / e * tail)
}

/// One interfering sub-field: state, spatial fraction and radial range.
struct Ring {
    state: LinkState,
    fraction: f64,
    lo: f64,
    hi: f64,
}

/// Upper bound on the connection probability with artificial noise.
pub fn an_connection_probability(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<f64> {
    let an = params.an_pattern()?;
    let phi = an.power_split;
    if phi == 0.0 || params.bs_intensity == 0.0 {
        return Ok(0.0);
    }
    let law = AssociationLaw::new(params, &settings.quadrature)?;
    let inner = settings.quadrature.with_tolerance(settings.quadrature.rel_tol * 0.1, 1e-300);
    let pl = &params.path_loss;
    let c = params.blockage.los_fraction;
    let d = params.blockage.los_radius;
    let noise = params.noise_power();
    let tc = params.thresholds.connection;
    let roles = [
        (an.info_gain, phi, an.info_sector_probability()),
        (an.an_gain, 1.0 - phi, an.an_sector_probability()),
    ];
    let lambda = params.bs_intensity;

    let mut total = 0.0;
    for serving in LinkState::BOTH {
        let n = params.fading.shape(serving);
        let a = settings.bound_constant.value(n);
        let alpha = pl.exponent(serving);
        let cj = pl.intercept(serving);
        let v = law.expect(serving, &[], |r| {
            let rings = match serving {
                LinkState::Los => {
                    let rho = law.nlos_equivalent(r);
                    [
                        Ring { state: LinkState::Los, fraction: c, lo: r, hi: d },
                        Ring { state: LinkState::Nlos, fraction: 1.0 - c, lo: rho.min(d), hi: d },
                        Ring { state: LinkState::Nlos, fraction: 1.0, lo: rho.max(d), hi: f64::INFINITY },
                    ]
                }
                LinkState::Nlos => {
                    let rho = law.los_equivalent(r);
                    [
                        Ring { state: LinkState::Los, fraction: c, lo: rho.min(d), hi: d },
                        Ring { state: LinkState::Nlos, fraction: 1.0 - c, lo: r.min(d), hi: d },
                        Ring { state: LinkState::Nlos, fraction: 1.0, lo: r.max(d), hi: f64::INFINITY },
                    ]
                }
            };
            let r_alpha = r.powf(alpha);
            let mut sum = 0.0;
            for k in 1..=n {
                let theta = tc * k as f64 * a / (phi * params.tx_power * an.info_gain * cj);
                let mut exponent = -theta * r_alpha * noise;
                for &(gain, power, prob) in &roles {
                    if prob == 0.0 || power == 0.0 {
                        continue;
                    }
                    for ring in &rings {
                        if ring.fraction == 0.0 {
                            continue;
                        }
                        let kappa = theta * r_alpha * gain * power * params.tx_power * pl.intercept(ring.state);
                        let integral = radial_interference(
                            kappa,
                            pl.exponent(ring.state),
                            params.fading.shape(ring.state),
                            ring.lo,
                            ring.hi,
                            &inner.with_scale(d),
                        )?;
                        exponent -= 2.0 * PI * ring.fraction * lambda * prob * integral;
                    }
                }
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sum += sign * binomial(n, k) * exponent.exp();
            }
            Ok(sum)
        })?;
        total += law.probability(serving) * v;
    }
    Ok(total)
}

/// Lower bound on the secrecy probability with artificial noise against
/// non-colluding eavesdroppers.
pub fn an_secrecy_probability(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<f64> {
    let an = params.an_pattern()?;
    let phi = an.power_split;
    if phi == 0.0 || params.eve_intensity == 0.0 {
        return Ok(1.0);
    }
    let te = params.thresholds.secrecy;
    if te <= 0.0 {
        return Ok(0.0);
    }
    let noise_field = MarkedField::artificial_noise(params)?;
    let pl = &params.path_loss;
    let c = params.blockage.los_fraction;
    let d = params.blockage.los_radius;
    let noise = params.noise_power();
    let quad = settings.quadrature;

    // Ω_j(r): binomial bound on the probability that an eavesdropper at r in the
    // information sector decodes.
    let omega = |state: LinkState, r: f64| -> Result<f64> {
        let n = params.fading.shape(state);
        let a = settings.bound_constant.value(n);
        let base = te * r.powf(pl.exponent(state)) / (phi * an.info_gain * pl.intercept(state));
        let mut sum = 0.0;
        for k in 1..=n {
            let scale = k as f64 * a * base;
            let psi = if phi < 1.0 { noise_field.log_laplace((1.0 - phi) * scale)? } else { 0.0 };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sum += sign * binomial(n, k) * (-scale * noise / params.tx_power + psi).exp();
        }
        Ok(sum * r)
    };
    // distance at which the noise alone drives the decoding probability to ~e^{-1}
    let reach = |state: LinkState| {
        (phi * params.tx_power * an.info_gain * pl.intercept(state) / (te * noise)).powf(1.0 / pl.exponent(state))
    };

    let los_in = if c > 0.0 {
        try_integrate_piecewise(|r| omega(LinkState::Los, r), 0.0, d, &[reach(LinkState::Los)], &quad)?
    } else {
        0.0
    };
    let nlos_in = if c < 1.0 {
        try_integrate_piecewise(|r| omega(LinkState::Nlos, r), 0.0, d, &[reach(LinkState::Nlos)], &quad)?
    } else {
        0.0
    };
    let r_n = reach(LinkState::Nlos);
    let nlos_out = try_integrate_piecewise(
        |r| omega(LinkState::Nlos, r),
        d,
        f64::INFINITY,
        &[r_n],
        &quad.with_scale(r_n.max(d)),
    )?;
    let measure = c * los_in + (1.0 - c) * nlos_in + nlos_out;
    Ok((-2.0 * PI * params.eve_intensity * an.info_sector_probability() * measure).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;
    use crate::scenario::{db_to_linear, preset, Antenna};
    use approx::assert_relative_eq;

    #[test]
    fn radial_interference_matches_direct_quadrature() {
        let q = QuadratureSettings::default().with_tolerance(1e-11, 1e-300);
        for (kappa, alpha, n, lo) in [(1e3, 2.92, 2u32, 50.0), (1e7, 2.92, 2, 250.0), (1e-2, 2.92, 3, 10.0), (5e5, 3.5, 1, 1.0)] {
            let v = radial_interference(kappa, alpha, n, lo, f64::INFINITY, &q).unwrap();
            let f = |rho: f64| rho * -(-(n as f64) * (kappa * rho.powf(-alpha)).ln_1p()).exp_m1();
            // logarithmic radius in unit pieces up to e^{60}·lo, closed-form tail beyond
            let far = lo * 60f64.exp();
            let mut oracle = n as f64 * kappa * far.powf(2.0 - alpha) / (alpha - 2.0);
            for i in 0..60 {
                let u = lo.ln() + i as f64;
                oracle += integrate(|u: f64| f(u.exp()) * u.exp(), u, u + 1.0, &q).unwrap();
            }
            assert_relative_eq!(v, oracle, max_relative = 1e-7);
        }
        // rayleigh with α=4 on [lo,∞): ∫ ρ κ/(ρ^4+κ) dρ = √κ/2 (π/2 - atan(lo²/√κ))
        let (kappa, lo) = (1e4, 3.0);
        let v = radial_interference(kappa, 4.0, 1, lo, f64::INFINITY, &q).unwrap();
        let closed = kappa.sqrt() / 2.0 * (PI / 2.0 - (lo * lo / kappa.sqrt()).atan());
        assert_relative_eq!(v, closed, max_relative = 1e-9);
    }

    #[test]
    fn connection_bounded_and_zero_without_information_power() {
        let mut p = preset("fig4").unwrap();
        let s = AnalysisSettings::default();
        let v = an_connection_probability(&p, &s).unwrap();
        assert!(v > 0.0 && v <= 1.0 + 1e-9, "{v}");
        if let Antenna::ArtificialNoise(ref mut an) = p.antenna {
            an.power_split = 0.0;
        }
        assert_eq!(an_connection_probability(&p, &s).unwrap(), 0.0);
    }

    #[test]
    fn connection_decreases_in_threshold() {
        let mut p = preset("fig4").unwrap();
        let s = AnalysisSettings::default();
        let mut prev = 2.0;
        for tc_db in [-10.0, 0.0, 10.0, 20.0, 30.0] {
            p.thresholds.connection = db_to_linear(tc_db);
            let v = an_connection_probability(&p, &s).unwrap();
            assert!(v < prev, "{tc_db}: {v} >= {prev}");
            prev = v;
        }
    }

    #[test]
    fn secrecy_limits() {
        let mut p = preset("fig5").unwrap();
        let s = AnalysisSettings::default();
        let v = an_secrecy_probability(&p, &s).unwrap();
        assert!(v > 0.0 && v < 1.0);
        p.eve_intensity = 0.0;
        assert_eq!(an_secrecy_probability(&p, &s).unwrap(), 1.0);
    }

    #[test]
    fn secrecy_without_noise_field_matches_noise_limited_binomial() {
        // φ = 1: no artificial noise, so Ω reduces to the binomial bound on the
        // gamma survival function integrated over the plane.
        let mut p = preset("fig5").unwrap();
        if let Antenna::ArtificialNoise(ref mut an) = p.antenna {
            an.power_split = 1.0;
        }
        let s = AnalysisSettings::default();
        let v = an_secrecy_probability(&p, &s).unwrap();
        let an = p.an_pattern().unwrap();
        let q = QuadratureSettings::default().with_tolerance(1e-10, 1e-300);
        let noise = p.noise_power();
        let te = p.thresholds.secrecy;
        let d = p.blockage.los_radius;
        let c = p.blockage.los_fraction;
        let region = |state: LinkState, lo: f64, hi: f64| {
            let n = p.fading.shape(state);
            let a = s.bound_constant.value(n);
            let al = p.path_loss.exponent(state);
            let g = p.path_loss.intercept(state) * an.info_gain * p.tx_power;
            let f = |r: f64| {
                let x = te * noise * r.powf(al) / g;
                r * (1.0 - (1.0 - (-a * x).exp()).powi(n as i32))
            };
            if hi.is_finite() {
                integrate(f, lo, hi, &q).unwrap()
            } else {
                integrate(f, lo, f64::INFINITY, &q.with_scale(1e3)).unwrap()
            }
        };
        let m = c * region(LinkState::Los, 0.0, d) + (1.0 - c) * region(LinkState::Nlos, 0.0, d)
            + region(LinkState::Nlos, d, f64::INFINITY);
        let oracle = (-2.0 * PI * p.eve_intensity * an.info_sector_probability() * m).exp();
        assert_relative_eq!(v, oracle, max_relative = 1e-7);
    }

    #[test]
    fn more_artificial_noise_helps_secrecy() {
        let mut p = preset("fig5").unwrap();
        let s = AnalysisSettings::default();
        let mut prev = 0.0;
        for phi in [0.9, 0.6, 0.3] {
            if let Antenna::ArtificialNoise(ref mut an) = p.antenna {
                an.power_split = phi;
            }
            let v = an_secrecy_probability(&p, &s).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }
}
