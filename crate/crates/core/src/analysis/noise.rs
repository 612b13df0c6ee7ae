//! Noise-limited links with sector antennas.

use crate::error::{Error, Result};
use crate::numerics::{binomial, erlang_survival, factorial, laplace_derivative, try_integrate, LogLaplace};
use crate::scenario::{LinkState, ScenarioParams};

use super::{AnalysisSettings, AssociationLaw, MarkedField};

/// Gamma(N, 1) density.
fn gamma_density(shape: u32, w: f64) -> f64 {
    if w <= 0.0 {
        return if shape == 1 && w == 0.0 { 1.0 } else { 0.0 };
    }
    ((shape as f64 - 1.0) * w.ln() - w).exp() / factorial(shape - 1)
}

/// Secure connectivity against non-colluding eavesdroppers: no eavesdropper
/// has a stronger faded path gain than the user.
pub fn connectivity_non_colluding(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<f64> {
    let pattern = params.sectored()?;
    let law = AssociationLaw::new(params, &settings.quadrature)?;
    let eves = MarkedField::eavesdroppers(params)?;
    let inner_quad = settings.quadrature.with_tolerance(settings.quadrature.rel_tol * 0.1, 1e-300);
    let mut total = 0.0;
    for state in LinkState::BOTH {
        let n = params.fading.shape(state);
        let alpha = params.path_loss.exponent(state);
        let c = params.path_loss.intercept(state);
        let v = law.expect(state, &[], |r| {
            let base = r.powf(alpha) / (pattern.main_gain * c);
            try_integrate(
                |w| {
                    if w == 0.0 {
                        return Ok(0.0);
                    }
                    Ok((-eves.intensity_measure(base / w)?).exp() * gamma_density(n, w))
                },
                0.0,
                f64::INFINITY,
                &inner_quad.with_scale(n as f64),
            )
        })?;
        total += law.probability(state) * v;
    }
    Ok(total)
}

/// Probability that the user's SNR exceeds the connection threshold.
pub fn connection_probability(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<f64> {
    let law = AssociationLaw::new(params, &settings.quadrature)?;
    let gain = params.antenna.main_gain();
    let noise = params.noise_power();
    let tc = params.thresholds.connection;
    let mut total = 0.0;
    for state in LinkState::BOTH {
        let n = params.fading.shape(state);
        let alpha = params.path_loss.exponent(state);
        let c = params.path_loss.intercept(state);
        let k = noise * tc / (params.tx_power * gain * c);
        let v = law.expect(state, &[], |r| Ok(erlang_survival(n, k * r.powf(alpha))))?;
        total += law.probability(state) * v;
    }
    Ok(total)
}

/// Probability that every non-colluding eavesdropper's SNR stays below the
/// secrecy threshold.
pub fn secrecy_probability_non_colluding(params: &ScenarioParams) -> Result<f64> {
    let eves = MarkedField::eavesdroppers(params)?;
    let te = params.thresholds.secrecy;
    let t = if te > 0.0 { params.tx_power / (te * params.noise_power()) } else { f64::INFINITY };
    Ok((-eves.intensity_measure(t)?).exp())
}

/// Colluding secure connectivity via Laplace-transform derivatives of the
/// eavesdroppers' aggregate path gain.
pub fn connectivity_exact(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<f64> {
    let pattern = params.sectored()?;
    let law = AssociationLaw::new(params, &settings.quadrature)?;
    let eves = MarkedField::eavesdroppers(params)?;
    let mut total = 0.0;
    for state in LinkState::BOTH {
        let n = params.fading.shape(state) as usize;
        if law.probability(state) > 0.0 && n - 1 > eves.max_order() {
            return Err(Error::Unsupported(format!("fading shape {n} above the supported derivative order")));
        }
        let alpha = params.path_loss.exponent(state);
        let c = params.path_loss.intercept(state);
        let v = law.expect(state, &[], |r| {
            let s = r.powf(alpha) / (pattern.main_gain * c);
            if s == 0.0 {
                return Ok(1.0);
            }
            let mut sum = 0.0;
            let mut coeff = 1.0;
            for m in 0..n {
                sum += coeff * laplace_derivative(&eves, m, s)?;
                coeff *= -s / (m + 1) as f64;
            }
            Ok(sum.clamp(0.0, 1.0))
        })?;
        total += law.probability(state) * v;
    }
    Ok(total)
}

/// Upper bound on colluding secure connectivity from the binomial bound on
/// the gamma CDF.
pub fn connectivity_bound(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<f64> {
    let pattern = params.sectored()?;
    let law = AssociationLaw::new(params, &settings.quadrature)?;
    let eves = MarkedField::eavesdroppers(params)?;
    let mut total = 0.0;
    for state in LinkState::BOTH {
        let n = params.fading.shape(state);
        let a = settings.bound_constant.value(n);
        let alpha = params.path_loss.exponent(state);
        let c = params.path_loss.intercept(state);
        let v = law.expect(state, &[], |r| {
            let s = a * r.powf(alpha) / (pattern.main_gain * c);
            let mut sum = 0.0;
            for k in 1..=n {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                sum += sign * binomial(n, k) * eves.log_laplace(k as f64 * s)?.exp();
            }
            Ok(sum)
        })?;
        total += law.probability(state) * v;
    }
    Ok(total)
}

/// Approximate secrecy probability against colluding eavesdroppers whose
/// aggregate SNR must stay below the secrecy threshold.
pub fn colluding_secrecy_probability(params: &ScenarioParams, settings: &AnalysisSettings) -> Result<f64> {
    let eves = MarkedField::eavesdroppers(params)?;
    let te = params.thresholds.secrecy;
    if te <= 0.0 {
        return Ok(if params.eve_intensity > 0.0 { 0.0 } else { 1.0 });
    }
    let n = settings.secrecy_terms;
    let a = settings.secrecy_constant.value(n);
    let s = a * params.tx_power / (params.noise_power() * te);
    let mut sum = 0.0;
    for k in 1..=n {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        sum += sign * binomial(n, k) * eves.log_laplace(k as f64 * s)?.exp();
    }
    Ok(sum.clamp(0.0, 1.0))
}
