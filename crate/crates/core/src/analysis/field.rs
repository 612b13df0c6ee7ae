//! Poisson fields of transmitters or receivers with random directional gain,
//! ball blockage and Nakagami fading, seen from the origin.
//!
//! A field contributes three components per gain level: LOS points inside the
//! ball (fraction `C`), NLOS points inside the ball (fraction `1-C`) and NLOS
//! points outside. Both the path-loss-fading intensity measure and the
//! log-Laplace transform of the aggregate are sums over these components.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::gamma::{gamma_real, lower_gamma_scaled, upper_gamma_scaled};
use crate::numerics::{factorial, gauss_2f1_complement, try_integrate, LogLaplace, QuadratureSettings};
use crate::scenario::{BlockageModel, FadingParams, LinkState, PathLossModel, ScenarioParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Region {
    Inside,
    Outside,
}

#[derive(Debug, Clone, Copy)]
struct Component {
    /// level probability × spatial fraction
    weight: f64,
    /// gain × intercept
    vc: f64,
    alpha: f64,
    shape: u32,
    region: Region,
}

#[derive(Debug, Clone)]
pub struct MarkedField {
    intensity: f64,
    radius: f64,
    components: Vec<Component>,
    quad: QuadratureSettings,
}

impl MarkedField {
    /// `levels` are `(gain, probability)` pairs of the random directional gain.
    pub fn new(
        intensity: f64,
        levels: &[(f64, f64)],
        blockage: &BlockageModel,
        path_loss: &PathLossModel,
        fading: &FadingParams,
    ) -> Result<Self> {
        if !(intensity >= 0.0) || !intensity.is_finite() {
            return Err(Error::validation("intensity", format!("{intensity} must be finite and non-negative")));
        }
        let mut components = Vec::new();
        let c = blockage.los_fraction;
        for &(gain, prob) in levels {
            if !(gain > 0.0) || !(0.0..=1.0).contains(&prob) {
                return Err(Error::validation("levels", format!("bad level ({gain}, {prob})")));
            }
            if prob == 0.0 {
                continue;
            }
            for (state, frac, region) in [
                (LinkState::Los, c, Region::Inside),
                (LinkState::Nlos, 1.0 - c, Region::Inside),
                (LinkState::Nlos, 1.0, Region::Outside),
            ] {
                if frac == 0.0 {
                    continue;
                }
                components.push(Component {
                    weight: prob * frac,
                    vc: gain * path_loss.intercept(state),
                    alpha: path_loss.exponent(state),
                    shape: fading.shape(state),
                    region,
                });
            }
        }
        Ok(MarkedField {
            intensity,
            radius: blockage.los_radius,
            components,
            quad: QuadratureSettings::default().with_tolerance(1e-11, 1e-300),
        })
    }

    /// Eavesdroppers seen through the serving BS's sector pattern.
    pub fn eavesdroppers(params: &ScenarioParams) -> Result<Self> {
        let pattern = params.sectored()?;
        Self::new(
            params.eve_intensity,
            &pattern.gain_levels(),
            &params.blockage,
            &params.path_loss,
            &params.fading,
        )
    }

    /// Leaked artificial noise from the BS field at a receiver: only the AN
    /// sector radiates toward a random point.
    pub fn artificial_noise(params: &ScenarioParams) -> Result<Self> {
        let an = params.an_pattern()?;
        Self::new(
            params.bs_intensity,
            &[(an.an_gain, an.an_sector_probability())],
            &params.blockage,
            &params.path_loss,
            &params.fading,
        )
    }

    pub fn intensity(&self) -> f64 {
        self.intensity
    }

    /// `b = D^α / (V C)`: the inverse effective gain at the ball edge.
    fn edge(&self, comp: &Component) -> f64 {
        self.radius.powf(comp.alpha) / comp.vc
    }

    /// Expected number of points whose faded path gain `V C g r^{-α}` is at least `1/t`.
    pub fn intensity_measure(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::domain("intensity_measure", format!("t must be non-negative, got {t}")));
        }
        if t == 0.0 || self.intensity == 0.0 {
            return Ok(0.0);
        }
        if t.is_infinite() {
            return Ok(f64::INFINITY);
        }
        let d2 = self.radius * self.radius;
        let mut total = 0.0;
        for comp in &self.components {
            let x = self.edge(comp) / t;
            let p = 2.0 / comp.alpha;
            let mut sum = 0.0;
            for m in 0..comp.shape {
                let s = m as f64 + p;
                let g = match comp.region {
                    Region::Inside => lower_gamma_scaled(s, x, p),
                    Region::Outside => upper_gamma_scaled(s, x, p),
                };
                sum += g / factorial(m);
            }
            total += comp.weight * d2 / comp.alpha * sum;
        }
        Ok(2.0 * PI * self.intensity * total)
    }

    /// `Ξ(s) = ln E[exp(-s I)]` in closed form through Gauss hypergeometric functions.
    pub fn log_laplace(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::domain("log_laplace", format!("s must be non-negative, got {s}")));
        }
        if s == 0.0 || self.intensity == 0.0 {
            return Ok(0.0);
        }
        if s.is_infinite() {
            return Ok(f64::NEG_INFINITY);
        }
        let d2 = self.radius * self.radius;
        let mut total = 0.0;
        for comp in &self.components {
            let b = self.edge(comp);
            let p = 2.0 / comp.alpha;
            let zs = s / (s + b);
            let zb = b / (s + b);
            let mut sum = 0.0;
            let mut zb_pow = 1.0;
            for m in 0..comp.shape {
                let mf = m as f64;
                let pre = zs * zb_pow;
                sum += match comp.region {
                    Region::Inside => pre / (mf + p) * gauss_2f1_complement(1.0, mf + 1.0, mf + p + 1.0, zs)?,
                    Region::Outside => pre / (1.0 - p) * gauss_2f1_complement(1.0, mf + 1.0, 2.0 - p, zb)?,
                };
                zb_pow *= zb;
            }
            total += comp.weight * d2 / comp.alpha * sum;
        }
        Ok(-2.0 * PI * self.intensity * total)
    }

    /// k-th derivative of Ξ for k ≥ 1 through incomplete beta integrals.
    fn log_laplace_derivative_k(&self, k: usize, s: f64) -> Result<f64> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::domain("log_laplace_derivative", format!("s must be positive and finite, got {s}")));
        }
        if self.intensity == 0.0 {
            return Ok(0.0);
        }
        let kf = k as f64;
        let d2 = self.radius * self.radius;
        let mut total = 0.0;
        for comp in &self.components {
            let bv = self.edge(comp);
            let p = 2.0 / comp.alpha;
            let a = kf - p;
            let bb = comp.shape as f64 + p;
            let t_d = s / (s + bv);
            let beta = match comp.region {
                Region::Inside => incomplete_beta_integral(a, bb, t_d, 1.0, &self.quad)?,
                Region::Outside => incomplete_beta_integral(a, bb, 0.0, t_d, &self.quad)?,
            };
            // (sVC)^{2/α} = D² (s/b)^{2/α}
            let scale = d2 * (s / bv).powf(p) / comp.alpha * s.powi(-(k as i32));
            let pochhammer = gamma_real(comp.shape as f64 + kf) / gamma_real(comp.shape as f64);
            total += comp.weight * scale * pochhammer * beta;
        }
        let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(sign * 2.0 * PI * self.intensity * total)
    }
}

impl LogLaplace for MarkedField {
    fn log_laplace_derivative(&self, order: usize, s: f64) -> Result<f64> {
        if order == 0 {
            self.log_laplace(s)
        } else {
            self.log_laplace_derivative_k(order, s)
        }
    }

    fn max_order(&self) -> usize {
        self.components.iter().map(|c| c.shape as usize).max().unwrap_or(1).max(1) - 1
    }
}

/// `∫_lo^hi t^{a-1} (1-t)^{b-1} dt` for `b > 1`, `0 ≤ lo ≤ hi ≤ 1`.
/// Requires `a > 0` when `lo = 0`.
fn incomplete_beta_integral(a: f64, b: f64, lo: f64, hi: f64, quad: &QuadratureSettings) -> Result<f64> {
    if hi <= lo {
        return Ok(0.0);
    }
    let mid = 0.5;
    let mut total = 0.0;
    let left_hi = hi.min(mid);
    if lo < left_hi {
        if lo == 0.0 {
            if !(a > 0.0) {
                return Err(Error::domain("incomplete_beta_integral", format!("a = {a} must be positive at t = 0")));
            }
            // t = v^{1/a} absorbs the t^{a-1} singularity
            let top = left_hi.powf(a);
            total += try_integrate(|v| Ok((1.0 - v.powf(1.0 / a)).powf(b - 1.0)), 0.0, top, quad)? / a;
        } else {
            // t = e^u spreads a small lower limit over a wide range
            total += try_integrate(
                |u| {
                    let t = u.exp();
                    Ok((a * u).exp() * (1.0 - t).powf(b - 1.0))
                },
                lo.ln(),
                left_hi.ln(),
                quad,
            )?;
        }
    }
    let right_lo = lo.max(mid);
    if right_lo < hi {
        total += try_integrate(|t| Ok(t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0)), right_lo, hi, quad)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{integrate, laplace_derivative, regularized_upper_gamma};
    use crate::scenario::preset;
    use approx::assert_relative_eq;

    fn eve_field(lambda_e: f64) -> (MarkedField, ScenarioParams) {
        let mut p = preset("fig1").unwrap();
        p.eve_intensity = lambda_e;
        (MarkedField::eavesdroppers(&p).unwrap(), p)
    }

    /// `2πλ Σ ∫ r K(V C r^{-α}, N) dr` over the three components by direct radial
    /// quadrature; `knee` is the argument scale at which `K` turns over.
    fn radial_oracle<K: Fn(f64, i32) -> f64>(levels: &[(f64, f64)], p: &ScenarioParams, lambda: f64, knee: f64, kernel: K) -> f64 {
        let d = p.blockage.los_radius;
        let c = p.blockage.los_fraction;
        let q = QuadratureSettings::default().with_tolerance(1e-12, 1e-40);
        let mut total = 0.0;
        for &(v, pv) in levels {
            for (state, frac, lo, hi) in [
                (LinkState::Los, c, 0.0, d),
                (LinkState::Nlos, 1.0 - c, 0.0, d),
                (LinkState::Nlos, 1.0, d, f64::INFINITY),
            ] {
                let cc = p.path_loss.intercept(state);
                let a = p.path_loss.exponent(state);
                let n = p.fading.shape(state) as i32;
                let f = |r: f64| if r == 0.0 { 0.0 } else { r * kernel(v * cc * r.powf(-a), n) };
                // logarithmic radius in unit pieces around the turning point
                let turn = (v * cc * knee).powf(1.0 / a);
                let u0 = if lo > 0.0 { lo.ln() } else { turn.ln() - 40.0 };
                let u1 = if hi.is_finite() { hi.ln() } else { u0.max(turn.ln()) + 120.0 };
                let pieces = ((u1 - u0).ceil() as usize).max(1);
                let step = (u1 - u0) / pieces as f64;
                let mut val = 0.0;
                for i in 0..pieces {
                    let a0 = u0 + step * i as f64;
                    val += integrate(|u: f64| f(u.exp()) * u.exp(), a0, a0 + step, &q).unwrap();
                }
                total += pv * frac * val;
            }
        }
        2.0 * PI * lambda * total
    }

    /// Λ(0,t) from Pr(V C g r^{-α} ≥ 1/t) integrated over the plane.
    fn radial_measure(p: &ScenarioParams, t: f64) -> f64 {
        let levels = p.sectored().unwrap().gain_levels();
        radial_oracle(&levels, p, p.eve_intensity, t, |w, n| regularized_upper_gamma(n as f64, 1.0 / (w * t)).unwrap())
    }

    /// Ξ(s) from E[e^{-s w g}] - 1 integrated over the plane.
    fn radial_log_laplace(levels: &[(f64, f64)], p: &ScenarioParams, lambda: f64, s: f64) -> f64 {
        radial_oracle(levels, p, lambda, s, |w, n| (-(n as f64) * (s * w).ln_1p()).exp_m1())
    }

    /// Ξ^{(k)}(s) from d^k/ds^k of the same integrand.
    fn radial_log_laplace_derivative(levels: &[(f64, f64)], p: &ScenarioParams, lambda: f64, k: i32, s: f64) -> f64 {
        radial_oracle(levels, p, lambda, s, |w, n| {
            let rising: f64 = (0..k).map(|i| (n + i) as f64).product();
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * rising * w.powi(k) * (1.0 + s * w).powi(-(n + k))
        })
    }

    #[test]
    fn intensity_measure_matches_radial_quadrature() {
        let (field, p) = eve_field(1e-4);
        for t in [1e3, 1e7, 1e9, 1e11, 1e13] {
            let closed = field.intensity_measure(t).unwrap();
            let oracle = radial_measure(&p, t);
            assert_relative_eq!(closed, oracle, max_relative = 1e-7);
        }
    }

    #[test]
    fn pinned_reference_values() {
        // 30-digit radial quadrature, fig1 geometry with λ_E = 1e-4
        let (field, _) = eve_field(1e-4);
        assert_relative_eq!(field.intensity_measure(1e3).unwrap(), 7.98800509302951158e-7, max_relative = 1e-10);
        assert_relative_eq!(field.log_laplace(1e4).unwrap(), -2.92286897083125518e-5, max_relative = 1e-8);
        assert_relative_eq!(field.log_laplace_derivative(1, 1e4).unwrap(), -2.48115966182209335e-9, max_relative = 1e-10);
    }

    #[test]
    fn intensity_measure_limits() {
        let (field, _) = eve_field(1e-4);
        assert_eq!(field.intensity_measure(0.0).unwrap(), 0.0);
        assert!(field.intensity_measure(f64::INFINITY).unwrap().is_infinite());
        let (empty, _) = eve_field(0.0);
        assert_eq!(empty.intensity_measure(1e10).unwrap(), 0.0);
        // monotone in t
        let mut prev = 0.0;
        for e in 0..20 {
            let v = field.intensity_measure(10f64.powi(e)).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn log_laplace_matches_radial_quadrature() {
        let (field, p) = eve_field(1e-4);
        let levels = p.sectored().unwrap().gain_levels();
        for s in [1e2, 1e4, 1e5, 1e6, 1e8, 1e10] {
            let closed = field.log_laplace(s).unwrap();
            let oracle = radial_log_laplace(&levels, &p, 1e-4, s);
            assert_relative_eq!(closed, oracle, max_relative = 1e-7);
        }
    }

    #[test]
    fn artificial_noise_field_matches_radial_quadrature() {
        let p = preset("fig4").unwrap();
        let field = MarkedField::artificial_noise(&p).unwrap();
        let an = p.an_pattern().unwrap();
        let levels = [(an.an_gain, an.an_sector_probability())];
        for s in [1e3, 1e6, 1e9] {
            let closed = field.log_laplace(s).unwrap();
            let oracle = radial_log_laplace(&levels, &p, p.bs_intensity, s);
            assert_relative_eq!(closed, oracle, max_relative = 1e-7);
        }
    }

    /// Richardson-extrapolated central difference.
    fn richardson<F: Fn(f64) -> f64>(f: F, s: f64, h: f64) -> f64 {
        let d = |h: f64| (f(s + h) - f(s - h)) / (2.0 * h);
        (4.0 * d(h / 2.0) - d(h)) / 3.0
    }

    #[test]
    fn first_derivative_matches_finite_difference() {
        let mut p = preset("fig2").unwrap();
        p.eve_intensity = 1e-4;
        let field = MarkedField::eavesdroppers(&p).unwrap();
        let s = 1e6;
        let analytic = laplace_derivative(&field, 1, s).unwrap();
        let fd = richardson(|x| field.log_laplace(x).unwrap().exp(), s, 1e3);
        assert_relative_eq!(analytic, fd, max_relative = 1e-6);
    }

    #[test]
    fn higher_derivatives_match_finite_differences() {
        let (field, p) = eve_field(1e-4);
        let levels = p.sectored().unwrap().gain_levels();
        for s in [1e4, 1e7] {
            for k in 1..=2usize {
                let analytic = field.log_laplace_derivative(k, s).unwrap();
                if k > 1 {
                    let fd = richardson(|x| field.log_laplace_derivative(k - 1, x).unwrap(), s, s * 1e-2);
                    assert_relative_eq!(analytic, fd, max_relative = 1e-6);
                }
                let radial = radial_log_laplace_derivative(&levels, &p, 1e-4, k as i32, s);
                assert_relative_eq!(analytic, radial, max_relative = 1e-8);
            }
        }
    }

    #[test]
    fn laplace_is_completely_monotone() {
        let (field, _) = eve_field(3e-4);
        for s in [1e3, 1e6, 1e9] {
            for m in 0..=field.max_order() {
                let v = laplace_derivative(&field, m, s).unwrap();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                assert!(sign * v >= 0.0, "order {m} at s={s}: {v}");
            }
        }
    }

    #[test]
    fn incomplete_beta_against_complete_beta() {
        let q = QuadratureSettings::default().with_tolerance(1e-12, 1e-300);
        let (a, b) = (0.315, 2.68);
        let whole = gamma_real(a) * gamma_real(b) / gamma_real(a + b);
        let split = incomplete_beta_integral(a, b, 0.0, 0.3, &q).unwrap()
            + incomplete_beta_integral(a, b, 0.3, 1.0, &q).unwrap();
        assert_relative_eq!(split, whole, max_relative = 1e-10);
        let tiny = incomplete_beta_integral(a, b, 1e-12, 1.0, &q).unwrap();
        assert_relative_eq!(tiny, whole, max_relative = 1e-3);
    }

    #[test]
    fn invalid_arguments() {
        let (field, _) = eve_field(1e-4);
        assert!(field.log_laplace(-1.0).is_err());
        assert!(field.intensity_measure(f64::NAN).is_err());
        assert!(field.log_laplace_derivative(1, 0.0).is_err());
    }
}
