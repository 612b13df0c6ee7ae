//! Nearest-BS distance laws and the minimum-path-loss association rule.
//!
//! The serving densities are written in the general form
//! `f_rL(r) = f_dL,uncond(r) · P(no NLOS BS closer than ρ(r)) / A_L` and
//! `f_rN(r) = f_dN(r) · P(no LOS BS closer than ρ'(r)) / A_N`,
//! which coincides with the usual closed forms whenever `μ ≤ D` and stays
//! correct when it is not.

use std::f64::consts::PI;

use crate::error::Result;
use crate::numerics::{try_integrate, try_integrate_piecewise, QuadratureSettings};
use crate::scenario::{LinkState, ScenarioParams};

/// Distance laws of the typical user at the origin.
#[derive(Debug, Clone)]
pub struct AssociationLaw {
    lambda: f64,
    c: f64,
    d: f64,
    c_los: f64,
    c_nlos: f64,
    alpha_los: f64,
    alpha_nlos: f64,
    a_nlos: f64,
    quad: QuadratureSettings,
}

impl AssociationLaw {
    pub fn new(params: &ScenarioParams, quad: &QuadratureSettings) -> Result<Self> {
        let pl = &params.path_loss;
        let mut law = AssociationLaw {
            lambda: params.bs_intensity,
            c: params.blockage.los_fraction,
            d: params.blockage.los_radius,
            c_los: pl.intercept(LinkState::Los),
            c_nlos: pl.intercept(LinkState::Nlos),
            alpha_los: pl.alpha_los,
            alpha_nlos: pl.alpha_nlos,
            a_nlos: f64::NAN,
            quad: *quad,
        };
        law.a_nlos = law.compute_a_nlos()?;
        Ok(law)
    }

    pub fn a_los(&self) -> f64 {
        1.0 - self.a_nlos
    }

    pub fn a_nlos(&self) -> f64 {
        self.a_nlos
    }

    pub fn probability(&self, state: LinkState) -> f64 {
        match state {
            LinkState::Los => self.a_los(),
            LinkState::Nlos => self.a_nlos(),
        }
    }

    pub fn los_radius(&self) -> f64 {
        self.d
    }

    /// Radius beyond which every NLOS BS is weaker than a LOS BS at `r`.
    pub fn nlos_equivalent(&self, r: f64) -> f64 {
        (self.c_nlos / self.c_los).powf(1.0 / self.alpha_nlos) * r.powf(self.alpha_los / self.alpha_nlos)
    }

    /// Radius beyond which every LOS BS is weaker than a NLOS BS at `r`.
    pub fn los_equivalent(&self, r: f64) -> f64 {
        (self.c_los / self.c_nlos).powf(1.0 / self.alpha_los) * r.powf(self.alpha_nlos / self.alpha_los)
    }

    /// `μ = (C_L/C_N)^{-1/α_N} D^{α_L/α_N}`: a NLOS BS farther than μ never beats a LOS BS in the ball.
    pub fn mu(&self) -> f64 {
        self.nlos_equivalent(self.d)
    }

    /// Expected number of NLOS BSs inside radius ρ.
    fn nlos_count(&self, rho: f64) -> f64 {
        let inner = rho.min(self.d);
        (1.0 - self.c) * self.lambda * PI * inner * inner + self.lambda * PI * (rho * rho - self.d * self.d).max(0.0)
    }

    /// Expected number of LOS BSs inside radius ρ.
    fn los_count(&self, rho: f64) -> f64 {
        let inner = rho.min(self.d);
        self.c * self.lambda * PI * inner * inner
    }

    /// Probability that the LOS ball holds no LOS BS.
    pub fn no_los_probability(&self) -> f64 {
        (-self.los_count(self.d)).exp()
    }

    /// Density of the nearest LOS BS distance given at least one LOS BS exists.
    pub fn nearest_los_pdf(&self, r: f64) -> f64 {
        if !(0.0..=self.d).contains(&r) || self.c == 0.0 || self.lambda == 0.0 {
            return 0.0;
        }
        let cl = self.c * self.lambda;
        2.0 * PI * cl * r * (-PI * cl * r * r).exp() / (-(-PI * cl * self.d * self.d).exp_m1())
    }

    pub fn nearest_los_cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        if r >= self.d {
            return 1.0;
        }
        let cl = self.c * self.lambda;
        (-PI * cl * r * r).exp_m1() / (-PI * cl * self.d * self.d).exp_m1()
    }

    /// Density of the nearest NLOS BS distance.
    pub fn nearest_nlos_pdf(&self, r: f64) -> f64 {
        if r < 0.0 {
            return 0.0;
        }
        let intensity = if r <= self.d { (1.0 - self.c) * self.lambda } else { self.lambda };
        2.0 * PI * intensity * r * (-self.nlos_count(r)).exp()
    }

    pub fn nearest_nlos_cdf(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        -(-self.nlos_count(r)).exp_m1()
    }

    /// Unconditional density of the serving distance restricted to one branch;
    /// integrates to `A_j`.
    pub fn serving_joint_pdf(&self, state: LinkState, r: f64) -> f64 {
        if r < 0.0 {
            return 0.0;
        }
        match state {
            LinkState::Los => {
                if r > self.d {
                    return 0.0;
                }
                let cl = self.c * self.lambda;
                2.0 * PI * cl * r * (-PI * cl * r * r - self.nlos_count(self.nlos_equivalent(r))).exp()
            }
            LinkState::Nlos => self.nearest_nlos_pdf(r) * (-self.los_count(self.los_equivalent(r))).exp(),
        }
    }

    /// Serving-distance density conditioned on the branch.
    pub fn serving_pdf(&self, state: LinkState, r: f64) -> f64 {
        let a = self.probability(state);
        if a <= 0.0 {
            return 0.0;
        }
        self.serving_joint_pdf(state, r) / a
    }

    /// Breakpoints of the branch density.
    fn breaks(&self, state: LinkState) -> Vec<f64> {
        match state {
            LinkState::Los => vec![self.nlos_equivalent_inverse_d()],
            LinkState::Nlos => vec![self.mu(), self.d],
        }
    }

    /// LOS distance at which ρ(r) reaches D (kink of f_rL when it lies inside the ball).
    fn nlos_equivalent_inverse_d(&self) -> f64 {
        (self.d * (self.c_los / self.c_nlos).powf(1.0 / self.alpha_nlos)).powf(self.alpha_nlos / self.alpha_los)
    }

    /// Length scale of the NLOS tail.
    pub fn tail_scale(&self) -> f64 {
        if self.lambda > 0.0 {
            (1.0 / (PI * self.lambda)).sqrt().max(self.d)
        } else {
            self.d
        }
    }

    /// `∫ f_{r_j}(r) g(r) dr` over the support of branch `j`. Extra breakpoints
    /// mark features of `g`. Returns 0 for a branch of zero probability.
    pub fn expect<G>(&self, state: LinkState, extra_breaks: &[f64], mut g: G) -> Result<f64>
    where
        G: FnMut(f64) -> Result<f64>,
    {
        let a = self.probability(state);
        if !(a > 0.0) || self.lambda == 0.0 {
            return Ok(0.0);
        }
        let mut breaks = self.breaks(state);
        breaks.extend_from_slice(extra_breaks);
        let integrand = |r: f64| -> Result<f64> {
            let p = self.serving_joint_pdf(state, r);
            if p == 0.0 {
                return Ok(0.0);
            }
            Ok(p * g(r)?)
        };
        let v = match state {
            LinkState::Los => try_integrate_piecewise(integrand, 0.0, self.d, &breaks, &self.quad)?,
            LinkState::Nlos => {
                let quad = self.quad.with_scale(self.tail_scale());
                try_integrate_piecewise(integrand, 0.0, f64::INFINITY, &breaks, &quad)?
            }
        };
        Ok(v / a)
    }

    /// `A_N` from the NLOS-distance representation; the integrand vanishes past μ.
    fn compute_a_nlos(&self) -> Result<f64> {
        if self.lambda == 0.0 {
            return Ok(1.0);
        }
        let p_empty = self.no_los_probability();
        let mu = self.mu();
        let tail = try_integrate(
            |x| {
                let rho = self.los_equivalent(x);
                let diff = (-self.los_count(rho)).exp() - p_empty;
                Ok(diff.max(0.0) * self.nearest_nlos_pdf(x))
            },
            0.0,
            mu,
            &self.quad,
        )?;
        Ok((p_empty + tail).clamp(0.0, 1.0))
    }

    /// `A_L` from its own integral, used as an independent consistency check.
    pub fn a_los_direct(&self) -> Result<f64> {
        if self.lambda == 0.0 || self.c == 0.0 {
            return Ok(0.0);
        }
        try_integrate_piecewise(
            |r| Ok(self.serving_joint_pdf(LinkState::Los, r)),
            0.0,
            self.d,
            &self.breaks(LinkState::Los),
            &self.quad,
        )
    }

    /// Conditional CDF of the serving distance on branch `j`.
    pub fn serving_cdf(&self, state: LinkState, r: f64) -> Result<f64> {
        let a = self.probability(state);
        if !(a > 0.0) || r <= 0.0 {
            return Ok(0.0);
        }
        let hi = match state {
            LinkState::Los => r.min(self.d),
            LinkState::Nlos => r,
        };
        let v = try_integrate_piecewise(
            |x| Ok(self.serving_joint_pdf(state, x)),
            0.0,
            hi,
            &self.breaks(state),
            &self.quad,
        )?;
        Ok((v / a).clamp(0.0, 1.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::integrate;
    use crate::scenario::preset;
    use approx::assert_relative_eq;

    fn law(name: &str, lambda: f64) -> AssociationLaw {
        let mut p = preset(name).unwrap();
        p.bs_intensity = lambda;
        AssociationLaw::new(&p, &QuadratureSettings::default()).unwrap()
    }

    /// Direct transcription of the A_N integral with the μ upper limit.
    fn a_nlos_closed(p: &ScenarioParams) -> f64 {
        let (c, d, lb) = (p.blockage.los_fraction, p.blockage.los_radius, p.bs_intensity);
        let cl = p.path_loss.intercept(LinkState::Los);
        let cn = p.path_loss.intercept(LinkState::Nlos);
        let (al, an) = (p.path_loss.alpha_los, p.path_loss.alpha_nlos);
        let mu = (cl / cn).powf(-1.0 / an) * d.powf(al / an);
        let f = |x: f64| {
            ((-PI * c * lb * (cl / cn).powf(2.0 / al) * x.powf(2.0 * an / al)).exp() - (-PI * c * lb * d * d).exp())
                * 2.0
                * PI
                * (1.0 - c)
                * lb
                * x
                * (-PI * (1.0 - c) * lb * x * x).exp()
        };
        integrate(f, 0.0, mu, &QuadratureSettings::default()).unwrap() + (-PI * c * lb * d * d).exp()
    }

    #[test]
    fn association_matches_closed_form_and_sums_to_one() {
        for (name, lb) in [("fig1", 5e-4), ("fig1", 6e-5), ("chicago", 2e-4), ("manhattan", 1e-3)] {
            let mut p = preset(name).unwrap();
            p.bs_intensity = lb;
            let l = AssociationLaw::new(&p, &QuadratureSettings::default()).unwrap();
            assert_relative_eq!(l.a_nlos(), a_nlos_closed(&p), max_relative = 1e-9);
            assert!((l.a_los() + l.a_nlos() - 1.0).abs() < 1e-12);
            assert_relative_eq!(l.a_los_direct().unwrap(), l.a_los(), epsilon = 1e-9);
        }
    }

    #[test]
    fn densities_normalize() {
        let l = law("fig1", 2e-4);
        let q = QuadratureSettings::default();
        let los = integrate(|r| l.nearest_los_pdf(r), 0.0, 200.0, &q).unwrap();
        assert_relative_eq!(los, 1.0, epsilon = 1e-6);
        let nlos = integrate(|r| l.nearest_nlos_pdf(r), 0.0, 200.0, &q).unwrap()
            + integrate(|r| l.nearest_nlos_pdf(r), 200.0, f64::INFINITY, &q.with_scale(200.0)).unwrap();
        assert_relative_eq!(nlos, 1.0, epsilon = 1e-6);
        for state in LinkState::BOTH {
            let v = l.expect(state, &[], |_| Ok(1.0)).unwrap();
            assert_relative_eq!(v, 1.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn nearest_nlos_is_continuous_at_d() {
        let l = law("fig1", 2e-4);
        let d = 200.0;
        // left limit uses (1-C)λ, right limit λ; the densities differ by the intensity ratio
        let left = l.nearest_nlos_pdf(d);
        let right = l.nearest_nlos_pdf(d * (1.0 + 1e-12));
        assert_relative_eq!(right / left, 1.0 / (1.0 - 0.12), max_relative = 1e-9);
        // the survival function itself is continuous
        assert_relative_eq!(l.nearest_nlos_cdf(d), l.nearest_nlos_cdf(d * (1.0 + 1e-12)), max_relative = 1e-9);
    }

    #[test]
    fn nlos_second_term_vanishes_beyond_mu() {
        let l = law("fig1", 2e-4);
        let mu = l.mu();
        // beyond μ (and inside D) the NLOS density reduces to its first term
        let r = 0.5 * (mu + 200.0);
        assert!(r > mu && r < 200.0);
        let lb = 2e-4;
        let c = 0.12;
        let first = 2.0 * PI * lb * r * (-PI * lb * r * r).exp() * (1.0 - c) * (PI * c * lb * (r * r - 200.0 * 200.0)).exp();
        assert_relative_eq!(l.serving_joint_pdf(LinkState::Nlos, r), first, max_relative = 1e-12);
    }

    #[test]
    fn limits() {
        // sparse network: almost surely no LOS BS
        let l = law("fig1", 1e-9);
        assert!(l.a_nlos() > 1.0 - 1e-3);
        // full LOS with a huge ball: nearest LOS law is Rayleigh
        let mut p = preset("fig1").unwrap();
        p.blockage.los_fraction = 1.0;
        p.blockage.los_radius = 1e5;
        p.bs_intensity = 2e-4;
        let l = AssociationLaw::new(&p, &QuadratureSettings::default()).unwrap();
        assert!(l.a_nlos() < 1e-9);
        let r = 40.0;
        assert_relative_eq!(l.nearest_los_pdf(r), 2.0 * PI * 2e-4 * r * (-PI * 2e-4 * r * r).exp(), max_relative = 1e-9);
    }

    #[test]
    fn no_los_process() {
        let mut p = preset("fig1").unwrap();
        p.blockage.los_fraction = 0.0;
        let l = AssociationLaw::new(&p, &QuadratureSettings::default()).unwrap();
        assert_eq!(l.a_los(), 0.0);
        assert_eq!(l.expect(LinkState::Los, &[], |_| Ok(1.0)).unwrap(), 0.0);
    }
}
