//! Gauss hypergeometric function ₂F₁ for real arguments z < 1.
//!
//! The power series is summed directly for |z| ≤ 1/2. For 1/2 < z < 1 the
//! argument is moved to 1 − z with the connection formulas, including the
//! logarithmic forms when c − a − b is an integer. Negative z is first mapped
//! into (0, 1) with the Pfaff transformation.

use super::gamma::{digamma, gamma_real, rgamma};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 20_000;
const EPS: f64 = 1e-16;
/// Distance from an integer below which c − a − b is treated as integral.
const INTEGER_SNAP: f64 = 1e-12;

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// ₂F₁(a, b; c; z) for z < 1.
pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if [a, b, c, z].iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("gauss_2f1", "arguments must be finite"));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::domain("gauss_2f1", format!("c = {c} is a pole")));
    }
    if z >= 1.0 {
        return Err(Error::domain("gauss_2f1", format!("z = {z} outside (-inf, 1)")));
    }
    if z == 0.0 || a == 0.0 || b == 0.0 {
        return Ok(1.0);
    }
    if is_nonpositive_integer(a) || is_nonpositive_integer(b) {
        return direct_series(a, b, c, z);
    }
    if z < 0.0 {
        // Pfaff: F(a,b;c;z) = (1-z)^{-a} F(a, c-b; c; z/(z-1))
        let w = z / (z - 1.0);
        return Ok((1.0 - z).powf(-a) * gauss_2f1(a, c - b, c, w)?);
    }
    if z <= 0.5 {
        return direct_series(a, b, c, z);
    }
    one_minus_z(a, b, c, 1.0 - z)
}

/// ₂F₁(a, b; c; 1 - w) for 0 < w ≤ 1, taking the complement w directly so that
/// arguments extremely close to 1 keep full relative precision.
pub fn gauss_2f1_complement(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    if [a, b, c, w].iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("gauss_2f1_complement", "arguments must be finite"));
    }
    if !(w > 0.0 && w <= 1.0) {
        return Err(Error::domain("gauss_2f1_complement", format!("w = {w} outside (0, 1]")));
    }
    if w >= 0.5 || is_nonpositive_integer(a) || is_nonpositive_integer(b) || is_nonpositive_integer(c) {
        return gauss_2f1(a, b, c, 1.0 - w);
    }
    one_minus_z(a, b, c, w)
}

pub(crate) fn direct_series(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 || term.abs() <= EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::domain(
        "gauss_2f1",
        format!("series did not converge for a={a}, b={b}, c={c}, z={z}"),
    ))
}

/// Continuation around z = 1, in terms of w = 1 - z.
fn one_minus_z(a: f64, b: f64, c: f64, w: f64) -> Result<f64> {
    let d = c - a - b;
    let m = d.round();
    if (d - m).abs() < INTEGER_SNAP {
        let m = m as i64;
        return match m.cmp(&0) {
            std::cmp::Ordering::Equal => log_case_zero(a, b, w),
            std::cmp::Ordering::Greater => log_case_positive(a, b, m as u32, w),
            std::cmp::Ordering::Less => log_case_negative(a, b, (-m) as u32, w),
        };
    }
    let first = gamma_real(c) * gamma_real(d) * rgamma(c - a) * rgamma(c - b);
    let second = gamma_real(c) * gamma_real(-d) * rgamma(a) * rgamma(b);
    let mut value = 0.0;
    if first != 0.0 {
        value += first * direct_series(a, b, 1.0 - d, w)?;
    }
    if second != 0.0 {
        value += second * w.powf(d) * direct_series(c - a, c - b, d + 1.0, w)?;
    }
    Ok(value)
}

/// c = a + b.
fn log_case_zero(a: f64, b: f64, w: f64) -> Result<f64> {
    let ln_w = w.ln();
    let prefactor = gamma_real(a + b) * rgamma(a) * rgamma(b);
    let mut coeff = 1.0; // (a)_n (b)_n / (n!)^2
    let mut psi_n1 = digamma(1.0);
    let mut psi_a = digamma(a);
    let mut psi_b = digamma(b);
    let mut wn = 1.0;
    let mut sum = 0.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let term = coeff * wn * (2.0 * psi_n1 - psi_a - psi_b - ln_w);
        sum += term;
        if n > 2 && term.abs() <= EPS * sum.abs() {
            return Ok(prefactor * sum);
        }
        coeff *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + 1.0));
        psi_n1 += 1.0 / (nf + 1.0);
        psi_a += 1.0 / (a + nf);
        psi_b += 1.0 / (b + nf);
        wn *= w;
    }
    Err(Error::domain("gauss_2f1", "logarithmic continuation did not converge"))
}

/// c = a + b + m, m ≥ 1.
fn log_case_positive(a: f64, b: f64, m: u32, w: f64) -> Result<f64> {
    let mf = m as f64;
    let c = a + b + mf;

    // finite part
    let mut finite = 0.0;
    let mut coeff = 1.0; // (a)_n (b)_n / (n! (1-m)_n)
    let mut wn = 1.0;
    for n in 0..m {
        let nf = n as f64;
        finite += coeff * wn;
        coeff *= (a + nf) * (b + nf) / ((nf + 1.0) * (1.0 - mf + nf));
        wn *= w;
    }
    finite *= gamma_real(mf) * gamma_real(c) * rgamma(a + mf) * rgamma(b + mf);

    // logarithmic part
    let ln_w = w.ln();
    let mut coeff = 1.0 / gamma_real(mf + 1.0); // (a+m)_n (b+m)_n / (n! (n+m)!)
    let mut psi_n1 = digamma(1.0);
    let mut psi_nm1 = digamma(mf + 1.0);
    let mut psi_a = digamma(a + mf);
    let mut psi_b = digamma(b + mf);
    let mut wn = 1.0;
    let mut sum = 0.0;
    let mut converged = false;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let term = coeff * wn * (ln_w - psi_n1 - psi_nm1 + psi_a + psi_b);
        sum += term;
        if n > 2 && term.abs() <= EPS * sum.abs() {
            converged = true;
            break;
        }
        coeff *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0));
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + mf + nf);
        psi_b += 1.0 / (b + mf + nf);
        wn *= w;
    }
    if !converged {
        return Err(Error::domain("gauss_2f1", "logarithmic continuation did not converge"));
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 }; // (z-1)^m = (-1)^m w^m
    let log_part = sign * w.powi(m as i32) * gamma_real(c) * rgamma(a) * rgamma(b) * sum;
    Ok(finite - log_part)
}

/// c = a + b − m, m ≥ 1.
fn log_case_negative(a: f64, b: f64, m: u32, w: f64) -> Result<f64> {
    let mf = m as f64;
    let c = a + b - mf;

    let mut finite = 0.0;
    let mut coeff = 1.0; // (a-m)_n (b-m)_n / (n! (1-m)_n)
    let mut wn = 1.0;
    for n in 0..m {
        let nf = n as f64;
        finite += coeff * wn;
        coeff *= (a - mf + nf) * (b - mf + nf) / ((nf + 1.0) * (1.0 - mf + nf));
        wn *= w;
    }
    finite *= gamma_real(mf) * gamma_real(c) * rgamma(a) * rgamma(b) * w.powi(-(m as i32));

    let outer = gamma_real(c) * rgamma(a - mf) * rgamma(b - mf);
    if outer == 0.0 {
        return Ok(finite);
    }
    let ln_w = w.ln();
    let mut coeff = 1.0 / gamma_real(mf + 1.0); // (a)_n (b)_n / (n! (n+m)!)
    let mut psi_n1 = digamma(1.0);
    let mut psi_nm1 = digamma(mf + 1.0);
    let mut psi_a = digamma(a);
    let mut psi_b = digamma(b);
    let mut wn = 1.0;
    let mut sum = 0.0;
    let mut converged = false;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let term = coeff * wn * (ln_w - psi_n1 - psi_nm1 + psi_a + psi_b);
        sum += term;
        if n > 2 && term.abs() <= EPS * sum.abs() {
            converged = true;
            break;
        }
        coeff *= (a + nf) * (b + nf) / ((nf + 1.0) * (nf + mf + 1.0));
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_a += 1.0 / (a + nf);
        psi_b += 1.0 / (b + nf);
        wn *= w;
    }
    if !converged {
        return Err(Error::domain("gauss_2f1", "logarithmic continuation did not converge"));
    }
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(finite - sign * outer * sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::quadrature::{integrate, QuadratureSettings};
    use approx::assert_relative_eq;

    /// Euler integral, valid for c > b > 0: B(b, c-b) F = ∫ t^{b-1}(1-t)^{c-b-1}(1-zt)^{-a} dt.
    fn euler_oracle(a: f64, b: f64, c: f64, z: f64) -> f64 {
        let settings = QuadratureSettings::default().with_tolerance(1e-12, 1e-300);
        let beta = gamma_real(b) * gamma_real(c - b) / gamma_real(c);
        let f = |t: f64| t.powf(b - 1.0) * (1.0 - t).powf(c - b - 1.0) * (1.0 - z * t).powf(-a);
        integrate(f, 0.0, 1.0, &settings).unwrap() / beta
    }

    #[test]
    fn complement_keeps_precision_near_one() {
        // F(1,1;2;1-w) = -ln(w)/(1-w)
        for &w in &[1e-3, 6e-8, 1e-14] {
            let v = gauss_2f1_complement(1.0, 1.0, 2.0, w).unwrap();
            assert_relative_eq!(v, -w.ln() / (1.0 - w), max_relative = 1e-13);
        }
        let (a, b, c) = (1.0, 2.0, 2.68);
        assert_relative_eq!(gauss_2f1_complement(a, b, c, 0.3).unwrap(), gauss_2f1(a, b, c, 0.7).unwrap(), max_relative = 1e-14);
    }

    #[test]
    fn value_at_origin() {
        assert_eq!(gauss_2f1(1.3, -0.4, 2.2, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn logarithm_identity() {
        let v = gauss_2f1(1.0, 1.0, 2.0, 0.5).unwrap();
        assert_relative_eq!(v, -(0.5f64).ln() / 0.5, max_relative = 1e-14);
        assert_relative_eq!(v, 1.386_294_361_119_890_6, max_relative = 1e-13);
        // same identity deep in the continuation region (c - a - b = 0)
        for &z in &[0.6, 0.9, 0.999, 0.999_999_9] {
            let v = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
            assert_relative_eq!(v, -(1.0 - z).ln() / z, max_relative = 1e-13);
        }
    }

    #[test]
    fn kummer_cross_check() {
        // direct series at z = 0.8 against the 1 - z continuation
        let (a, b, c, z) = (1.0, 3.0, 3.68, 0.8);
        let direct = direct_series(a, b, c, z).unwrap();
        let cont = one_minus_z(a, b, c, 1.0 - z).unwrap();
        assert_relative_eq!(direct, cont, max_relative = 1e-10);
        // symmetric in a, b; the swapped form keeps the Euler integrand bounded
        assert_relative_eq!(gauss_2f1(a, b, c, z).unwrap(), euler_oracle(b, a, c, z), max_relative = 1e-9);
    }

    #[test]
    fn continuation_branches_match_direct_series() {
        // non-integer, c-a-b = 0, positive integer, negative integer
        let cases = [
            (1.0, 2.0, 3.684_931_5, 0.7),
            (1.0, 3.0, 4.0, 0.7),
            (0.7, 1.3, 2.0, 0.65),
            (1.0, 1.0, 3.0, 0.7),
            (0.5, 1.5, 4.0, 0.6),
            (1.0, 2.0, 1.0, 0.6),
            (1.0, 3.0, 1.315, 0.6),
            (1.5, 2.5, 2.0, 0.55),
        ];
        for &(a, b, c, z) in &cases {
            let direct = direct_series(a, b, c, z).unwrap();
            let cont = one_minus_z(a, b, c, 1.0 - z).unwrap();
            assert_relative_eq!(direct, cont, max_relative = 1e-10);
        }
    }

    #[test]
    fn near_one_against_euler_integral() {
        for &(a, b, c, z) in &[
            (1.0, 1.0, 2.684_931_5, 0.9999),
            (1.0, 2.0, 3.0, 0.99),
            (1.0, 3.0, 4.0, 0.999),
            (0.5, 1.0, 3.0, 0.97),
        ] {
            assert_relative_eq!(gauss_2f1(a, b, c, z).unwrap(), euler_oracle(a, b, c, z), max_relative = 1e-8);
        }
    }

    #[test]
    fn negative_argument_pfaff() {
        // F(1,1;2;z) = -ln(1-z)/z also for z < 0
        for &z in &[-0.3, -2.0, -40.0] {
            let v = gauss_2f1(1.0, 1.0, 2.0, z).unwrap();
            assert_relative_eq!(v, -(1.0 - z).ln() / z, max_relative = 1e-12);
        }
    }

    #[test]
    fn polynomial_case() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z^2/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 0.9);
        let expected = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert_relative_eq!(gauss_2f1(-2.0, b, c, z).unwrap(), expected, max_relative = 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(gauss_2f1(1.0, 1.0, -2.0, 0.3).is_err());
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.0).is_err());
        assert!(gauss_2f1(1.0, 1.0, 2.0, 1.5).is_err());
    }
}
