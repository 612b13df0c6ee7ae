//! Derivatives of Laplace transforms written as `L(s) = exp(Ξ(s))`.

use crate::error::{Error, Result};

use super::gamma::binomial;

/// The exponent Ξ of a Laplace transform `exp(Ξ(s))`, with its derivatives.
pub trait LogLaplace {
    /// The `order`-th derivative of Ξ at `s`; order 0 is Ξ itself.
    fn log_laplace_derivative(&self, order: usize, s: f64) -> Result<f64>;

    /// Highest derivative order the implementation supports.
    fn max_order(&self) -> usize;
}

/// The m-th derivative of `exp(Ξ(s))`.
///
/// Uses the recursion `L^{(n)} = Σ_{k<n} C(n-1, k) Ξ^{(k+1)} L^{(n-1-k)}`, which is
/// Faà di Bruno's formula specialised to the exponential.
pub fn laplace_derivative<X: LogLaplace + ?Sized>(xi: &X, order: usize, s: f64) -> Result<f64> {
    if order > xi.max_order() {
        return Err(Error::Unsupported(format!(
            "derivative order {order} exceeds supported order {}",
            xi.max_order()
        )));
    }
    if !(s >= 0.0) {
        return Err(Error::domain("laplace_derivative", format!("s must be non-negative, got {s}")));
    }
    let base = xi.log_laplace_derivative(0, s)?.exp();
    if order == 0 {
        return Ok(base);
    }
    let xi_derivs: Vec<f64> = (1..=order)
        .map(|k| xi.log_laplace_derivative(k, s))
        .collect::<Result<_>>()?;
    let mut l = Vec::with_capacity(order + 1);
    l.push(base);
    for n in 1..=order {
        let mut acc = 0.0;
        for k in 0..n {
            acc += binomial((n - 1) as u32, k as u32) * xi_derivs[k] * l[n - 1 - k];
        }
        l.push(acc);
    }
    Ok(l[order])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    struct Linear {
        a: f64,
    }

    impl LogLaplace for Linear {
        fn log_laplace_derivative(&self, order: usize, s: f64) -> Result<f64> {
            Ok(match order {
                0 => -self.a * s,
                1 => -self.a,
                _ => 0.0,
            })
        }
        fn max_order(&self) -> usize {
            6
        }
    }

    /// Ξ(s) = -ln(1+s) (Laplace of an exponential variable)
    struct Rayleigh;

    impl LogLaplace for Rayleigh {
        fn log_laplace_derivative(&self, order: usize, s: f64) -> Result<f64> {
            if order == 0 {
                return Ok(-(1.0 + s).ln());
            }
            let k = order as i32;
            let fact: f64 = (1..order).map(|v| v as f64).product();
            Ok(-(-1f64).powi(k - 1) * fact / (1.0 + s).powi(k))
        }
        fn max_order(&self) -> usize {
            4
        }
    }

    #[test]
    fn order_zero_is_transform() {
        let x = Linear { a: 2.0 };
        assert_relative_eq!(laplace_derivative(&x, 0, 0.7).unwrap(), (-1.4f64).exp(), max_relative = 1e-15);
    }

    #[test]
    fn exponential_calibration() {
        let a = 1.7;
        let x = Linear { a };
        for m in 0..=6 {
            let s: f64 = 0.4;
            let expected = (-a).powi(m as i32) * (-a * s).exp();
            assert_relative_eq!(laplace_derivative(&x, m, s).unwrap(), expected, max_relative = 1e-10);
        }
    }

    #[test]
    fn rational_transform_derivatives() {
        // L(s) = 1/(1+s) has L^{(n)} = (-1)^n n! / (1+s)^{n+1}
        for n in 0..=4 {
            let s: f64 = 0.3;
            let fact: f64 = (1..=n).map(|v| v as f64).product();
            let expected = (-1f64).powi(n as i32) * fact / (1.0 + s).powi(n as i32 + 1);
            assert_relative_eq!(laplace_derivative(&Rayleigh, n, s).unwrap(), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        assert!(matches!(laplace_derivative(&Rayleigh, 5, 1.0), Err(Error::Unsupported(_))));
    }
}
