//! Special functions and quadrature used by every closed-form expression.
//!
//! All routines are pure and reentrant.

pub mod gamma;
pub mod hypergeometric;
pub mod laplace;
pub mod quadrature;

pub use gamma::{
    binomial, digamma, erlang_survival, factorial, gamma_fn, ln_gamma, lower_incomplete_gamma,
    regularized_lower_gamma, regularized_upper_gamma, upper_incomplete_gamma,
};
pub use hypergeometric::{gauss_2f1, gauss_2f1_complement};
pub use laplace::{laplace_derivative, LogLaplace};
pub use quadrature::{
    integrate, try_integrate, try_integrate_detailed, try_integrate_piecewise, QuadratureResult,
    QuadratureSettings, TailPolicy,
};
