//! Lower bounds for large gaps between zeros of the Riemann zeta function.
//!
//! A mollified second-moment argument shows that if the ratio `h(c)` of a
//! shifted discrete moment to the continuous one is below 1 (as `T → ∞`),
//! then `λ = limsup δ(γ) > c/π`. At leading order `h(c)` depends only on a
//! shape polynomial `P` with `P(0) = P'(0) = 0`, and it is a ratio of two
//! quadratic forms in the coefficients of `P`.
//!
//! - [`ratpoly`]: exact rational polynomials and the convolution transform.
//! - [`functional`]: `B(j; u)`, `β_j`, `h(c)` and its quadratic forms.
//! - [`optimizer`]: generalized eigenproblem, certification and bisection in `c`.
//! - [`constants`]: Euler-product constants and their per-prime identities.
//! - [`zerostats`]: normalized gaps and `N(T)` residuals of zero tables.

pub mod constants;
pub mod error;
pub mod functional;
pub mod linalg;
pub mod optimizer;
pub mod ratpoly;
pub mod zerostats;

pub use error::{Error, Result};
pub use functional::{
    b_poly, beta_coefficient, denominator_poly, h_denominator, h_ratio, quad_forms, FormBasis, MollifierSpec,
    QuadForms, RatioReport, SeriesConfig, ThetaParam,
};
pub use optimizer::{certify_lambda, max_lambda, min_rayleigh, EigenResult, LambdaCertificate};
pub use ratpoly::{RatPoly, Rational};
