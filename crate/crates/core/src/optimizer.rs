//! Minimizing `h(c)` over admissible polynomials and certifying `λ > c/π`.
//!
//! `h(c)` is a generalized Rayleigh quotient `aᵀN(c)a / aᵀDa` in the
//! coefficients `a = (a_2, …, a_M)`, so its minimum over degree-`M` shapes is
//! the smallest generalized eigenvalue of `(N(c), D)`. A certificate is only
//! issued after the eigenvector, rounded to rationals, is pushed back through
//! the exact [`h_ratio`] pipeline.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::functional::{h_ratio, FormBasis, MollifierSpec, QuadForms, SeriesConfig, ThetaParam};
use crate::linalg::{backward_solve_transpose, cholesky, forward_solve, jacobi_eigen};
use crate::ratpoly::{rat_to_f64, Rational};

/// Off-diagonal tolerance for the Jacobi sweeps.
pub const JACOBI_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Largest denominator allowed when rounding a witness to rationals.
pub const WITNESS_MAX_DENOMINATOR: u64 = 1_000_000;
pub const DEFAULT_TOL_C: f64 = 1e-6;
/// Upper end of the bracket search.
pub const BRACKET_LIMIT: f64 = 10.0 * PI;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenResult {
    /// Smallest generalized eigenvalue of `(N, D)`.
    pub mu: f64,
    /// Eigenvector `(a_2, …, a_M)`, scaled so its largest-magnitude entry is `+1`.
    pub a: Vec<f64>,
    /// `‖N a − μ D a‖_∞ / ‖a‖_∞`.
    pub residual: f64,
}

/// Smallest generalized eigenpair of `(N, D)`.
///
/// Forms built by [`FormBasis`] carry an exact `D = L Δ Lᵀ`; those are
/// whitened with it, since `D` is far too ill-conditioned for a floating
/// Cholesky at larger degrees. Otherwise `D` is factored in `f64`. In both
/// cases the symmetric whitened matrix is diagonalized by cyclic Jacobi.
pub fn min_rayleigh(forms: &QuadForms) -> Result<EigenResult> {
    let dim = forms.dim();
    let (s, back): (Vec<Vec<f64>>, Box<dyn Fn(&[f64]) -> Vec<f64>>) = match &forms.whitened {
        Some(w) => (w.s.clone(), Box::new(move |y: &[f64]| w.unwhiten(y))),
        None => {
            let l = cholesky(&forms.d).map_err(Error::NotPositiveDefinite)?;
            // S = L⁻¹ N L⁻ᵀ, one column at a time
            let mut linv_n = vec![vec![0.0; dim]; dim];
            for col in 0..dim {
                let column: Vec<f64> = forms.n.iter().map(|row| row[col]).collect();
                let y = forward_solve(&l, &column);
                for (row, v) in linv_n.iter_mut().zip(y) {
                    row[col] = v;
                }
            }
            let mut s = vec![vec![0.0; dim]; dim];
            for (i, row) in linv_n.iter().enumerate() {
                let y = forward_solve(&l, row);
                for (k, v) in y.into_iter().enumerate() {
                    s[i][k] = v;
                }
            }
            for i in 0..dim {
                for k in 0..i {
                    let avg = 0.5 * (s[i][k] + s[k][i]);
                    s[i][k] = avg;
                    s[k][i] = avg;
                }
            }
            (s, Box::new(move |y: &[f64]| backward_solve_transpose(&l, y)))
        }
    };

    let eig = jacobi_eigen(&s, JACOBI_TOL, JACOBI_MAX_SWEEPS);
    let k_min = (0..dim)
        .min_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]))
        .expect("nonempty");
    let y: Vec<f64> = eig.vectors.iter().map(|row| row[k_min]).collect();
    let mut a = back(&y);
    let (idx, _) = a.iter().enumerate().fold(
        (0, 0.0f64),
        |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) },
    );
    let pivot = a[idx];
    for v in a.iter_mut() {
        *v /= pivot;
    }
    // the whitened eigenvalue is accurate; aᵀNa/aᵀDa in f64 is not once D
    // is badly conditioned
    let mu = match forms.whitened {
        Some(_) => eig.values[k_min],
        None => forms.rayleigh(&a),
    };
    let residual = residual(forms, mu, &a);
    Ok(EigenResult { mu, a, residual })
}

fn residual(forms: &QuadForms, mu: f64, a: &[f64]) -> f64 {
    let mv = |m: &[Vec<f64>]| -> Vec<f64> {
        m.iter()
            .map(|row| row.iter().zip(a).map(|(x, y)| x * y).sum())
            .collect()
    };
    let na = mv(&forms.n);
    let da = mv(&forms.d);
    let num = na.iter().zip(&da).fold(0.0f64, |m, (x, y)| m.max((x - mu * y).abs()));
    let den = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    num / den
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// from the continued-fraction convergents and the last semiconvergent.
pub fn rationalize(x: f64, max_den: u64) -> Rational {
    let max_den = BigInt::from(max_den.max(1));
    let exact = BigRational::from_float(x).unwrap_or_else(BigRational::zero);
    if exact.denom() <= &max_den {
        return exact;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let (mut n, mut d) = (exact.numer().clone(), exact.denom().clone());
    loop {
        let (a, r) = n.div_mod_floor(&d);
        let q2 = &q0 + &a * &q1;
        if q2 > max_den {
            break;
        }
        let p2 = &p0 + &a * &p1;
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        if r.is_zero() {
            break;
        }
        (n, d) = (d, r);
    }
    let k = (&max_den - &q0) / &q1;
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&semi - &exact).abs() < (&conv - &exact).abs() {
        semi
    } else {
        conv
    }
}

/// Outcome of testing one gap parameter.
#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub certified: bool,
    pub c: f64,
    pub mu: f64,
    pub witness: MollifierSpec,
    /// `h(c)` of the rationalized witness, when it was re-verified.
    pub h_at_witness: Option<f64>,
}

fn certify_with(basis: &mut FormBasis, c: f64, cfg: &SeriesConfig) -> Result<Certification> {
    if !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("gap parameter c = {c}")));
    }
    let forms = basis.at(c, cfg)?;
    let eig = min_rayleigh(&forms)?;
    let coeffs = eig.a.iter().map(|&v| rationalize(v, WITNESS_MAX_DENOMINATOR)).collect();
    let witness = MollifierSpec::new(coeffs)?;
    if eig.mu >= 1.0 {
        return Ok(Certification {
            certified: false,
            c,
            mu: eig.mu,
            witness,
            h_at_witness: None,
        });
    }
    let h = h_ratio(&witness, c, basis.theta(), cfg)?.h;
    Ok(Certification {
        certified: h < 1.0,
        c,
        mu: eig.mu,
        witness,
        h_at_witness: Some(h),
    })
}

/// Decide whether some degree-`degree` shape has `h(c) < 1`, re-verifying
/// the rounded eigenvector exactly.
pub fn certify_lambda(degree: usize, c: f64, theta: &ThetaParam, cfg: &SeriesConfig) -> Result<Certification> {
    let mut basis = FormBasis::new(degree, theta)?;
    certify_with(&mut basis, c, cfg)
}

/// A certified lower bound `λ > c_star / π`.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaCertificate {
    pub degree: usize,
    pub c_star: f64,
    pub lambda: f64,
    pub witness: MollifierSpec,
    pub h_at_witness: f64,
    pub mu_at_c_star: f64,
    pub tolerance_c: f64,
}

impl LambdaCertificate {
    /// Witness coefficients rescaled so that `a_2 = 1000`, for comparison with
    /// hand-tuned shapes. `None` when `a_2 = 0`.
    pub fn display_coefficients(&self) -> Option<Vec<f64>> {
        display_scaled(&self.witness, 1000.0)
    }
}

pub fn display_scaled(p: &MollifierSpec, a2: f64) -> Option<Vec<f64>> {
    let lead = rat_to_f64(&p.coeffs()[0]);
    if lead == 0.0 {
        return None;
    }
    Some(p.coeffs().iter().map(|c| rat_to_f64(c) * a2 / lead).collect())
}

/// Largest certified `c` for degree bound `degree`, by bisection to `tol_c`.
///
/// The bracket starts at `c = π` and doubles until certification fails;
/// [`Error::BracketFailure`] if nothing fails below `10π` (or nothing
/// certifies above `π / 2^20`).
pub fn max_lambda(degree: usize, theta: &ThetaParam, tol_c: f64, cfg: &SeriesConfig) -> Result<LambdaCertificate> {
    let mut basis = FormBasis::new(degree, theta)?;
    max_lambda_with(&mut basis, tol_c, cfg)
}

/// [`max_lambda`] on a prebuilt basis, so degree sweeps can share `N_j`.
pub fn max_lambda_with(basis: &mut FormBasis, tol_c: f64, cfg: &SeriesConfig) -> Result<LambdaCertificate> {
    if !(tol_c > 0.0) {
        return Err(Error::InvalidParameter(format!("tol_c = {tol_c}")));
    }
    let first = certify_with(basis, PI, cfg)?;
    let (mut lo, mut hi) = if first.certified {
        let mut lo = first;
        loop {
            let c = 2.0 * lo.c;
            if c > BRACKET_LIMIT {
                return Err(Error::BracketFailure(BRACKET_LIMIT));
            }
            let cert = certify_with(basis, c, cfg)?;
            if cert.certified {
                lo = cert;
            } else {
                break (lo, c);
            }
        }
    } else {
        let mut hi = PI;
        loop {
            let c = hi / 2.0;
            if c < PI / 1_048_576.0 {
                return Err(Error::BracketFailure(c));
            }
            let cert = certify_with(basis, c, cfg)?;
            if cert.certified {
                break (cert, hi);
            }
            hi = c;
        }
    };
    while hi - lo.c > tol_c {
        let mid = 0.5 * (lo.c + hi);
        let cert = certify_with(basis, mid, cfg)?;
        if cert.certified {
            lo = cert;
        } else {
            hi = mid;
        }
    }
    Ok(LambdaCertificate {
        degree: basis.degree(),
        c_star: lo.c,
        lambda: lo.c / PI,
        h_at_witness: lo.h_at_witness.expect("certified witnesses are re-verified"),
        mu_at_c_star: lo.mu,
        witness: lo.witness,
        tolerance_c: tol_c,
    })
}
