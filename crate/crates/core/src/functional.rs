//! The leading-order gap functional.
//!
//! For a mollifier shape polynomial `P` with `P(0) = P'(0) = 0` the ratio of
//! the averaged shifted second moment to the plain second moment is
//!
//! ```text
//!          1    Σ_j (-1)^j c^(2j+1) / (2^(2j-1) (2j+1)) · β_{2j}
//! h(c) = ---- · ------------------------------------------------
//!         2π        ∫_0^1 (1-x)^3 (P_1^2 - P_1 P_2) dx
//! ```
//!
//! with `β_j = ∫_0^1 (1-x)^3 B(j; x) dx`. Everything except the weights in
//! `c` is an exact rational computed from [`RatPoly`] algebra; `h` is
//! assembled in `f64` at the very end.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ratpoly::{factorial, pow, rat, rat_to_f64, RatPoly, Rational};

/// Hard cap on the number of series terms.
pub const SERIES_CAP: usize = 60;
/// Default truncation tolerance, relative to `max(1, |partial sum|)`.
pub const DEFAULT_SERIES_TOL: f64 = 1e-14;

/// Mollifier length exponent `ϑ` (the mollifier has length `T^ϑ`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaParam {
    theta: Rational,
    theta_inv: Rational,
}

impl ThetaParam {
    pub fn new(theta: Rational) -> Result<Self> {
        if !theta.is_positive() || theta > rat(1, 2) {
            return Err(Error::InvalidTheta(theta.to_string()));
        }
        let theta_inv = theta.recip();
        Ok(Self { theta, theta_inv })
    }

    pub fn from_inverse(theta_inv: Rational) -> Result<Self> {
        if !theta_inv.is_positive() {
            return Err(Error::InvalidTheta(format!("1/({theta_inv})")));
        }
        Self::new(theta_inv.recip())
    }

    /// `ϑ = 1/2`, the value used for the printed series weights.
    pub fn half() -> Self {
        Self {
            theta: rat(1, 2),
            theta_inv: rat(2, 1),
        }
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn theta_inv(&self) -> &Rational {
        &self.theta_inv
    }

    pub fn is_half(&self) -> bool {
        self.theta == rat(1, 2)
    }
}

impl Default for ThetaParam {
    fn default() -> Self {
        Self::half()
    }
}

impl fmt::Display for ThetaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.theta)
    }
}

impl Serialize for ThetaParam {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(&self.theta)
    }
}

/// Admissible mollifier shape `P(x) = Σ_{k=2}^{M} a_k x^k`.
///
/// Indices 0 and 1 are absent, so `P(0) = P'(0) = 0` holds by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MollifierSpec {
    degree: usize,
    coeffs: Vec<Rational>,
    poly: RatPoly,
}

impl MollifierSpec {
    /// `coeffs[i]` is the coefficient of `x^(i + 2)`; the degree bound is
    /// `coeffs.len() + 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        let degree = coeffs.len() + 1;
        if degree < 2 {
            return Err(Error::InadmissibleDegree(degree));
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroPolynomial);
        }
        let mut full = vec![Rational::zero(), Rational::zero()];
        full.extend(coeffs.iter().cloned());
        Ok(Self {
            degree,
            coeffs,
            poly: RatPoly::from_coeffs(full),
        })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    /// The shape used for the `λ > 2.9` result:
    /// `1000x² − 9332x³ + 30134x⁴ − 40475x⁵ + 19292x⁶`.
    pub fn reference_degree_six() -> Self {
        Self::from_ints(&[1000, -9332, 30134, -40475, 19292]).expect("nonzero")
    }

    /// Degree bound `M`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients `a_2, …, a_M`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn scale(&self, s: &Rational) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }
}

impl Serialize for MollifierSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// Cache of convolution transforms `P_r` for one polynomial.
struct Transforms<'a> {
    base: &'a RatPoly,
    cache: Vec<RatPoly>,
}

impl<'a> Transforms<'a> {
    fn new(base: &'a RatPoly) -> Self {
        Self {
            base,
            cache: Vec::new(),
        }
    }

    fn ensure(&mut self, r: usize) {
        while self.cache.len() <= r {
            let next = self.base.convolve_power(self.cache.len());
            self.cache.push(next);
        }
    }

    fn get(&self, r: usize) -> &RatPoly {
        &self.cache[r]
    }

    /// `∫_0^u t (ϑ⁻¹ - t)^k P(u - t) dt`, assembled from cached transforms.
    fn kernel(&mut self, k: usize, theta_inv: &Rational) -> RatPoly {
        self.ensure(k + 1);
        let mut acc = RatPoly::zero();
        for i in 0..=k {
            let mut w = Rational::from_integer(crate::ratpoly::binomial(k, i)) * pow(theta_inv, k - i);
            if i % 2 == 1 {
                w = -w;
            }
            acc = &acc + &self.get(i + 1).scale(&w);
        }
        acc
    }
}

/// `∫_0^1 (1 - x)^3 p(x) dx`, using `∫ (1-x)^3 x^k = 6 / ((k+1)(k+2)(k+3)(k+4))`.
fn integrate_smooth_weight(p: &RatPoly) -> Rational {
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| {
            let k = BigInt::from(k);
            let den = (&k + 1) * (&k + 2) * (&k + 3) * (&k + 4);
            c * Rational::new(BigInt::from(6), den)
        })
        .fold(Rational::zero(), |acc, t| acc + t)
}

fn denominator_poly_of(p: &RatPoly, theta: &ThetaParam) -> RatPoly {
    let p1 = p.convolve_power(1);
    let p2 = p.convolve_power(2);
    let inner = &(&p1 * &p1).scale(theta.theta_inv()) - &(&p1 * &p2).scale(&rat(2, 1));
    &RatPoly::one_minus_x_pow(3) * &inner
}

/// `(1-x)^3 (ϑ⁻¹ P_1(x)^2 − 2 P_1(x) P_2(x))`, the second-moment integrand.
pub fn denominator_poly(p: &MollifierSpec, theta: &ThetaParam) -> RatPoly {
    denominator_poly_of(p.poly(), theta)
}

/// Half the integrated second-moment integrand; at `ϑ = 1/2` this is
/// `∫_0^1 (1-x)^3 (P_1^2 − P_1 P_2) dx`. Not checked for sign.
fn raw_denominator(p: &RatPoly, theta: &ThetaParam) -> Rational {
    let p1 = p.convolve_power(1);
    let p2 = p.convolve_power(2);
    let inner = &(&p1 * &p1).scale(&(theta.theta_inv() / rat(2, 1))) - &(&p1 * &p2);
    integrate_smooth_weight(&inner)
}

/// `∫_0^1 (1-x)^3 (P_1(x)^2 − P_1(x) P_2(x)) dx`.
pub fn h_denominator(p: &MollifierSpec) -> Result<Rational> {
    checked_denominator(p.poly(), &ThetaParam::half())
}

fn checked_denominator(p: &RatPoly, theta: &ThetaParam) -> Result<Rational> {
    let d = raw_denominator(p, theta);
    if !d.is_positive() {
        return Err(Error::DegenerateDenominator(d.to_string()));
    }
    Ok(d)
}

fn b_poly_with(j: usize, tr: &mut Transforms<'_>, theta: &ThetaParam) -> RatPoly {
    let th = theta.theta();
    let theta_inv = theta.theta_inv().clone();
    tr.ensure(j + 3);
    let f1 = Rational::new(BigInt::one(), factorial(j + 1));
    let f2 = Rational::new(BigInt::one(), factorial(j + 2));
    let f3 = Rational::new(BigInt::one(), factorial(j + 3));
    let f0_6 = Rational::new(BigInt::one(), factorial(j) * 6);

    let k_j2 = tr.kernel(j + 2, &theta_inv);
    let k_j1 = tr.kernel(j + 1, &theta_inv);
    let k_j = tr.kernel(j, &theta_inv);
    let (p1, p2, p3) = (tr.get(1), tr.get(2), tr.get(3));
    let (pj2, pj3) = (tr.get(j + 2), tr.get(j + 3));

    // Group the six terms by their left factor P_1, P_2, P_3.
    let p1_part = pj2.scale(&(-&f2 * rat(2, 1))) + pj3.scale(&(&f3 * th * rat(4, 1))) - k_j2.scale(&(th * &f2));
    let p2_part = pj2.scale(&(&f2 * th * rat(2, 1))) + k_j1.scale(&(th * &f1));
    let p3_part = k_j.scale(&(-(th * &f0_6)));

    &(&(p1 * &p1_part) + &(p2 * &p2_part)) + &(p3 * &p3_part)
}

/// The polynomial `B(j; u)` of the shifted moment expansion.
///
/// ```text
/// B(j;u) = −2 P_1 P_{j+2} / (j+2)! + 2ϑ P_2 P_{j+2} / (j+2)! + 4ϑ P_1 P_{j+3} / (j+3)!
///          − ϑ/(j+2)! · P_1 K_{j+2} + ϑ/(j+1)! · P_2 K_{j+1} − ϑ/(6 j!) · P_3 K_j
/// ```
///
/// where `K_k(u) = ∫_0^u t (ϑ⁻¹ − t)^k P(u − t) dt`.
pub fn b_poly(j: usize, p: &MollifierSpec, theta: &ThetaParam) -> RatPoly {
    b_poly_of(j, p.poly(), theta)
}

fn b_poly_of(j: usize, p: &RatPoly, theta: &ThetaParam) -> RatPoly {
    let mut tr = Transforms::new(p);
    b_poly_with(j, &mut tr, theta)
}

/// `β_j = ∫_0^1 (1-x)^3 B(j; x) dx`.
pub fn beta_coefficient(j: usize, p: &MollifierSpec, theta: &ThetaParam) -> Rational {
    beta_of(j, p.poly(), theta)
}

fn beta_of(j: usize, p: &RatPoly, theta: &ThetaParam) -> Rational {
    integrate_smooth_weight(&b_poly_of(j, p, theta))
}

/// Series truncation settings for [`h_ratio`] and [`quad_forms`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesConfig {
    pub tol: f64,
    pub cap: usize,
    /// Allow `ϑ < 1/2` with weights `2ϑ^(2j) c^(2j+1) / (2j+1)`. These are
    /// inferred rather than printed, so the mode is opt-in.
    pub generalized_theta: bool,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            tol: DEFAULT_SERIES_TOL,
            cap: SERIES_CAP,
            generalized_theta: false,
        }
    }
}

impl SeriesConfig {
    fn validate(&self, theta: &ThetaParam) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!("series tolerance {}", self.tol)));
        }
        if self.cap == 0 || self.cap > SERIES_CAP {
            return Err(Error::InvalidParameter(format!("series cap {}", self.cap)));
        }
        if !theta.is_half() && !self.generalized_theta {
            return Err(Error::GeneralizedThetaRequired(theta.to_string()));
        }
        Ok(())
    }
}

/// Weight `w_j(c)` of `β_{2j} / denominator` in `h(c)`, including the `1/2π`.
///
/// At `ϑ = 1/2` this is `(−1)^j c^(2j+1) / (2π · 2^(2j−1) (2j+1))`; in
/// generalized mode it is `(−1)^j ϑ^(2j) c^(2j+1) / (π (2j+1))`, which agrees
/// at `ϑ = 1/2`.
pub fn series_weight(j: usize, c: f64, theta: &ThetaParam, generalized: bool) -> f64 {
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let odd = (2 * j + 1) as f64;
    let c_pow = c.powi(2 * j as i32 + 1);
    if generalized && !theta.is_half() {
        let th = rat_to_f64(theta.theta());
        sign * th.powi(2 * j as i32) * c_pow / (std::f64::consts::PI * odd)
    } else {
        let two_pow = 2f64.powi(2 * j as i32 - 1);
        sign * c_pow / (two_pow * odd) / (2.0 * std::f64::consts::PI)
    }
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BetaEntry {
    /// Series index `j`.
    pub j: usize,
    /// Order of the `B` polynomial, `2j`.
    pub order: usize,
    #[serde(serialize_with = "ser_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TermEntry {
    pub j: usize,
    /// Contribution of this term to `h`.
    pub value: f64,
}

/// One evaluation of `h(c)` with all intermediates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub c: f64,
    pub theta: ThetaParam,
    #[serde(serialize_with = "ser_rational")]
    pub denominator: Rational,
    pub beta: Vec<BetaEntry>,
    pub terms: Vec<TermEntry>,
    pub j_used: usize,
    pub h: f64,
    /// `c / π` when `h < 1`.
    pub lambda_implied: Option<f64>,
}

/// Evaluate `h(c)`, truncating the series at the first `J` with
/// `|term_J| < tol · max(1, |partial sum|)`.
///
/// Terms are the per-`j` contributions `w_j(c) · β_{2j} / denominator`, so
/// the truncation point and the result do not depend on the scale of `P`.
pub fn h_ratio(p: &MollifierSpec, c: f64, theta: &ThetaParam, cfg: &SeriesConfig) -> Result<RatioReport> {
    cfg.validate(theta)?;
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("gap parameter c = {c}")));
    }
    let denominator = checked_denominator(p.poly(), theta)?;
    let mut tr = Transforms::new(p.poly());
    let mut beta = Vec::new();
    let mut terms = Vec::new();
    let mut partial = 0.0f64;
    for j in 1..=cfg.cap {
        let b = integrate_smooth_weight(&b_poly_with(2 * j, &mut tr, theta));
        let term = series_weight(j, c, theta, cfg.generalized_theta) * rat_to_f64(&(&b / &denominator));
        partial += term;
        beta.push(BetaEntry {
            j,
            order: 2 * j,
            value: b,
        });
        terms.push(TermEntry { j, value: term });
        if term.abs() < cfg.tol * partial.abs().max(1.0) {
            let h = partial;
            return Ok(RatioReport {
                c,
                theta: theta.clone(),
                denominator,
                beta,
                terms,
                j_used: j,
                h,
                lambda_implied: (h < 1.0).then(|| c / std::f64::consts::PI),
            });
        }
    }
    Err(Error::TruncationFailure {
        tol: cfg.tol,
        cap: cfg.cap,
    })
}

/// `h(c)` summed over exactly `n_terms` series terms, no truncation test.
pub fn h_ratio_fixed_terms(
    p: &MollifierSpec,
    c: f64,
    theta: &ThetaParam,
    n_terms: usize,
    generalized_theta: bool,
) -> Result<f64> {
    let denominator = checked_denominator(p.poly(), theta)?;
    let mut tr = Transforms::new(p.poly());
    let mut sum = 0.0;
    for j in 1..=n_terms {
        let b = integrate_smooth_weight(&b_poly_with(2 * j, &mut tr, theta));
        sum += series_weight(j, c, theta, generalized_theta) * rat_to_f64(&(&b / &denominator));
    }
    Ok(sum)
}

/// Dense matrix of exact rationals, indexed by monomial degree offset
/// (`[0][0]` is the `x² · x²` entry).
pub type RatMatrix = Vec<Vec<Rational>>;

/// Symmetric bilinear form of a quadratic functional `f` on monomials:
/// `¼ [f(x^k + x^l) − f(x^k − x^l)]`.
fn polarize(degree: usize, f: impl Fn(&RatPoly) -> Rational) -> RatMatrix {
    let n = degree - 1;
    let quarter = rat(1, 4);
    let mut m = vec![vec![Rational::zero(); n]; n];
    for a in 0..n {
        for b in a..n {
            let q = RatPoly::monomial(a + 2, Rational::one());
            let r = RatPoly::monomial(b + 2, Rational::one());
            let v = (f(&(&q + &r)) - f(&(&q - &r))) * &quarter;
            m[b][a] = v.clone();
            m[a][b] = v;
        }
    }
    m
}

/// Exact, `c`-independent parts of the quadratic forms for degree bound `M`:
/// the denominator matrix `D` and one matrix `N_j` per series index.
///
/// `N_j` is extended on demand; the forms for a smaller degree bound are
/// leading principal submatrices (see [`FormBasis::truncated`]).
#[derive(Clone, Debug)]
pub struct FormBasis {
    degree: usize,
    theta: ThetaParam,
    d: RatMatrix,
    n: Vec<RatMatrix>,
    whitening: Whitening,
}

/// Exact `D = L Δ Lᵀ` and the congruent matrices `L⁻¹ N_j L⁻ᵀ`.
#[derive(Clone, Debug)]
struct Whitening {
    l_inv: RatMatrix,
    pivots: Vec<Rational>,
    s: Vec<RatMatrix>,
}

impl FormBasis {
    pub fn new(degree: usize, theta: &ThetaParam) -> Result<Self> {
        if degree < 2 {
            return Err(Error::InadmissibleDegree(degree));
        }
        let d = polarize(degree, |p| raw_denominator(p, theta));
        Self::from_parts(degree, theta.clone(), d, Vec::new())
    }

    fn from_parts(degree: usize, theta: ThetaParam, d: RatMatrix, n: Vec<RatMatrix>) -> Result<Self> {
        let (l, pivots) = crate::linalg::ldl_exact(&d).map_err(|pivot| {
            Error::DegenerateDenominator(format!(
                "denominator form is not positive definite at degree {degree} (pivot {pivot})"
            ))
        })?;
        Ok(Self {
            degree,
            theta,
            d,
            n,
            whitening: Whitening {
                l_inv: crate::linalg::unit_lower_inverse(&l),
                pivots,
                s: Vec::new(),
            },
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn theta(&self) -> &ThetaParam {
        &self.theta
    }

    pub fn d(&self) -> &RatMatrix {
        &self.d
    }

    /// Exact `N_j` for series index `j ≥ 1`, i.e. the polarized `β_{2j}`.
    pub fn n_j(&mut self, j: usize) -> &RatMatrix {
        while self.n.len() < j {
            let order = 2 * (self.n.len() + 1);
            let theta = self.theta.clone();
            self.n.push(polarize(self.degree, |p| beta_of(order, p, &theta)));
        }
        &self.n[j - 1]
    }

    /// The same forms restricted to monomials of degree `≤ degree`.
    pub fn truncated(&self, degree: usize) -> Result<Self> {
        if degree < 2 || degree > self.degree {
            return Err(Error::InadmissibleDegree(degree));
        }
        let n = degree - 1;
        let cut = |m: &RatMatrix| -> RatMatrix { m[..n].iter().map(|row| row[..n].to_vec()).collect() };
        Self::from_parts(
            degree,
            self.theta.clone(),
            cut(&self.d),
            self.n.iter().map(cut).collect(),
        )
    }

    /// Exact `L⁻¹ N_j L⁻ᵀ` where `D = L Δ Lᵀ`.
    fn whitened_j(&mut self, j: usize) -> &RatMatrix {
        while self.whitening.s.len() < j {
            let next = self.whitening.s.len() + 1;
            self.n_j(next);
            let s = crate::linalg::congruence_exact(&self.whitening.l_inv, &self.n[next - 1]);
            self.whitening.s.push(s);
        }
        &self.whitening.s[j - 1]
    }

    /// Weighted sum `N(c) = Σ_j w_j(c) N_j`, truncated once a term's largest
    /// entry falls below `tol` times the largest entry of the partial sum.
    pub fn at(&mut self, c: f64, cfg: &SeriesConfig) -> Result<QuadForms> {
        cfg.validate(&self.theta)?;
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(format!("gap parameter c = {c}")));
        }
        let dim = self.degree - 1;
        let mut n_float = vec![vec![0.0; dim]; dim];
        let mut weights = Vec::new();
        for j in 1..=cfg.cap {
            let w = series_weight(j, c, &self.theta, cfg.generalized_theta);
            let nj = self.n_j(j);
            let mut term_max = 0.0f64;
            for (row, nrow) in n_float.iter_mut().zip(nj) {
                for (x, e) in row.iter_mut().zip(nrow) {
                    let t = w * rat_to_f64(e);
                    *x += t;
                    term_max = term_max.max(t.abs());
                }
            }
            weights.push(w);
            let partial_max = n_float.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
            if term_max <= cfg.tol * partial_max {
                let whitened = self.whitened_sum(&weights);
                return Ok(QuadForms {
                    degree: self.degree,
                    c,
                    n: n_float,
                    d: to_f64_matrix(&self.d),
                    d_exact: Some(self.d.clone()),
                    n_exact: Some(self.n[..weights.len()].to_vec()),
                    weights,
                    whitened: Some(whitened),
                });
            }
        }
        Err(Error::TruncationFailure {
            tol: cfg.tol,
            cap: cfg.cap,
        })
    }
}

impl FormBasis {
    fn whitened_sum(&mut self, weights: &[f64]) -> WhitenedForm {
        let dim = self.degree - 1;
        let mut s = vec![vec![0.0; dim]; dim];
        for (j, w) in weights.iter().enumerate() {
            let sj = self.whitened_j(j + 1);
            for (row, srow) in s.iter_mut().zip(sj) {
                for (x, e) in row.iter_mut().zip(srow) {
                    *x += w * rat_to_f64(e);
                }
            }
        }
        let inv_sqrt_pivots: Vec<f64> = self
            .whitening
            .pivots
            .iter()
            .map(|p| 1.0 / rat_to_f64(p).sqrt())
            .collect();
        for (i, row) in s.iter_mut().enumerate() {
            for (k, x) in row.iter_mut().enumerate() {
                *x *= inv_sqrt_pivots[i] * inv_sqrt_pivots[k];
            }
        }
        WhitenedForm {
            s,
            l_inv: to_f64_matrix(&self.whitening.l_inv),
            inv_sqrt_pivots,
        }
    }
}

/// `N(c)` congruence-transformed by the exact factorization of `D`:
/// with `G = Δ^(-1/2) L⁻¹`, `s = G N Gᵀ` and `G D Gᵀ = I`.
#[derive(Clone, Debug)]
pub struct WhitenedForm {
    pub s: Vec<Vec<f64>>,
    pub l_inv: Vec<Vec<f64>>,
    pub inv_sqrt_pivots: Vec<f64>,
}

impl WhitenedForm {
    /// Map a vector `y` in whitened coordinates back to `a = Gᵀ y`.
    pub fn unwhiten(&self, y: &[f64]) -> Vec<f64> {
        let n = y.len();
        let z: Vec<f64> = y.iter().zip(&self.inv_sqrt_pivots).map(|(y, p)| y * p).collect();
        (0..n).map(|i| (i..n).map(|k| self.l_inv[k][i] * z[k]).sum()).collect()
    }
}

pub fn to_f64_matrix(m: &RatMatrix) -> Vec<Vec<f64>> {
    m.iter().map(|row| row.iter().map(rat_to_f64).collect()).collect()
}

/// Quadratic forms with `h(c) = aᵀ N a / aᵀ D a` for coefficient vectors
/// `a = (a_2, …, a_M)`.
#[derive(Clone, Debug)]
pub struct QuadForms {
    pub degree: usize,
    pub c: f64,
    pub n: Vec<Vec<f64>>,
    pub d: Vec<Vec<f64>>,
    /// Exact `D`, when the forms came from the rational pipeline.
    pub d_exact: Option<RatMatrix>,
    /// Exact `N_j`, paired index-wise with `weights`.
    pub n_exact: Option<Vec<RatMatrix>>,
    pub weights: Vec<f64>,
    pub whitened: Option<WhitenedForm>,
}

impl QuadForms {
    /// Forms given directly as floating-point matrices.
    pub fn from_matrices(n: Vec<Vec<f64>>, d: Vec<Vec<f64>>) -> Result<Self> {
        let dim = n.len();
        if dim == 0 || d.len() != dim || n.iter().chain(&d).any(|row| row.len() != dim) {
            return Err(Error::InvalidParameter("forms must be square and of equal size".into()));
        }
        Ok(Self {
            degree: dim + 1,
            c: f64::NAN,
            n,
            d,
            d_exact: None,
            n_exact: None,
            weights: Vec::new(),
            whitened: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.n.len()
    }

    /// `aᵀ N a / aᵀ D a`.
    pub fn rayleigh(&self, a: &[f64]) -> f64 {
        quad(&self.n, a) / quad(&self.d, a)
    }
}

pub fn quad(m: &[Vec<f64>], a: &[f64]) -> f64 {
    m.iter()
        .zip(a)
        .map(|(row, ai)| ai * row.iter().zip(a).map(|(x, aj)| x * aj).sum::<f64>())
        .sum()
}

/// Quadratic forms of `h(c)` over monomials `x², …, x^M`.
pub fn quad_forms(degree: usize, c: f64, theta: &ThetaParam, cfg: &SeriesConfig) -> Result<QuadForms> {
    FormBasis::new(degree, theta)?.at(c, cfg)
}
