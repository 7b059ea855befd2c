//! Euler-product constants of the mean-value estimates.
//!
//! Each constant is `∏_p f(p)` with a local factor that is a rational
//! function of `p`. The constants cancel in `h(c)`; they are computed to
//! check the identities `C²D = A` and `U₁U₂W = A`, which already hold
//! prime by prime.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratpoly::{rat_to_f64, Rational};

pub const DEFAULT_CUTOFF: u64 = 1_000_000;
pub const MIN_CUTOFF: u64 = 100;

/// Local factors at one prime, with every shift parameter at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalFactors {
    pub p: u64,
    pub a: Rational,
    pub c: Rational,
    pub d: Rational,
    pub u1: Rational,
    pub u2: Rational,
    pub w: Rational,
    pub f: Rational,
    pub v1: Rational,
    pub v2: Rational,
    pub v3: Rational,
    pub v4: Rational,
}

impl LocalFactors {
    /// `C_p² D_p = A_p`.
    pub fn c2d_identity(&self) -> bool {
        &self.c * &self.c * &self.d == self.a
    }

    /// `U1_p U2_p W_p = A_p`.
    pub fn u1u2w_identity(&self) -> bool {
        &self.u1 * &self.u2 * &self.w == self.a
    }

    pub fn all(&self) -> [(&'static str, &Rational); 11] {
        [
            ("A", &self.a),
            ("C", &self.c),
            ("D", &self.d),
            ("U1", &self.u1),
            ("U2", &self.u2),
            ("W", &self.w),
            ("F", &self.f),
            ("V1", &self.v1),
            ("V2", &self.v2),
            ("V3", &self.v3),
            ("V4", &self.v4),
        ]
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Exact local factors at the prime `p`.
pub fn local_factors(p: u64) -> Result<LocalFactors> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let one = Rational::one();
    let two = Rational::from_integer(BigInt::from(2));
    let four = Rational::from_integer(BigInt::from(4));
    let pr = Rational::from_integer(BigInt::from(p));
    let inv_p = pr.recip();
    let phi = &pr - &one;
    let one_minus = &one - &inv_p;
    let pow = |r: &Rational, e: i32| num_traits::pow(r.clone(), e as usize);

    let f = one_minus.clone();
    // the denominator φ(p)·p^(s+α₁) is just φ(p) at s = α₁ = 0
    let v1_inv = &one - &two * &f * &f / &phi;
    let v1 = v1_inv.recip();
    let u1 = &v1_inv / pow(&one_minus, 2);
    let one_plus_2v1 = &one + &two * &v1 / &pr;
    let one_plus_2 = &one + &two / &pr;
    let v2 = one_plus_2v1.recip();
    let v3 = &one_plus_2 * &v2;
    let v4_inv = &one + &two * &v1 / &pr * &one_plus_2 * &v2;
    let v4 = v4_inv.recip();
    let u2 = &one_plus_2v1 * &v4_inv * pow(&one_minus, 4);
    let w = (&one + &two * &f * &v1 * &v3 * &v4 / &pr + &four * &f * &f * &v1 * &v2 * &v4 / &pr) * pow(&one_minus, 6);
    let a = (&one + Rational::from_integer(BigInt::from(8)) / &pr) * pow(&one_minus, 8);
    let c = &one_plus_2 * pow(&one_minus, 2);
    let d = (&one + &four * &phi / (&pr * &pr) / pow(&one_plus_2, 2)) * pow(&one_minus, 4);

    Ok(LocalFactors {
        p,
        a,
        c,
        d,
        u1,
        u2,
        w,
        f,
        v1,
        v2,
        v3,
        v4,
    })
}

/// Primes `≤ limit` by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut m = i * i;
        while m <= n {
            composite[m] = true;
            m += i;
        }
    }
    primes
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Constant {
    A,
    C,
    D,
    U1,
    U2,
    W,
}

impl Constant {
    pub const ALL: [Constant; 6] = [
        Constant::A,
        Constant::C,
        Constant::D,
        Constant::U1,
        Constant::U2,
        Constant::W,
    ];

    /// Bound on `p² |log f(p)|` valid for every prime `p > 100`.
    ///
    /// With `x = 1/p` the local factors expand as `1 − 36x² + …` (A),
    /// `1 − 3x² + 2x³` (C), `1 − 30x² + …` (D), `1 + x² + …` (U1),
    /// `1 + 2x² + …` (U2), `1 − 39x² + …` (W); the suprema of
    /// `|log f| / x²` over `0 < x ≤ 1/100` sit just above the leading
    /// coefficients and are rounded up here.
    pub fn tail_constant(self) -> f64 {
        match self {
            Constant::A => 37.0,
            Constant::C => 3.1,
            Constant::D => 31.0,
            Constant::U1 => 1.1,
            Constant::U2 => 2.1,
            Constant::W => 40.0,
        }
    }

    /// Local factor in floating point.
    pub fn local_f64(self, p: u64) -> f64 {
        let p = p as f64;
        let x = 1.0 / p;
        let om = 1.0 - x;
        match self {
            Constant::A => (1.0 + 8.0 * x) * om.powi(8),
            Constant::C => (1.0 + 2.0 * x) * om.powi(2),
            Constant::D => (1.0 + 4.0 * (p - 1.0) * x * x / (1.0 + 2.0 * x).powi(2)) * om.powi(4),
            _ => {
                let f = om;
                let v1_inv = 1.0 - 2.0 * f * f / (p - 1.0);
                let v1 = 1.0 / v1_inv;
                let a1 = 1.0 + 2.0 * v1 * x;
                let v2 = 1.0 / a1;
                let v3 = (1.0 + 2.0 * x) * v2;
                let v4_inv = 1.0 + 2.0 * v1 * x * (1.0 + 2.0 * x) * v2;
                let v4 = 1.0 / v4_inv;
                match self {
                    Constant::U1 => v1_inv / (om * om),
                    Constant::U2 => a1 * v4_inv * om.powi(4),
                    Constant::W => (1.0 + 2.0 * f * v1 * v3 * v4 * x + 4.0 * f * f * v1 * v2 * v4 * x) * om.powi(6),
                    _ => unreachable!(),
                }
            }
        }
    }

    /// `log f(p)`, assembled from `ln_1p` of the small parts of each factor
    /// so that terms near 1 keep their relative accuracy.
    pub fn local_ln(self, p: u64) -> f64 {
        let p = p as f64;
        let x = 1.0 / p;
        let lom = (-x).ln_1p();
        match self {
            Constant::A => (8.0 * x).ln_1p() + 8.0 * lom,
            Constant::C => (2.0 * x).ln_1p() + 2.0 * lom,
            Constant::D => (4.0 * (p - 1.0) * x * x / (1.0 + 2.0 * x).powi(2)).ln_1p() + 4.0 * lom,
            _ => {
                let f = 1.0 - x;
                let v1_inv_m1 = -2.0 * f * f / (p - 1.0);
                let v1 = 1.0 / (1.0 + v1_inv_m1);
                let a1_m1 = 2.0 * v1 * x;
                let v2 = 1.0 / (1.0 + a1_m1);
                let v3 = (1.0 + 2.0 * x) * v2;
                let v4_inv_m1 = 2.0 * v1 * x * (1.0 + 2.0 * x) * v2;
                let v4 = 1.0 / (1.0 + v4_inv_m1);
                match self {
                    Constant::U1 => v1_inv_m1.ln_1p() - 2.0 * lom,
                    Constant::U2 => a1_m1.ln_1p() + v4_inv_m1.ln_1p() + 4.0 * lom,
                    Constant::W => (2.0 * f * v1 * v3 * v4 * x + 4.0 * f * f * v1 * v2 * v4 * x).ln_1p() + 6.0 * lom,
                    _ => unreachable!(),
                }
            }
        }
    }

    pub fn local_exact(self, lf: &LocalFactors) -> &Rational {
        match self {
            Constant::A => &lf.a,
            Constant::C => &lf.c,
            Constant::D => &lf.d,
            Constant::U1 => &lf.u1,
            Constant::U2 => &lf.u2,
            Constant::W => &lf.w,
        }
    }
}

impl fmt::Display for Constant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constant::A => "A",
            Constant::C => "C",
            Constant::D => "D",
            Constant::U1 => "U1",
            Constant::U2 => "U2",
            Constant::W => "W",
        };
        f.write_str(s)
    }
}

impl FromStr for Constant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Constant::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownConstant(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerProductResult {
    pub name: Constant,
    pub value: f64,
    pub cutoff: u64,
    /// Bound on `|log(true value / value)|` from the primes above `cutoff`.
    pub tail_bound: f64,
}

/// `∏_{p ≤ cutoff} f(p)`, accumulated as a sum of logarithms in increasing
/// order of `p`.
pub fn euler_product(name: Constant, cutoff: u64) -> Result<EulerProductResult> {
    euler_product_over(name, cutoff, &primes_up_to(cutoff))
}

/// Same as [`euler_product`] with a precomputed prime list (must cover
/// `cutoff`; larger primes are ignored).
pub fn euler_product_over(name: Constant, cutoff: u64, primes: &[u64]) -> Result<EulerProductResult> {
    if cutoff < MIN_CUTOFF {
        return Err(Error::InvalidParameter(format!(
            "prime cutoff {cutoff} is below {MIN_CUTOFF}"
        )));
    }
    // Neumaier-compensated sum, in increasing order of p
    let (mut log_sum, mut comp) = (0.0f64, 0.0f64);
    for &p in primes.iter().take_while(|&&p| p <= cutoff) {
        let v = name.local_ln(p);
        let t = log_sum + v;
        comp += if log_sum.abs() >= v.abs() {
            (log_sum - t) + v
        } else {
            (v - t) + log_sum
        };
        log_sum = t;
    }
    let log_sum = log_sum + comp;
    Ok(EulerProductResult {
        name,
        value: log_sum.exp(),
        cutoff,
        // Σ_{p > N} K/p² < K Σ_{n > N} 1/n² < K/N
        tail_bound: name.tail_constant() / cutoff as f64,
    })
}

pub fn euler_product_by_name(name: &str, cutoff: u64) -> Result<EulerProductResult> {
    euler_product(name.parse()?, cutoff)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub max_prime: u64,
    pub primes_checked: usize,
    /// First prime where the identity fails, if any.
    pub first_failure: Option<u64>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Check `C_p² D_p = A_p` and `U1_p U2_p W_p = A_p` exactly for all primes
/// up to `max_prime`.
pub fn check_identities(max_prime: u64) -> [IdentityCheck; 2] {
    let primes = primes_up_to(max_prime);
    let mut c2d = None;
    let mut u1u2w = None;
    for &p in &primes {
        let lf = local_factors(p).expect("sieve yields primes");
        if c2d.is_none() && !lf.c2d_identity() {
            c2d = Some(p);
        }
        if u1u2w.is_none() && !lf.u1u2w_identity() {
            u1u2w = Some(p);
        }
    }
    [
        IdentityCheck {
            identity: "C^2 D = A",
            max_prime,
            primes_checked: primes.len(),
            first_failure: c2d,
        },
        IdentityCheck {
            identity: "U1 U2 W = A",
            max_prime,
            primes_checked: primes.len(),
            first_failure: u1u2w,
        },
    ]
}

/// `|f − 1|` for an exact local factor, as a float.
pub fn deviation_from_one(r: &Rational) -> f64 {
    rat_to_f64(&(r - Rational::one()).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::rat;

    #[test]
    fn p2_values() {
        let lf = local_factors(2).unwrap();
        assert_eq!(lf.a, rat(5, 256));
        assert_eq!(lf.c, rat(1, 2));
        assert!(lf.c2d_identity());
        assert_eq!(lf.v1, rat(2, 1));
        assert_eq!(lf.u1, rat(2, 1));
    }

    #[test]
    fn p3_identity() {
        let lf = local_factors(3).unwrap();
        assert!(lf.u1u2w_identity());
        assert!(lf.c2d_identity());
    }

    #[test]
    fn not_prime() {
        assert_eq!(local_factors(1), Err(Error::NotPrime(1)));
        assert_eq!(local_factors(91), Err(Error::NotPrime(91)));
    }

    #[test]
    fn float_factors_match_exact() {
        for p in primes_up_to(2000) {
            let lf = local_factors(p).unwrap();
            for name in Constant::ALL {
                let exact = rat_to_f64(name.local_exact(&lf));
                assert!(((name.local_f64(p) - exact) / exact).abs() < 1e-13, "{name} at {p}");
            }
        }
    }

    #[test]
    fn log_factors_keep_relative_accuracy() {
        let primes = primes_up_to(200_000);
        for &p in primes.iter().step_by(97) {
            let lf = local_factors(p).unwrap();
            for name in Constant::ALL {
                let exact = rat_to_f64(&(name.local_exact(&lf) - Rational::one())).ln_1p();
                let got = name.local_ln(p);
                // error of order eps/p, so the sum over primes stays near eps
                assert!(
                    (got - exact).abs() < 4e-15 / p as f64,
                    "{name} at {p}: {got} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn factors_in_range() {
        for p in primes_up_to(3000) {
            let lf = local_factors(p).unwrap();
            for (name, v) in lf.all() {
                assert!(v.is_positive() && v <= &rat(2, 1), "{name}_{p} = {v}");
            }
        }
    }

    #[test]
    fn tail_constants_bound_local_factors() {
        for p in primes_up_to(1_000_000).into_iter().filter(|&p| p > 100) {
            let x2 = (p as f64).powi(2);
            for name in Constant::ALL {
                let v = x2 * name.local_f64(p).ln().abs();
                assert!(v <= name.tail_constant(), "{name} at {p}: {v}");
            }
        }
    }

    #[test]
    fn sieve_counts() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(1_000_000).len(), 78_498);
        let brute = (0..10_000u64).filter(|&n| is_prime(n)).count();
        assert_eq!(primes_up_to(9_999).len(), brute);
    }

    #[test]
    fn constant_names() {
        assert_eq!("u2".parse::<Constant>().unwrap(), Constant::U2);
        assert!(matches!("Z".parse::<Constant>(), Err(Error::UnknownConstant(_))));
        assert!(euler_product_by_name("Q", 1000).is_err());
        assert!(euler_product(Constant::A, 99).is_err());
    }
}
