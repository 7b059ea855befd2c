//! Exact univariate polynomials over the rationals.
//!
//! Every integral the gap functional needs is an integral of a polynomial on
//! `[0, 1]`, so all of it can be carried out here without rounding. The one
//! non-standard operation is [`RatPoly::convolve_power`], the transform
//!
//! ```text
//! P_r(x) = ∫_0^x t^r P(x - t) dt
//! ```
//!
//! which sends `x^k` to `r! k! / (r + k + 1)! · x^(r+k+1)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational scalar. Always in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Largest index served from the factorial table. The gap functional needs
/// `(j + 3)!` with `j <= 2 * 60`.
const FACTORIAL_TABLE_LEN: usize = 192;

fn factorial_table() -> &'static [BigInt] {
    static TABLE: OnceLock<Vec<BigInt>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(FACTORIAL_TABLE_LEN);
        let mut acc = BigInt::one();
        table.push(acc.clone());
        for n in 1..FACTORIAL_TABLE_LEN {
            acc *= n;
            table.push(acc.clone());
        }
        table
    })
}

/// `n!` as an exact integer.
pub fn factorial(n: usize) -> BigInt {
    let table = factorial_table();
    if n < table.len() {
        return table[n].clone();
    }
    let mut acc = table[table.len() - 1].clone();
    for m in table.len()..=n {
        acc *= m;
    }
    acc
}

/// Binomial coefficient `C(n, k)`; zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Nearest `f64` to an exact rational.
pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Polynomial with exact rational coefficients; `coeffs[k]` multiplies `x^k`.
///
/// Trailing zeros are never stored, so the zero polynomial has no
/// coefficients and structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    /// `c · x^k`.
    pub fn monomial(k: usize, c: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    /// `(1 - x)^n`.
    pub fn one_minus_x_pow(n: usize) -> Self {
        let coeffs = (0..=n)
            .map(|i| {
                let b = Rational::from_integer(binomial(n, i));
                if i % 2 == 0 {
                    b
                } else {
                    -b
                }
            })
            .collect();
        Self::from_coeffs(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rat_to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect();
        Self::from_coeffs(coeffs)
    }

    /// The convolution transform `P_r(x) = ∫_0^x t^r P(x - t) dt`.
    pub fn convolve_power(&self, r: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let r_fact = factorial(r);
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + r + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let weight = Rational::new(&r_fact * factorial(k), factorial(r + k + 1));
            coeffs[r + k + 1] = c * weight;
        }
        Self::from_coeffs(coeffs)
    }

    /// `∫_0^1 p(x) dx`.
    pub fn integrate_unit(&self) -> Rational {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c / Rational::from_integer(BigInt::from(k + 1)))
            .fold(Rational::zero(), |acc, term| acc + term)
    }

    /// `∫_0^u t (theta_inv - t)^k P(u - t) dt` as a polynomial in `u`.
    ///
    /// Expanding `(theta_inv - t)^k` binomially turns each piece into a
    /// convolution transform: `Σ_i C(k, i) theta_inv^(k-i) (-1)^i P_{i+1}(u)`.
    pub fn shifted_kernel_expand(&self, k: usize, theta_inv: &Rational) -> Self {
        let mut acc = Self::zero();
        if self.is_zero() {
            return acc;
        }
        for i in 0..=k {
            let mut weight = Rational::from_integer(binomial(k, i)) * pow(theta_inv, k - i);
            if i % 2 == 1 {
                weight = -weight;
            }
            acc = &acc + &self.convolve_power(i + 1).scale(&weight);
        }
        acc
    }
}

pub fn pow(base: &Rational, exp: usize) -> Rational {
    num_traits::pow(base.clone(), exp)
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: &'a RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        RatPoly::from_coeffs(coeffs)
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: &'a RatPoly) -> RatPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: &'a RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Add for RatPoly {
    type Output = RatPoly;

    fn add(self, rhs: RatPoly) -> RatPoly {
        &self + &rhs
    }
}

impl Sub for RatPoly {
    type Output = RatPoly;

    fn sub(self, rhs: RatPoly) -> RatPoly {
        &self - &rhs
    }
}

impl Mul for RatPoly {
    type Output = RatPoly;

    fn mul(self, rhs: RatPoly) -> RatPoly {
        &self * &rhs
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;

    fn neg(self) -> RatPoly {
        -&self
    }
}
