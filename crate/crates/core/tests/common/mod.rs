//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the exact pipeline: polynomials are plain `f64` coefficient lists and
//! every integral is done by adaptive Gauss–Legendre quadrature.
#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use largegaps::ratpoly::rat;
use largegaps::{MollifierSpec, Rational};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const HEADLINE_COEFFS: [i64; 5] = [1000, -9332, 30134, -40475, 19292];

pub fn headline_poly() -> MollifierSpec {
    MollifierSpec::from_ints(&HEADLINE_COEFFS).unwrap()
}

pub fn zeros_fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data/zeros_10k.txt")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random admissible shape with integer coefficients in `-3..=3`, degree ≤ `max_degree`.
pub fn random_int_spec(rng: &mut ChaCha8Rng, max_degree: usize) -> MollifierSpec {
    loop {
        let coeffs: Vec<i64> = (2..=max_degree).map(|_| rng.gen_range(-3..=3)).collect();
        if let Ok(p) = MollifierSpec::from_ints(&coeffs) {
            return p;
        }
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

/// Coefficients of `P` as `f64`, index = power of `x`.
pub fn float_poly(p: &MollifierSpec) -> Vec<f64> {
    let mut out = vec![0.0, 0.0];
    out.extend(p.coeffs().iter().map(to_f64));
    out
}

pub fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

const GL_ORDER: usize = 12;

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_n`.
fn gauss_legendre() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut xs = Vec::with_capacity(n);
        let mut ws = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            xs.push(x);
            ws.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        (xs, ws)
    })
}

fn gl(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (xs, ws) = gauss_legendre();
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    xs.iter().zip(ws).map(|(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

fn adapt(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let (l, r) = (gl(f, a, m), gl(f, m, b));
    if depth == 0 || (l + r - whole).abs() <= tol {
        return l + r;
    }
    adapt(f, a, m, l, 0.5 * tol, depth - 1) + adapt(f, m, b, r, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss–Legendre quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let whole = gl(&f, a, b);
    adapt(&f, a, b, whole, 1e-13 * whole.abs() + 1e-20, 10)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn fact(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Float oracle for the shifted-moment coefficient `B(j; u)`, evaluating
/// each of its six integrals directly.
pub struct BOracle {
    p: Vec<f64>,
    theta: f64,
}

impl BOracle {
    pub fn new(p: &MollifierSpec, theta: f64) -> Self {
        BOracle {
            p: float_poly(p),
            theta,
        }
    }

    /// `∫_0^u t^r P(u − t) dt`.
    pub fn p_r(&self, r: usize, u: f64) -> f64 {
        integrate(|t| t.powi(r as i32) * horner(&self.p, u - t), 0.0, u)
    }

    /// `∫_0^u t (1/ϑ − t)^k P(u − t) dt`.
    pub fn kernel(&self, k: usize, u: f64) -> f64 {
        let ti = 1.0 / self.theta;
        integrate(|t| t * (ti - t).powi(k as i32) * horner(&self.p, u - t), 0.0, u)
    }

    pub fn b(&self, j: usize, u: f64) -> f64 {
        let th = self.theta;
        let (p1, p2, p3) = (self.p_r(1, u), self.p_r(2, u), self.p_r(3, u));
        let (pj2, pj3) = (self.p_r(j + 2, u), self.p_r(j + 3, u));
        -2.0 * p1 * pj2 / fact(j + 2) + 2.0 * th * p2 * pj2 / fact(j + 2) + 4.0 * th * p1 * pj3 / fact(j + 3)
            - th / fact(j + 2) * p1 * self.kernel(j + 2, u)
            + th / fact(j + 1) * p2 * self.kernel(j + 1, u)
            - th / (6.0 * fact(j)) * p3 * self.kernel(j, u)
    }

    /// `∫_0^1 (1 − x)^3 B(j; x) dx`.
    pub fn beta(&self, j: usize) -> f64 {
        integrate(|x| (1.0 - x).powi(3) * self.b(j, x), 0.0, 1.0)
    }

    /// `∫_0^1 (1 − x)^3 (P_1² − P_1 P_2) dx` at `ϑ = 1/2`.
    pub fn denominator(&self) -> f64 {
        integrate(
            |x| {
                let p1 = self.p_r(1, x);
                (1.0 - x).powi(3) * (p1 * p1 - p1 * self.p_r(2, x))
            },
            0.0,
            1.0,
        )
    }

    /// `h(c)` at `ϑ = 1/2`, summing `terms` series terms.
    pub fn h(&self, c: f64, terms: usize) -> f64 {
        let den = self.denominator();
        let mut s = 0.0;
        for j in 1..=terms {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let w = sign * c.powi(2 * j as i32 + 1) / (2f64.powi(2 * j as i32 - 1) * (2 * j + 1) as f64);
            s += w * self.beta(2 * j);
        }
        s / (2.0 * std::f64::consts::PI * den)
    }
}

/// Local factor of `A` at `p`, straight from its product form.
pub fn a_local(p: u64) -> f64 {
    let p = p as f64;
    (1.0 + 8.0 / p) * (1.0 - 1.0 / p).powi(8)
}

/// Primes by trial division.
pub fn primes_trial(limit: u64) -> Vec<u64> {
    (2..=limit)
        .filter(|&n| (2..).take_while(|d| d * d <= n).all(|d| n % d != 0))
        .collect()
}

pub fn half() -> Rational {
    rat(1, 2)
}
