//! Euler products against straightforward loops and against each other.

mod common;

use common::{a_local, primes_trial};
use largegaps::constants::{
    check_identities, euler_product, euler_product_by_name, euler_product_over, local_factors, primes_up_to, Constant,
};
use largegaps::Error;

fn c_local(p: f64) -> f64 {
    (1.0 + 2.0 / p) * (1.0 - 1.0 / p).powi(2)
}

fn d_local(p: f64) -> f64 {
    (1.0 + 4.0 * (p - 1.0) / (p * p) / (1.0 + 2.0 / p).powi(2)) * (1.0 - 1.0 / p).powi(4)
}

#[test]
fn sieve_matches_trial_division() {
    assert_eq!(primes_up_to(20_000), primes_trial(20_000));
    assert_eq!(primes_up_to(1_000_000).len(), 78_498);
}

#[test]
fn products_match_plain_loops() {
    let cutoff = 100_000;
    let primes = primes_trial(cutoff);
    for (name, local) in [
        (Constant::A, a_local as fn(u64) -> f64),
        (Constant::C, |p| c_local(p as f64)),
        (Constant::D, |p| d_local(p as f64)),
    ] {
        let direct: f64 = primes.iter().map(|&p| local(p)).product();
        let got = euler_product(name, cutoff).unwrap().value;
        assert!((got - direct).abs() < 1e-12 * direct, "{name}: {got} vs {direct}");
    }
}

#[test]
fn identities_hold_for_the_truncated_products() {
    let cutoff = 1_000_000;
    let primes = primes_up_to(cutoff);
    let v = |c| euler_product_over(c, cutoff, &primes).unwrap().value;
    let a = v(Constant::A);
    let c2d = v(Constant::C).powi(2) * v(Constant::D);
    assert!((c2d - a).abs() < 1e-12 * a, "{c2d} vs {a}: {}", (c2d - a) / a);
    assert!((v(Constant::U1) * v(Constant::U2) * v(Constant::W) - a).abs() < 1e-12 * a);
}

#[test]
fn exact_identities_up_to_ten_thousand() {
    for check in check_identities(10_000) {
        assert!(check.passed(), "{check:?}");
        assert_eq!(check.primes_checked, 1229);
    }
}

#[test]
fn a_at_default_cutoff() {
    let r = euler_product(Constant::A, 1_000_000).unwrap();
    assert!(r.value > 0.0 && r.value < 1.0);
    assert!(r.tail_bound < 1e-4);
}

#[test]
fn tail_bounds_cover_larger_cutoffs() {
    let primes = primes_up_to(1_000_000);
    for name in Constant::ALL {
        let mut prev = f64::INFINITY;
        let far = euler_product_over(name, 1_000_000, &primes).unwrap();
        for cutoff in [100, 1_000, 10_000, 100_000] {
            let r = euler_product_over(name, cutoff, &primes).unwrap();
            assert!(r.tail_bound < prev);
            prev = r.tail_bound;
            let drift = (far.value / r.value).ln().abs();
            assert!(drift <= r.tail_bound, "{name} at {cutoff}: {drift} > {}", r.tail_bound);
        }
    }
}

#[test]
fn rejects_small_cutoff_and_bad_names() {
    assert!(matches!(
        euler_product(Constant::A, 99),
        Err(Error::InvalidParameter(_))
    ));
    assert!(matches!(
        euler_product_by_name("Q", 1000),
        Err(Error::UnknownConstant(_))
    ));
    assert!(euler_product_by_name("U2", 1000).is_ok());
    assert_eq!(local_factors(91).unwrap_err(), Error::NotPrime(91));
}
