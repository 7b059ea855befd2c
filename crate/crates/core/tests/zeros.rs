//! Gap statistics on the bundled table of the first 10⁴ zeros.

mod common;

use std::f64::consts::PI;

use common::zeros_fixture;
use largegaps::zerostats::{
    counting_main_term, counting_residual, load_zeros, max_counting_residual, max_gap_report, normalized_gaps,
    ZeroTable,
};
use largegaps::Error;

/// Ordinates read with nothing but `str::parse`.
fn plain_read() -> Vec<f64> {
    std::fs::read_to_string(zeros_fixture())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

#[test]
fn fixture_shape() {
    let t = load_zeros(zeros_fixture()).unwrap();
    assert_eq!(t.count(), 10_000);
    assert!((t.ordinates()[0] - 14.134_725_141_734_693).abs() < 1e-9);
    assert!((t.last() - 9_877.782_654_005_5).abs() < 1e-6);
    assert_eq!(t.ordinates(), plain_read().as_slice());
}

#[test]
fn max_gap_equals_full_scan() {
    let t = load_zeros(zeros_fixture()).unwrap();
    let stats = max_gap_report(&t).unwrap();
    let g = plain_read();
    let mut best = (f64::NEG_INFINITY, 0);
    for i in 0..g.len() - 1 {
        let d = (g[i + 1] - g[i]) * g[i].ln() / (2.0 * PI);
        if d > best.0 {
            best = (d, i);
        }
    }
    assert_eq!(stats.max_delta, best.0);
    assert_eq!(stats.argmax_gamma, g[best.1]);
    assert_eq!(stats.argmax_gamma_prime, g[best.1 + 1]);
    assert_eq!(stats.count, 10_000);
}

#[test]
fn mean_gap_tracks_local_density() {
    let t = load_zeros(zeros_fixture()).unwrap();
    let stats = max_gap_report(&t).unwrap();
    // with the log γ normalization the mean over [γ_1, T] is close to
    // (T log T − T) / (2π n), not 1, at this height
    let (t_end, n) = (t.last(), t.count() as f64);
    let expected = (t_end * t_end.ln() - t_end) / (2.0 * PI * n);
    assert!(
        (stats.mean_delta - expected).abs() < 0.01,
        "{} vs {expected}",
        stats.mean_delta
    );
    // rescaling by log(γ/2π) instead gives mean spacing 1
    let g = t.ordinates();
    let local: f64 = g
        .windows(2)
        .map(|w| (w[1] - w[0]) * (w[0] / (2.0 * PI)).ln() / (2.0 * PI))
        .sum::<f64>()
        / (n - 1.0);
    assert!((local - 1.0).abs() < 0.05, "{local}");
}

#[test]
fn histogram_partitions_the_gaps() {
    let t = load_zeros(zeros_fixture()).unwrap();
    let stats = max_gap_report(&t).unwrap();
    let total: usize = stats.histogram.iter().map(|b| b.n).sum();
    assert_eq!(total, 9_999);
    assert_eq!(stats.histogram.last().unwrap().hi, stats.max_delta.ceil());
    for w in stats.histogram.windows(2) {
        assert_eq!(w[0].hi, w[1].lo);
    }
    let deltas = normalized_gaps(&t).unwrap();
    for b in &stats.histogram {
        let n = deltas.iter().filter(|&&d| d >= b.lo && d < b.hi).count();
        let last = b.hi == stats.max_delta.ceil();
        let n = if last {
            n + deltas.iter().filter(|&&d| d == b.hi).count()
        } else {
            n
        };
        assert_eq!(n, b.n, "[{}, {})", b.lo, b.hi);
    }
    let csv = stats.histogram_csv();
    assert_eq!(csv.lines().count(), stats.histogram.len() + 1);
    assert!(csv.starts_with("lo,hi,n\n"));
}

#[test]
fn counting_residual_is_bounded() {
    let t = load_zeros(zeros_fixture()).unwrap();
    let (at, worst) = max_counting_residual(&t, t.last()).unwrap();
    assert!(worst.abs() < 3.0, "{worst} at {at}");
    // a grid scan never exceeds the reported supremum
    let g = plain_read();
    let mut x = 14.0;
    while x <= t.last() {
        let n = g.iter().take_while(|&&v| v <= x).count();
        let r = n as f64 - counting_main_term(x);
        assert!(r.abs() <= worst.abs() + 1e-9, "T={x}");
        assert_eq!(counting_residual(&t, x).unwrap(), r);
        x += 7.3;
    }
}

#[test]
fn residual_outside_table_is_an_error() {
    let t = ZeroTable::from_ordinates(vec![14.134725, 21.02204], "mem").unwrap();
    assert!(matches!(counting_residual(&t, 30.0), Err(Error::OutOfRange { .. })));
    assert!(matches!(max_counting_residual(&t, 30.0), Err(Error::OutOfRange { .. })));
}

#[test]
fn corrupt_tables_are_rejected() {
    let text = std::fs::read_to_string(zeros_fixture()).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    lines.swap(500, 501);
    assert!(matches!(
        ZeroTable::parse(&lines.join("\n"), "swapped"),
        Err(Error::Order { line: 502, .. })
    ));
    lines.swap(500, 501);
    lines[700] = "14.1x";
    assert!(matches!(
        ZeroTable::parse(&lines.join("\n"), "bad"),
        Err(Error::Parse { line: 701, .. })
    ));
    assert_eq!(ZeroTable::parse("# nothing\n\n", "empty"), Err(Error::EmptyInput));
}

#[test]
fn gaps_telescope() {
    let t = load_zeros(zeros_fixture()).unwrap();
    let g = t.ordinates();
    let deltas = normalized_gaps(&t).unwrap();
    assert!(deltas.iter().all(|&d| d >= 0.0));
    // undo the rescaling and the raw gaps sum to the covered span
    let raw: f64 = deltas.iter().zip(g).map(|(d, &gamma)| d * 2.0 * PI / gamma.ln()).sum();
    let span = t.last() - g[0];
    assert!((raw - span).abs() < 1e-9 * span, "{raw} vs {span}");
}

#[test]
fn max_gap_survives_concatenation() {
    let t = load_zeros(zeros_fixture()).unwrap();
    let mut doubled = t.ordinates().to_vec();
    doubled.extend(t.ordinates().iter().rev());
    let t2 = ZeroTable::from_ordinates(doubled, "twice").unwrap();
    assert_eq!(t2.count(), 20_000);
    assert_eq!(
        max_gap_report(&t2).unwrap().max_delta,
        max_gap_report(&t).unwrap().max_delta
    );
}

#[test]
fn residual_steps_by_one_at_each_ordinate() {
    let t = load_zeros(zeros_fixture()).unwrap();
    let g = t.ordinates();
    for i in (1..g.len() - 1).step_by(g.len() / 100) {
        let before = g[i].next_down();
        let jump = counting_residual(&t, g[i]).unwrap() - counting_residual(&t, before).unwrap();
        let drift = counting_main_term(g[i]) - counting_main_term(before);
        assert!((jump + drift - 1.0).abs() < 1e-9, "at {}", g[i]);
    }
}
