//! Normalized gap statistics for tables of zeta-zero ordinates.
//!
//! The largest normalized gap in a finite table is a witness at finite
//! height only; it says nothing rigorous about `λ = limsup δ(γ)`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Descents smaller than this are treated as rounding and re-sorted.
pub const ORDER_TOLERANCE: f64 = 1e-9;
/// Every nontrivial zero has ordinate above 14.13.
pub const MIN_FIRST_ORDINATE: f64 = 14.0;
pub const HISTOGRAM_BIN_WIDTH: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    source: String,
}

impl ZeroTable {
    /// Parse plaintext: one decimal ordinate per line, `#` comments, blank
    /// lines ignored, LF or CRLF.
    pub fn parse(text: &str, source: &str) -> Result<Self> {
        let mut ordinates = Vec::new();
        let mut first_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = idx + 1;
            let value: f64 = line.parse().map_err(|_| Error::Parse {
                line: lineno,
                content: raw.to_string(),
            })?;
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::Parse {
                    line: lineno,
                    content: raw.to_string(),
                });
            }
            if let Some(&prev) = ordinates.last() {
                if value < prev - ORDER_TOLERANCE {
                    return Err(Error::Order {
                        line: lineno,
                        previous: prev,
                        value,
                    });
                }
            } else {
                first_line = lineno;
            }
            ordinates.push(value);
        }
        if ordinates.is_empty() {
            return Err(Error::EmptyInput);
        }
        ordinates.sort_by(f64::total_cmp);
        if ordinates[0] <= MIN_FIRST_ORDINATE {
            return Err(Error::Parse {
                line: first_line,
                content: ordinates[0].to_string(),
            });
        }
        Ok(Self {
            ordinates,
            source: source.to_string(),
        })
    }

    pub fn from_ordinates(mut ordinates: Vec<f64>, source: &str) -> Result<Self> {
        if ordinates.is_empty() {
            return Err(Error::EmptyInput);
        }
        if ordinates.iter().any(|g| !g.is_finite()) {
            return Err(Error::InvalidParameter("non-finite ordinate".into()));
        }
        ordinates.sort_by(f64::total_cmp);
        if ordinates[0] <= MIN_FIRST_ORDINATE {
            return Err(Error::InvalidParameter(format!(
                "first ordinate {} is not above {MIN_FIRST_ORDINATE}",
                ordinates[0]
            )));
        }
        Ok(Self {
            ordinates,
            source: source.to_string(),
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    pub fn last(&self) -> f64 {
        *self.ordinates.last().expect("tables are nonempty")
    }

    /// `N(T)`: ordinates `≤ T`.
    pub fn count_up_to(&self, t: f64) -> usize {
        self.ordinates.partition_point(|&g| g <= t)
    }
}

pub fn load_zeros(path: impl AsRef<Path>) -> Result<ZeroTable> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    ZeroTable::parse(&text, &path.display().to_string())
}

/// `δ(γ) = (γ' − γ) log γ / 2π`.
pub fn normalized_gap(gamma: f64, gamma_next: f64) -> f64 {
    (gamma_next - gamma) * gamma.ln() / (2.0 * PI)
}

pub fn normalized_gaps(table: &ZeroTable) -> Result<Vec<f64>> {
    if table.count() < 2 {
        return Err(Error::InsufficientData(table.count()));
    }
    Ok(table.ordinates.windows(2).map(|w| normalized_gap(w[0], w[1])).collect())
}

/// `(T/2π) log(T/2π) − T/2π`.
pub fn counting_main_term(t: f64) -> f64 {
    let x = t / (2.0 * PI);
    x * x.ln() - x
}

/// `N(T) − main(T)` with `N(T)` counted from the table.
pub fn counting_residual(table: &ZeroTable, t: f64) -> Result<f64> {
    if !(t <= table.last()) {
        return Err(Error::OutOfRange { t, last: table.last() });
    }
    Ok(table.count_up_to(t) as f64 - counting_main_term(t))
}

/// Largest `|N(T) − main(T)|` over `T ∈ [γ_1, t_max]`.
///
/// Between ordinates the residual only decreases, so the extremes are the
/// one-sided limits at each ordinate; both are evaluated.
pub fn max_counting_residual(table: &ZeroTable, t_max: f64) -> Result<(f64, f64)> {
    if !(t_max <= table.last()) {
        return Err(Error::OutOfRange {
            t: t_max,
            last: table.last(),
        });
    }
    let mut worst = (table.ordinates[0], 0.0f64);
    for (i, &g) in table.ordinates.iter().enumerate() {
        if g > t_max {
            break;
        }
        let main = counting_main_term(g);
        let below = i as f64 - main;
        let above = table.count_up_to(g) as f64 - main;
        for r in [below, above] {
            if r.abs() > worst.1.abs() {
                worst = (g, r);
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

/// Gap statistics in the field order of the JSON report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapStats {
    pub max_delta: f64,
    pub argmax_gamma: f64,
    pub argmax_gamma_prime: f64,
    pub mean_delta: f64,
    pub count: usize,
    pub histogram: Vec<HistogramBin>,
}

impl GapStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("lo,hi,n\n");
        for b in &self.histogram {
            let _ = writeln!(out, "{},{},{}", b.lo, b.hi, b.n);
        }
        out
    }
}

pub fn max_gap_report(table: &ZeroTable) -> Result<GapStats> {
    let deltas = normalized_gaps(table)?;
    let (arg, max_delta) =
        deltas.iter().enumerate().fold(
            (0, f64::NEG_INFINITY),
            |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) },
        );
    let mean_delta = deltas.iter().sum::<f64>() / deltas.len() as f64;

    let n_bins = ((max_delta.ceil().max(1.0)) as usize) * 10;
    let mut histogram: Vec<HistogramBin> = (0..n_bins)
        .map(|i| HistogramBin {
            lo: i as f64 / 10.0,
            hi: (i + 1) as f64 / 10.0,
            n: 0,
        })
        .collect();
    for &d in &deltas {
        let idx = ((d / HISTOGRAM_BIN_WIDTH).floor().max(0.0) as usize).min(n_bins - 1);
        histogram[idx].n += 1;
    }

    Ok(GapStats {
        max_delta,
        argmax_gamma: table.ordinates[arg],
        argmax_gamma_prime: table.ordinates[arg + 1],
        mean_delta,
        count: table.count(),
        histogram,
    })
}
