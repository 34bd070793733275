use serde::{Deserialize, Serialize};

use super::EstimatorError;
use crate::qstate::{Ensemble, Spectrum};

/// Per-bin separability tallies.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct BinTally {
    pub c_lo: f64,
    pub c_hi: f64,
    pub n_total: u64,
    pub n_sep: u64,
}

impl BinTally {
    pub fn sigma_hat(&self) -> Option<f64> {
        (self.n_total > 0).then(|| self.n_sep as f64 / self.n_total as f64)
    }

    /// Binomial standard error sqrt(p(1-p)/n).
    pub fn stderr(&self) -> Option<f64> {
        self.sigma_hat()
            .map(|p| (p * (1.0 - p) / self.n_total as f64).sqrt())
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.c_lo + self.c_hi)
    }
}

/// Binned estimate of the separability function over maximal concurrence:
/// the numerical surrogate for sigma^(beta)(C).
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct BinnedCurve {
    pub ensemble: Ensemble,
    /// Fingerprint of the producing plan; empty for curves re-read from CSV.
    pub fingerprint: String,
    pub bins: Vec<BinTally>,
}

/// Orbit separability probability at one fixed spectrum.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct OrbitEstimate {
    pub spectrum: Spectrum,
    pub concurrence: f64,
    pub n_total: u64,
    pub n_separable: u64,
}

impl OrbitEstimate {
    pub fn p_hat(&self) -> f64 {
        self.n_separable as f64 / self.n_total as f64
    }

    pub fn stderr(&self) -> f64 {
        let p = self.p_hat();
        (p * (1.0 - p) / self.n_total as f64).sqrt()
    }
}

/// Prints with 17 significant digits so the decimal round-trips losslessly.
pub(crate) fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.16e}")
    }
}

impl BinnedCurve {
    pub fn empty(ensemble: Ensemble, fingerprint: String, edges: &[f64]) -> Self {
        let bins = edges
            .windows(2)
            .map(|w| BinTally {
                c_lo: w[0],
                c_hi: w[1],
                n_total: 0,
                n_sep: 0,
            })
            .collect();
        BinnedCurve {
            ensemble,
            fingerprint,
            bins,
        }
    }

    pub fn same_grid(&self, other: &BinnedCurve) -> bool {
        self.bins.len() == other.bins.len()
            && self
                .bins
                .iter()
                .zip(other.bins.iter())
                .all(|(a, b)| a.c_lo == b.c_lo && a.c_hi == b.c_hi)
    }

    /// Index of the bin holding concurrence `c`; bins are [lo, hi) with the
    /// last bin closed so C = 1 lands in it.
    pub fn bin_index_of(edges: &[f64], c: f64) -> usize {
        let n_bins = edges.len() - 1;
        let idx = edges.partition_point(|&e| e <= c);
        if idx == 0 {
            0
        } else {
            (idx - 1).min(n_bins - 1)
        }
    }

    /// Curve CSV: one row per bin, reals with 17 significant digits, empty
    /// bins flagged by nan estimates.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("beta,c_lo,c_hi,n_total,n_sep,sigma_hat,stderr\n");
        for b in &self.bins {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.ensemble.beta(),
                fmt_g17(b.c_lo),
                fmt_g17(b.c_hi),
                b.n_total,
                b.n_sep,
                fmt_g17(b.sigma_hat().unwrap_or(f64::NAN)),
                fmt_g17(b.stderr().unwrap_or(f64::NAN)),
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, EstimatorError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(EstimatorError::MalformedCsv {
            line: 1,
            reason: "empty file".into(),
        })?;
        if header.trim() != "beta,c_lo,c_hi,n_total,n_sep,sigma_hat,stderr" {
            return Err(EstimatorError::MalformedCsv {
                line: 1,
                reason: format!("unexpected header: {header}"),
            });
        }
        let mut ensemble = None;
        let mut bins = Vec::new();
        for (idx, line) in lines {
            let line_no = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(EstimatorError::MalformedCsv {
                    line: line_no,
                    reason: format!("expected 7 fields, got {}", fields.len()),
                });
            }
            let bad = |reason: String| EstimatorError::MalformedCsv {
                line: line_no,
                reason,
            };
            let beta: u8 = fields[0]
                .trim()
                .parse()
                .map_err(|e| bad(format!("beta: {e}")))?;
            let ens = Ensemble::from_beta(beta).map_err(|e| bad(e.to_string()))?;
            match ensemble {
                None => ensemble = Some(ens),
                Some(prev) if prev != ens => {
                    return Err(bad("mixed beta values in one curve".into()))
                }
                _ => {}
            }
            let parse_f = |s: &str, name: &str| -> Result<f64, EstimatorError> {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| bad(format!("{name}: {e}")))
            };
            let c_lo = parse_f(fields[1], "c_lo")?;
            let c_hi = parse_f(fields[2], "c_hi")?;
            let n_total: u64 = fields[3]
                .trim()
                .parse()
                .map_err(|e| bad(format!("n_total: {e}")))?;
            let n_sep: u64 = fields[4]
                .trim()
                .parse()
                .map_err(|e| bad(format!("n_sep: {e}")))?;
            if n_sep > n_total {
                return Err(bad(format!("n_sep {n_sep} exceeds n_total {n_total}")));
            }
            bins.push(BinTally {
                c_lo,
                c_hi,
                n_total,
                n_sep,
            });
        }
        let ensemble = ensemble.ok_or(EstimatorError::MalformedCsv {
            line: 1,
            reason: "no data rows".into(),
        })?;
        Ok(BinnedCurve {
            ensemble,
            fingerprint: String::new(),
            bins,
        })
    }
}

/// Sums per-bin tallies of partial curves from the same plan. Associative and
/// commutative, so the merge result is independent of worker count and order.
pub fn merge_partials(parts: &[BinnedCurve]) -> Result<BinnedCurve, EstimatorError> {
    let first = parts
        .first()
        .ok_or_else(|| EstimatorError::InvalidPlan("merge of zero curves".into()))?;
    let mut merged = first.clone();
    for part in &parts[1..] {
        if part.fingerprint != first.fingerprint {
            return Err(EstimatorError::FingerprintMismatch {
                left: first.fingerprint.clone(),
                right: part.fingerprint.clone(),
            });
        }
        if !merged.same_grid(part) || part.ensemble != first.ensemble {
            return Err(EstimatorError::GridMismatch);
        }
        for (acc, b) in merged.bins.iter_mut().zip(part.bins.iter()) {
            acc.n_total += b.n_total;
            acc.n_sep += b.n_sep;
        }
    }
    Ok(merged)
}
