use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::law::SpectralLaw;
use super::EstimatorError;
use crate::qstate::Ensemble;

/// Full reproducibility record for one binned-curve estimation run.
/// The fingerprint of the plan keys checkpoints and merges.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SamplingPlan {
    pub seed: u64,
    pub ensemble: Ensemble,
    pub spectral_law: SpectralLaw,
    /// Number of spectrum draws.
    pub n_spectra: u64,
    /// Haar orbit points tested per spectrum.
    pub orbits_per_spectrum: u32,
    /// Strictly increasing, first edge 0, last edge 1.
    pub bin_edges: Vec<f64>,
    /// Spectra per deterministic work chunk.
    pub chunk_size: u64,
    /// Replace the pseudo-random uniform-simplex spectrum draw with a
    /// shifted Halton sequence (orbit draws stay pseudo-random).
    #[serde(default)]
    pub qmc_spectra: bool,
}

impl SamplingPlan {
    /// Uniform grid of `n` bins over [0, 1]; `n = 100` matches the default
    /// 0.01 resolution and places an edge exactly at the C = 1/2 transition.
    pub fn uniform_bins(n: usize) -> Vec<f64> {
        (0..=n).map(|i| i as f64 / n as f64).collect()
    }

    pub fn validate(&self) -> Result<(), EstimatorError> {
        let fail = |msg: String| Err(EstimatorError::InvalidPlan(msg));
        if self.n_spectra == 0 {
            return fail("n_spectra must be >= 1".into());
        }
        if self.orbits_per_spectrum == 0 {
            return fail("orbits_per_spectrum must be >= 1".into());
        }
        if self.chunk_size == 0 {
            return fail("chunk_size must be >= 1".into());
        }
        if self.bin_edges.len() < 2 {
            return fail("bin_edges needs at least two edges".into());
        }
        if self.bin_edges[0] != 0.0 || *self.bin_edges.last().unwrap() != 1.0 {
            return fail("bin_edges must start at 0 and end at 1".into());
        }
        if self.bin_edges.windows(2).any(|w| w[1] <= w[0]) {
            return fail("bin_edges must be strictly increasing".into());
        }
        match self.spectral_law {
            SpectralLaw::IsoConcurrence { c } => {
                if !(0.0..=1.0).contains(&c) {
                    return fail(format!("iso-concurrence target {c} outside [0,1]"));
                }
            }
            SpectralLaw::Band { c_lo, c_hi } => {
                if !(0.0..=1.0).contains(&c_lo) || !(0.0..=1.0).contains(&c_hi) || c_hi <= c_lo {
                    return fail(format!("band [{c_lo},{c_hi}] is not a subinterval of [0,1]"));
                }
            }
            _ => {}
        }
        if self.qmc_spectra && self.spectral_law != SpectralLaw::UniformSimplex {
            return fail("qmc_spectra applies only to the uniform-simplex law".into());
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON serialization, hex-encoded.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(self).expect("plan serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn n_chunks(&self) -> u64 {
        self.n_spectra.div_ceil(self.chunk_size)
    }

    /// Global spectrum-index range covered by chunk `i`.
    pub fn chunk_span(&self, chunk: u64) -> std::ops::Range<u64> {
        let lo = chunk * self.chunk_size;
        lo..(lo + self.chunk_size).min(self.n_spectra)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_plan() -> SamplingPlan {
        SamplingPlan {
            seed: 1,
            ensemble: Ensemble::Real,
            spectral_law: SpectralLaw::UniformSimplex,
            n_spectra: 1000,
            orbits_per_spectrum: 5,
            bin_edges: SamplingPlan::uniform_bins(100),
            chunk_size: 128,
            qmc_spectra: false,
        }
    }

    #[test]
    fn valid_plan_passes() {
        base_plan().validate().unwrap();
    }

    #[test]
    fn fingerprint_changes_with_any_field() {
        let a = base_plan();
        let mut b = a.clone();
        b.seed = 2;
        assert_ne!(a.fingerprint(), b.fingerprint());
        let mut c = a.clone();
        c.spectral_law = SpectralLaw::IsoConcurrence { c: 0.5 };
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
    }

    #[test]
    fn chunk_spans_cover_exactly() {
        let mut p = base_plan();
        p.n_spectra = 1000;
        p.chunk_size = 128;
        assert_eq!(p.n_chunks(), 8);
        let total: u64 = (0..p.n_chunks()).map(|i| p.chunk_span(i).count() as u64).sum();
        assert_eq!(total, 1000);
        assert_eq!(p.chunk_span(7), 896..1000);
    }

    #[test]
    fn rejects_bad_grids_and_counts() {
        let mut p = base_plan();
        p.bin_edges = vec![0.0, 0.5, 0.5, 1.0];
        assert!(p.validate().is_err());
        let mut p = base_plan();
        p.bin_edges = vec![0.1, 1.0];
        assert!(p.validate().is_err());
        let mut p = base_plan();
        p.n_spectra = 0;
        assert!(p.validate().is_err());
        let mut p = base_plan();
        p.qmc_spectra = true;
        p.spectral_law = SpectralLaw::DirichletHalf;
        assert!(p.validate().is_err());
    }
}
