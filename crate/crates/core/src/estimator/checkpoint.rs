use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::curve::{BinTally, BinnedCurve};
use super::plan::SamplingPlan;
use super::EstimatorError;

/// On-disk resume state: the plan, its fingerprint, how many chunks have been
/// folded in, and the per-bin tallies so far. Integer tallies (and the JSON
/// float round-trip for edges) make save/load lossless.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Checkpoint {
    pub plan: SamplingPlan,
    pub fingerprint: String,
    pub completed_chunks: u64,
    pub bins: Vec<BinTally>,
}

impl Checkpoint {
    pub fn curve(&self) -> BinnedCurve {
        BinnedCurve {
            ensemble: self.plan.ensemble,
            fingerprint: self.fingerprint.clone(),
            bins: self.bins.clone(),
        }
    }
}

/// Writes atomically: temp file in the same directory, then rename.
pub fn save_checkpoint(cp: &Checkpoint, path: &Path) -> Result<(), EstimatorError> {
    let json = serde_json::to_string_pretty(cp)?;
    let tmp = path.with_extension("json.tmp");
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(&tmp, json)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint, EstimatorError> {
    let text = fs::read_to_string(path)?;
    let cp: Checkpoint = serde_json::from_str(&text)?;
    if cp.fingerprint != cp.plan.fingerprint() {
        return Err(EstimatorError::CheckpointMismatch {
            expected: cp.plan.fingerprint(),
            found: cp.fingerprint,
        });
    }
    Ok(cp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::SpectralLaw;
    use crate::qstate::Ensemble;
    use tempfile::tempdir;

    fn plan() -> SamplingPlan {
        SamplingPlan {
            seed: 11,
            ensemble: Ensemble::Complex,
            spectral_law: SpectralLaw::UniformSimplex,
            n_spectra: 100,
            orbits_per_spectrum: 2,
            bin_edges: SamplingPlan::uniform_bins(4),
            chunk_size: 10,
            qmc_spectra: false,
        }
    }

    #[test]
    fn save_load_round_trip_is_exact() {
        let p = plan();
        let cp = Checkpoint {
            fingerprint: p.fingerprint(),
            bins: BinnedCurve::empty(p.ensemble, p.fingerprint(), &p.bin_edges).bins,
            completed_chunks: 3,
            plan: p,
        };
        let dir = tempdir().unwrap();
        let path = dir.path().join("cp.json");
        save_checkpoint(&cp, &path).unwrap();
        let back = load_checkpoint(&path).unwrap();
        assert_eq!(back, cp);
        assert_eq!(back.curve().to_csv(), cp.curve().to_csv());
    }

    #[test]
    fn load_rejects_tampered_fingerprint() {
        let p = plan();
        let cp = Checkpoint {
            fingerprint: "not-the-right-hash".into(),
            bins: Vec::new(),
            completed_chunks: 0,
            plan: p,
        };
        let dir = tempdir().unwrap();
        let path = dir.path().join("cp.json");
        save_checkpoint(&cp, &path).unwrap();
        assert!(matches!(
            load_checkpoint(&path),
            Err(EstimatorError::CheckpointMismatch { .. })
        ));
    }
}
