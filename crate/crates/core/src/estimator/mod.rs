//! Seeded, parallel, checkpointable Monte Carlo engine.
//!
//! Work is partitioned into fixed-size chunks of spectrum draws; the random
//! substream for chunk i is a pure function of (seed, i), so merged tallies
//! are bit-identical across any worker count, chunk execution order, or
//! interrupt/resume history.

mod checkpoint;
mod curve;
mod engine;
mod law;
mod plan;

pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use curve::{merge_partials, BinTally, BinnedCurve, OrbitEstimate};
pub use engine::{
    chunk_rng, estimate_curve, estimate_curve_partial, estimate_curve_resumable,
    estimate_curve_with, estimate_orbit_probability,
};
pub use law::{sample_dirichlet_half, sample_iso_concurrence, sample_simplex_uniform, SpectralLaw};
pub use plan::SamplingPlan;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EstimatorError {
    #[error("invalid sampling plan: {0}")]
    InvalidPlan(String),
    #[error("bin grids differ between curves")]
    GridMismatch,
    #[error("plan fingerprints differ: {left} vs {right}")]
    FingerprintMismatch { left: String, right: String },
    #[error("malformed curve CSV at line {line}: {reason}")]
    MalformedCsv { line: usize, reason: String },
    #[error("checkpoint fingerprint {found} does not match plan fingerprint {expected}")]
    CheckpointMismatch { expected: String, found: String },
    #[error("checkpoint records {completed} completed chunks but the plan has {total}")]
    CheckpointOverrun { completed: u64, total: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("checkpoint serialization: {0}")]
    Json(#[from] serde_json::Error),
}
