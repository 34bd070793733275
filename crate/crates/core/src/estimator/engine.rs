use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::checkpoint::{save_checkpoint, Checkpoint};
use super::curve::{BinTally, BinnedCurve, OrbitEstimate};
use super::law::{
    halton_simplex_point, sample_dirichlet_half, sample_iso_concurrence, sample_simplex_uniform,
    SpectralLaw,
};
use super::plan::SamplingPlan;
use super::EstimatorError;
use crate::qstate::{orbit_point_is_separable, Ensemble, Spectrum};

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Independent substream for one work chunk: the ChaCha key is expanded from
/// the plan seed and the chunk index selects the stream, so the stream is a
/// pure function of (seed, chunk).
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut state = seed;
    let mut key = [0_u8; 32];
    for word in key.chunks_exact_mut(8) {
        word.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(chunk);
    rng
}

/// Cranley-Patterson shift for the optional Halton spectrum sequence.
fn qmc_shift(seed: u64) -> [f64; 3] {
    let mut state = seed ^ 0x5851_f42d_4c95_7f2d;
    let mut shift = [0.0; 3];
    for s in &mut shift {
        *s = (splitmix64(&mut state) >> 11) as f64 / (1_u64 << 53) as f64;
    }
    shift
}

/// Sub-intervals of the plan's bins covered by a band law, used to stratify
/// the concurrence draw so every covered bin gets the same spectrum budget.
fn band_strata(plan: &SamplingPlan) -> Vec<(f64, f64)> {
    match plan.spectral_law {
        SpectralLaw::Band { c_lo, c_hi } => plan
            .bin_edges
            .windows(2)
            .map(|w| (w[0].max(c_lo), w[1].min(c_hi)))
            .filter(|(lo, hi)| hi > lo)
            .collect(),
        _ => Vec::new(),
    }
}

fn draw_spectrum<R: Rng + ?Sized>(
    plan: &SamplingPlan,
    strata: &[(f64, f64)],
    qmc: &[f64; 3],
    global_idx: u64,
    rng: &mut R,
) -> Spectrum {
    match plan.spectral_law {
        SpectralLaw::UniformSimplex => {
            if plan.qmc_spectra {
                halton_simplex_point(global_idx + 1, qmc)
            } else {
                sample_simplex_uniform(rng)
            }
        }
        SpectralLaw::DirichletHalf => sample_dirichlet_half(rng),
        SpectralLaw::IsoConcurrence { c } => sample_iso_concurrence(c, rng),
        SpectralLaw::Band { .. } => {
            let (lo, hi) = strata[(global_idx % strata.len() as u64) as usize];
            let c = lo + (hi - lo) * rng.random::<f64>();
            sample_iso_concurrence(c, rng)
        }
    }
}

/// Runs one chunk to per-bin (n_total, n_sep) deltas. Pure in (plan, chunk).
fn run_chunk(plan: &SamplingPlan, strata: &[(f64, f64)], qmc: &[f64; 3], chunk: u64) -> Vec<(u64, u64)> {
    let mut rng = chunk_rng(plan.seed, chunk);
    let mut tallies = vec![(0_u64, 0_u64); plan.bin_edges.len() - 1];
    let orbits = plan.orbits_per_spectrum as u64;
    for global_idx in plan.chunk_span(chunk) {
        let spectrum = draw_spectrum(plan, strata, qmc, global_idx, &mut rng);
        let c = spectrum.max_concurrence();
        let bin = BinnedCurve::bin_index_of(&plan.bin_edges, c);
        let lambda = spectrum.values();
        let mut sep = 0_u64;
        match plan.ensemble {
            Ensemble::Real => {
                for _ in 0..orbits {
                    if orbit_point_is_separable::<f64, _>(&lambda, &mut rng) {
                        sep += 1;
                    }
                }
            }
            Ensemble::Complex => {
                for _ in 0..orbits {
                    if orbit_point_is_separable::<Complex64, _>(&lambda, &mut rng) {
                        sep += 1;
                    }
                }
            }
        }
        tallies[bin].0 += orbits;
        tallies[bin].1 += sep;
    }
    tallies
}

fn fold_deltas(bins: &mut [BinTally], deltas: Vec<Vec<(u64, u64)>>) {
    for delta in deltas {
        for (bin, (t, s)) in bins.iter_mut().zip(delta) {
            bin.n_total += t;
            bin.n_sep += s;
        }
    }
}

fn run_chunk_range(
    plan: &SamplingPlan,
    strata: &[(f64, f64)],
    qmc: &[f64; 3],
    chunks: std::ops::Range<u64>,
) -> Vec<Vec<(u64, u64)>> {
    // Ordered collect + sequential fold keeps results identical for any
    // worker count and schedule.
    chunks
        .into_par_iter()
        .map(|chunk| run_chunk(plan, strata, qmc, chunk))
        .collect()
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .expect("worker pool")
            .install(f),
        None => f(),
    }
}

/// Full deterministic run of a plan.
pub fn estimate_curve(plan: &SamplingPlan) -> Result<BinnedCurve, EstimatorError> {
    estimate_curve_with(plan, None)
}

/// Same as [`estimate_curve`] with an explicit worker count (None = global pool).
pub fn estimate_curve_with(
    plan: &SamplingPlan,
    workers: Option<usize>,
) -> Result<BinnedCurve, EstimatorError> {
    plan.validate()?;
    let strata = band_strata(plan);
    let qmc = qmc_shift(plan.seed);
    let mut curve = BinnedCurve::empty(plan.ensemble, plan.fingerprint(), &plan.bin_edges);
    let deltas = with_pool(workers, || {
        run_chunk_range(plan, &strata, &qmc, 0..plan.n_chunks())
    });
    fold_deltas(&mut curve.bins, deltas);
    Ok(curve)
}

fn resume_state(
    plan: &SamplingPlan,
    checkpoint: Option<Checkpoint>,
) -> Result<(Vec<BinTally>, u64), EstimatorError> {
    let fingerprint = plan.fingerprint();
    match checkpoint {
        Some(cp) => {
            if cp.fingerprint != fingerprint {
                return Err(EstimatorError::CheckpointMismatch {
                    expected: fingerprint,
                    found: cp.fingerprint,
                });
            }
            if cp.completed_chunks > plan.n_chunks() {
                return Err(EstimatorError::CheckpointOverrun {
                    completed: cp.completed_chunks,
                    total: plan.n_chunks(),
                });
            }
            Ok((cp.bins, cp.completed_chunks))
        }
        None => Ok((
            BinnedCurve::empty(plan.ensemble, fingerprint, &plan.bin_edges).bins,
            0,
        )),
    }
}

/// Processes up to `max_chunks` further chunks, checkpointing to `path`, and
/// returns the checkpoint state. Used to split a run across process lifetimes.
pub fn estimate_curve_partial(
    plan: &SamplingPlan,
    path: &Path,
    resume_from: Option<Checkpoint>,
    max_chunks: u64,
    workers: Option<usize>,
) -> Result<Checkpoint, EstimatorError> {
    plan.validate()?;
    let (mut bins, done) = resume_state(plan, resume_from)?;
    let strata = band_strata(plan);
    let qmc = qmc_shift(plan.seed);
    let end = plan.n_chunks().min(done + max_chunks);
    let deltas = with_pool(workers, || run_chunk_range(plan, &strata, &qmc, done..end));
    fold_deltas(&mut bins, deltas);
    let cp = Checkpoint {
        plan: plan.clone(),
        fingerprint: plan.fingerprint(),
        completed_chunks: end,
        bins,
    };
    save_checkpoint(&cp, path)?;
    Ok(cp)
}

/// Runs a plan to completion, continuing from `resume_from` if given and
/// checkpointing to `path` every `save_every` chunks.
pub fn estimate_curve_resumable(
    plan: &SamplingPlan,
    path: &Path,
    resume_from: Option<Checkpoint>,
    save_every: u64,
    workers: Option<usize>,
) -> Result<BinnedCurve, EstimatorError> {
    plan.validate()?;
    let (mut bins, mut done) = resume_state(plan, resume_from)?;
    let strata = band_strata(plan);
    let qmc = qmc_shift(plan.seed);
    let save_every = save_every.max(1);
    let total = plan.n_chunks();
    while done < total {
        let end = total.min(done + save_every);
        let deltas = with_pool(workers, || run_chunk_range(plan, &strata, &qmc, done..end));
        fold_deltas(&mut bins, deltas);
        done = end;
        let cp = Checkpoint {
            plan: plan.clone(),
            fingerprint: plan.fingerprint(),
            completed_chunks: done,
            bins: bins.clone(),
        };
        save_checkpoint(&cp, path)?;
    }
    Ok(BinnedCurve {
        ensemble: plan.ensemble,
        fingerprint: plan.fingerprint(),
        bins,
    })
}

/// Monte Carlo estimate of the orbit separability probability at one
/// spectrum: the trivariate function the binned curves summarize.
pub fn estimate_orbit_probability<R: Rng + ?Sized>(
    s: &Spectrum,
    ens: Ensemble,
    n: u64,
    rng: &mut R,
) -> OrbitEstimate {
    assert!(n >= 1, "need at least one orbit draw");
    let lambda = s.values();
    let mut sep = 0_u64;
    match ens {
        Ensemble::Real => {
            for _ in 0..n {
                if orbit_point_is_separable::<f64, _>(&lambda, rng) {
                    sep += 1;
                }
            }
        }
        Ensemble::Complex => {
            for _ in 0..n {
                if orbit_point_is_separable::<Complex64, _>(&lambda, rng) {
                    sep += 1;
                }
            }
        }
    }
    OrbitEstimate {
        spectrum: *s,
        concurrence: s.max_concurrence(),
        n_total: n,
        n_separable: sep,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn small_plan(law: SpectralLaw) -> SamplingPlan {
        SamplingPlan {
            seed: 7,
            ensemble: Ensemble::Real,
            spectral_law: law,
            n_spectra: 600,
            orbits_per_spectrum: 4,
            bin_edges: SamplingPlan::uniform_bins(20),
            chunk_size: 64,
            qmc_spectra: false,
        }
    }

    #[test]
    fn worker_count_does_not_change_tallies() {
        let plan = small_plan(SpectralLaw::UniformSimplex);
        let one = estimate_curve_with(&plan, Some(1)).unwrap();
        let two = estimate_curve_with(&plan, Some(2)).unwrap();
        let eight = estimate_curve_with(&plan, Some(8)).unwrap();
        assert_eq!(one, two);
        assert_eq!(one, eight);
        assert_eq!(one.to_csv(), eight.to_csv());
    }

    #[test]
    fn interrupted_run_resumes_to_identical_curve() {
        let plan = small_plan(SpectralLaw::Band { c_lo: 0.0, c_hi: 1.0 });
        let full = estimate_curve(&plan).unwrap();

        let dir = tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let cp = estimate_curve_partial(&plan, &path, None, 3, Some(1)).unwrap();
        assert_eq!(cp.completed_chunks, 3);
        let loaded = super::super::load_checkpoint(&path).unwrap();
        let resumed = estimate_curve_resumable(&plan, &path, Some(loaded), 4, Some(2)).unwrap();
        assert_eq!(resumed, full);
        assert_eq!(resumed.to_csv(), full.to_csv());
    }

    #[test]
    fn resume_refuses_foreign_checkpoint() {
        let plan_a = small_plan(SpectralLaw::UniformSimplex);
        let mut plan_b = plan_a.clone();
        plan_b.seed = 8;
        let dir = tempdir().unwrap();
        let path = dir.path().join("cp.json");
        let cp = estimate_curve_partial(&plan_a, &path, None, 2, Some(1)).unwrap();
        assert!(matches!(
            estimate_curve_resumable(&plan_b, &path, Some(cp), 4, Some(1)),
            Err(EstimatorError::CheckpointMismatch { .. })
        ));
    }

    #[test]
    fn qmc_option_is_deterministic_and_fills_the_simplex() {
        let mut plan = small_plan(SpectralLaw::UniformSimplex);
        plan.qmc_spectra = true;
        let a = estimate_curve_with(&plan, Some(1)).unwrap();
        let b = estimate_curve_with(&plan, Some(2)).unwrap();
        assert_eq!(a, b);
        let total: u64 = a.bins.iter().map(|t| t.n_total).sum();
        assert_eq!(total, plan.n_spectra * plan.orbits_per_spectrum as u64);
    }

    #[test]
    fn maximally_mixed_orbit_probability_is_one() {
        let mut rng = chunk_rng(1, 0);
        let est = estimate_orbit_probability(
            &Spectrum::maximally_mixed(),
            Ensemble::Complex,
            200,
            &mut rng,
        );
        assert_eq!(est.p_hat(), 1.0);
    }

    #[test]
    fn pure_spectrum_orbit_probability_is_zero() {
        let mut rng = chunk_rng(2, 0);
        for ens in [Ensemble::Real, Ensemble::Complex] {
            let est = estimate_orbit_probability(&Spectrum::pure(), ens, 10_000, &mut rng);
            assert_eq!(est.n_separable, 0, "{ens:?}");
        }
    }

    #[test]
    fn zero_concurrence_spectra_are_absolutely_separable() {
        let mut rng = chunk_rng(3, 0);
        for ens in [Ensemble::Real, Ensemble::Complex] {
            for _ in 0..20 {
                let s = sample_iso_concurrence(0.0, &mut rng);
                let est = estimate_orbit_probability(&s, ens, 1_000, &mut rng);
                assert_eq!(est.p_hat(), 1.0, "spectrum {:?}", s.values());
            }
        }
    }

    #[test]
    fn band_law_fills_every_covered_bin_evenly() {
        let plan = small_plan(SpectralLaw::Band { c_lo: 0.5, c_hi: 1.0 });
        let curve = estimate_curve(&plan).unwrap();
        let covered: Vec<_> = curve.bins.iter().filter(|b| b.c_lo >= 0.5).collect();
        assert_eq!(covered.len(), 10);
        // 600 spectra stratified over 10 bins: exactly 60 each.
        for b in covered {
            assert_eq!(b.n_total, 60 * plan.orbits_per_spectrum as u64);
        }
        let below: u64 = curve
            .bins
            .iter()
            .filter(|b| b.c_hi <= 0.5)
            .map(|b| b.n_total)
            .sum();
        assert_eq!(below, 0);
    }
}
