use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use crate::qstate::Spectrum;

/// How spectra are drawn for a plan.
///
/// `IsoConcurrence` fixes the maximal concurrence exactly; `Band` draws the
/// target concurrence stratified across the plan's bins inside `[c_lo, c_hi]`
/// (uniform within each bin), so every covered bin receives the same number
/// of spectra. The band law is what fills the sparse upper range at a fixed
/// per-bin budget.
#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "kebab-case")]
pub enum SpectralLaw {
    UniformSimplex,
    DirichletHalf,
    IsoConcurrence { c: f64 },
    Band { c_lo: f64, c_hi: f64 },
}

impl SpectralLaw {
    pub fn label(&self) -> String {
        match self {
            SpectralLaw::UniformSimplex => "uniform-simplex".into(),
            SpectralLaw::DirichletHalf => "dirichlet-half".into(),
            SpectralLaw::IsoConcurrence { c } => format!("iso-concurrence({c})"),
            SpectralLaw::Band { c_lo, c_hi } => format!("band({c_lo},{c_hi})"),
        }
    }
}

/// Uniform (Lebesgue) on the 3-simplex, sorted descending: normalized
/// exponential spacings.
pub fn sample_simplex_uniform<R: Rng + ?Sized>(rng: &mut R) -> Spectrum {
    loop {
        let e: [f64; 4] = [
            rng.sample(Exp1),
            rng.sample(Exp1),
            rng.sample(Exp1),
            rng.sample(Exp1),
        ];
        let sum: f64 = e.iter().sum();
        if sum > 0.0 {
            let v = [e[0] / sum, e[1] / sum, e[2] / sum, e[3] / sum];
            if let Ok(s) = Spectrum::from_unsorted(v) {
                return s;
            }
        }
    }
}

/// Symmetric Dirichlet(1/2, 1/2, 1/2, 1/2), sorted descending.
pub fn sample_dirichlet_half<R: Rng + ?Sized>(rng: &mut R) -> Spectrum {
    let gamma = Gamma::new(0.5, 1.0).expect("valid shape");
    loop {
        let g: [f64; 4] = [
            gamma.sample(rng),
            gamma.sample(rng),
            gamma.sample(rng),
            gamma.sample(rng),
        ];
        let sum: f64 = g.iter().sum();
        if sum > 0.0 {
            let v = [g[0] / sum, g[1] / sum, g[2] / sum, g[3] / sum];
            if let Ok(s) = Spectrum::from_unsorted(v) {
                return s;
            }
        }
    }
}

/// Spectrum with max_concurrence exactly `c` (to round-off).
///
/// Draws lambda2 uniformly on its feasible interval and lambda4 uniformly on
/// the conditional interval implied by the ordering constraints, then solves
///   lambda1 - lambda3 = c + 2 sqrt(lambda2 lambda4)
///   lambda1 + lambda3 = 1 - lambda2 - lambda4
/// rejecting draws that violate the ordering. c = 1 admits only (1,0,0,0).
///
/// Panics if `c` is outside [0, 1].
pub fn sample_iso_concurrence<R: Rng + ?Sized>(c: f64, rng: &mut R) -> Spectrum {
    assert!((0.0..=1.0).contains(&c), "concurrence target {c} outside [0,1]");
    if c >= 1.0 {
        return Spectrum::pure();
    }
    let room = 1.0 - c;
    // Ordering bounds: lambda3 >= lambda4 forces lambda2 <= 1-c; combined with
    // lambda2 >= lambda3 and lambda4 <= lambda2 it forces lambda2 >= (1-c)/6.
    let l2_lo = room / 6.0;
    let l2_hi = room;
    for _ in 0..100_000 {
        let l2 = l2_lo + (l2_hi - l2_lo) * rng.random::<f64>();
        // Largest lambda4 with lambda3 >= lambda4:
        // lambda2 + 3 l4 + 2 sqrt(lambda2 l4) <= 1-c, quadratic in sqrt(l4).
        let disc = 3.0 * room - 2.0 * l2;
        if disc <= 0.0 {
            continue;
        }
        let x = (disc.sqrt() - l2.sqrt()) / 3.0;
        if x <= 0.0 {
            continue;
        }
        let l4_hi = (x * x).min(l2);
        let l4 = l4_hi * rng.random::<f64>();
        let s = 1.0 - l2 - l4;
        let d = c + 2.0 * (l2 * l4).sqrt();
        let l1 = 0.5 * (s + d);
        let l3 = 0.5 * (s - d);
        if l1 >= l2 && l2 >= l3 && l3 >= l4 && l4 >= 0.0 {
            if let Ok(spec) = Spectrum::new([l1, l2, l3, l4]) {
                return spec;
            }
        }
    }
    unreachable!("iso-concurrence rejection sampling failed to converge at c = {c}");
}

/// Cranley-Patterson-shifted Halton point for the quasi-Monte Carlo spectrum
/// option: 3 coordinates in bases 2, 3, 5 at one-based `index`, each shifted
/// modulo 1 by a per-plan offset.
pub(crate) fn halton_simplex_point(index: u64, shift: &[f64; 3]) -> Spectrum {
    fn radical_inverse(mut n: u64, base: u64) -> f64 {
        let mut inv = 0.0;
        let mut denom = 1.0;
        let b = base as f64;
        while n > 0 {
            denom *= b;
            inv += (n % base) as f64 / denom;
            n /= base;
        }
        inv
    }
    let mut u = [0.0_f64; 3];
    for (k, base) in [2_u64, 3, 5].iter().enumerate() {
        let v = radical_inverse(index, *base) + shift[k];
        u[k] = v - v.floor();
    }
    u.sort_by(|a, b| a.partial_cmp(b).expect("halton coordinates are finite"));
    let v = [u[0], u[1] - u[0], u[2] - u[1], 1.0 - u[2]];
    Spectrum::from_unsorted(v).expect("simplex spacings are a valid spectrum")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_simplex_order_statistics() {
        // Expected sorted uniform spacings: E[l1] = H_4/4 = 25/48, E[l4] = 1/16.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let n = 1_000_000_u64;
        let (mut s1, mut s1sq, mut s4, mut s4sq) = (0.0, 0.0, 0.0, 0.0);
        for _ in 0..n {
            let v = sample_simplex_uniform(&mut rng).values();
            s1 += v[0];
            s1sq += v[0] * v[0];
            s4 += v[3];
            s4sq += v[3] * v[3];
        }
        let nf = n as f64;
        let m1 = s1 / nf;
        let se1 = ((s1sq / nf - m1 * m1) / nf).sqrt();
        let m4 = s4 / nf;
        let se4 = ((s4sq / nf - m4 * m4) / nf).sqrt();
        assert!((m1 - 25.0 / 48.0).abs() < 5.0 * se1, "E[l1] = {m1}");
        assert!((m4 - 1.0 / 16.0).abs() < 5.0 * se4, "E[l4] = {m4}");
    }

    #[test]
    fn dirichlet_half_is_a_valid_sorted_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let v = sample_dirichlet_half(&mut rng).values();
            assert!(v[0] >= v[3]);
            assert!(((v.iter().sum::<f64>()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn iso_concurrence_at_one_is_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        assert_eq!(
            sample_iso_concurrence(1.0, &mut rng).values(),
            [1.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn iso_concurrence_solves_the_linear_system() {
        // With c = 0.5 and (l2, l4) = (0.2, 0.02): S = 0.78,
        // D = 0.5 + 2 sqrt(0.004), so l1 and l3 follow by halving.
        let d: f64 = 0.5 + 2.0 * 0.004_f64.sqrt();
        let l1 = 0.5 * (0.78 + d);
        let l3 = 0.5 * (0.78 - d);
        assert!((l1 - 0.703246).abs() < 1e-6);
        assert!((l3 - 0.076754).abs() < 1e-6);
        let s = Spectrum::new([l1, 0.2, l3, 0.02]).unwrap();
        assert!((s.max_concurrence() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn iso_concurrence_hits_target_across_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for &c in &[0.0, 0.05, 0.18, 0.5, 0.7, 0.9, 0.99, 0.999] {
            for _ in 0..2000 {
                let s = sample_iso_concurrence(c, &mut rng);
                assert!(
                    (s.max_concurrence() - c).abs() < 1e-12,
                    "c = {c}, got {}",
                    s.max_concurrence()
                );
            }
        }
    }

    #[test]
    fn halton_points_are_valid_and_deterministic() {
        let shift = [0.123, 0.456, 0.789];
        for i in 1..2000 {
            let a = halton_simplex_point(i, &shift);
            let b = halton_simplex_point(i, &shift);
            assert_eq!(a.values(), b.values());
            assert!(((a.values().iter().sum::<f64>()) - 1.0).abs() < 1e-12);
        }
    }
}
