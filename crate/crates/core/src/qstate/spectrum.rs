use serde::{Deserialize, Serialize};

use super::{QstateError, SPECTRUM_SUM_TOL};

/// Dyson ensemble label: beta = 1 (real symmetric) or beta = 2
/// (complex Hermitian). The quaternionic beta = 4 class is out of scope.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    Real,
    Complex,
}

impl Ensemble {
    pub fn beta(self) -> u8 {
        match self {
            Ensemble::Real => 1,
            Ensemble::Complex => 2,
        }
    }

    pub fn from_beta(beta: u8) -> Result<Self, QstateError> {
        match beta {
            1 => Ok(Ensemble::Real),
            2 => Ok(Ensemble::Complex),
            other => Err(QstateError::InvalidBeta(other)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Ensemble::Real => "real",
            Ensemble::Complex => "complex",
        }
    }
}

/// Ordered eigenvalue 4-vector on the unit simplex:
/// values[0] >= values[1] >= values[2] >= values[3] >= 0, sum = 1.
#[derive(Clone, Copy, PartialEq, Debug, Serialize)]
pub struct Spectrum {
    values: [f64; 4],
}

impl Spectrum {
    /// Builds from already-ordered values. Entries within -1e-12 of zero are
    /// clamped to exactly zero (eigenvalue round-off).
    pub fn new(values: [f64; 4]) -> Result<Self, QstateError> {
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_SUM_TOL {
            return Err(QstateError::UnnormalizedSpectrum { sum });
        }
        if values[0] < values[1] || values[1] < values[2] || values[2] < values[3] {
            return Err(QstateError::UnsortedSpectrum(values));
        }
        let mut v = values;
        for x in &mut v {
            if *x < 0.0 {
                if *x < -SPECTRUM_SUM_TOL {
                    return Err(QstateError::NegativeSpectrum(values));
                }
                *x = 0.0;
            }
        }
        Ok(Spectrum { values: v })
    }

    /// Sorts descending, then validates.
    pub fn from_unsorted(mut values: [f64; 4]) -> Result<Self, QstateError> {
        values.sort_by(|a, b| b.partial_cmp(a).expect("spectrum values must not be NaN"));
        Self::new(values)
    }

    pub fn maximally_mixed() -> Self {
        Spectrum {
            values: [0.25; 4],
        }
    }

    pub fn pure() -> Self {
        Spectrum {
            values: [1.0, 0.0, 0.0, 0.0],
        }
    }

    pub fn values(&self) -> [f64; 4] {
        self.values
    }

    /// Maximal concurrence over the spectral orbit:
    /// max{0, l1 - l3 - 2*sqrt(l2*l4)}.
    pub fn max_concurrence(&self) -> f64 {
        let [l1, l2, l3, l4] = self.values;
        (l1 - l3 - 2.0 * (l2 * l4).sqrt()).max(0.0)
    }
}
