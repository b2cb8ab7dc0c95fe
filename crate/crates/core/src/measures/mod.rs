//! Cylinder counts, time averages, expansion rates and the stationary mean
//! of a coded process.
//!
//! The stationary mean is sampled through a random phase: the first source
//! symbol is drawn with probability tilted by its codeword length, and the
//! coded window is shifted by a uniform offset inside that codeword.

mod cesaro;
mod cylinder;
mod expansion;
mod lengths;
mod phase;
mod rho;
mod stationarity;

use serde::Serialize;

pub use cesaro::cesaro_frequency;
pub use cylinder::CylinderCounts;
pub use expansion::{analytic_expansion_rate, expansion_rate, AnalyticRate, ExpansionStats};
pub use lengths::{HasLengthLaw, LengthLaw};
pub use phase::{length_biased_sample, sample_coded, PhaseSample, PhaseSampler};
pub use rho::{estimate_rho, exact_rho_iid, ExactRho, RhoEstimate};
pub use stationarity::{stationarity_check, StationarityReport};

/// A Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
}

impl Estimate {
    /// Mean and standard error of the mean; a single sample has stderr 0.
    pub fn from_samples(xs: &[f64]) -> Estimate {
        let n = xs.len();
        if n == 0 {
            return Estimate { value: f64::NAN, stderr: f64::NAN, samples: 0 };
        }
        let mean = xs.iter().sum::<f64>() / n as f64;
        let stderr = if n > 1 {
            let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Estimate { value: mean, stderr, samples: n }
    }

    /// `|self − target|` in units of the standard error.
    pub fn z_against(&self, target: f64) -> f64 {
        z_score(self.value - target, self.stderr)
    }

    /// Distance to another estimate in joint standard errors.
    pub fn z_between(&self, other: &Estimate) -> f64 {
        z_score(self.value - other.value, self.stderr.hypot(other.stderr))
    }
}

fn z_score(diff: f64, se: f64) -> f64 {
    if diff == 0.0 {
        0.0
    } else if se == 0.0 {
        f64::INFINITY
    } else {
        diff.abs() / se
    }
}
