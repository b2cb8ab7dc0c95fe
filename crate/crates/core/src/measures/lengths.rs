use serde::Serialize;

use crate::codes::{conj::codeword_length_conj, Code, ConjCode, FixedLengthCode, TableCode};
use crate::error::{Error, Result};
use crate::processes::{IidModel, MixtureModel, SantaFeModel};
use crate::series::power_sum;

/// The distribution of `|f(X_1)|` under the stationary source law.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LengthLaw {
    /// `(length, probability)` with increasing lengths and positive mass.
    masses: Vec<(usize, f64)>,
    /// Longer codewords exist with tiny mass that the sampler truncates.
    unbounded: bool,
}

impl LengthLaw {
    pub fn new<I: IntoIterator<Item = (usize, f64)>>(pairs: I, unbounded: bool) -> Result<Self> {
        let mut masses: Vec<(usize, f64)> = Vec::new();
        let mut pairs: Vec<(usize, f64)> = pairs.into_iter().collect();
        pairs.sort_by_key(|p| p.0);
        for (l, p) in pairs {
            if p < 0.0 || !p.is_finite() || l == 0 {
                return Err(Error::Domain(format!("bad length mass ({l}, {p})")));
            }
            match masses.last_mut() {
                Some(last) if last.0 == l => last.1 += p,
                _ if p > 0.0 => masses.push((l, p)),
                _ => {}
            }
        }
        let total: f64 = masses.iter().map(|p| p.1).sum();
        if masses.is_empty() || (total - 1.0).abs() > 1e-9 {
            return Err(Error::Domain(format!("length masses sum to {total}")));
        }
        Ok(LengthLaw { masses, unbounded })
    }

    pub fn masses(&self) -> &[(usize, f64)] {
        &self.masses
    }

    /// `L = E|f(X_1)|`.
    pub fn mean(&self) -> f64 {
        self.masses.iter().map(|&(l, p)| l as f64 * p).sum()
    }

    /// `η = E[(M/L) ln(M/L)] ≥ 0`.
    pub fn eta(&self) -> f64 {
        let mean = self.mean();
        self.masses
            .iter()
            .map(|&(l, p)| {
                let r = l as f64 / mean;
                p * r * r.ln()
            })
            .sum::<f64>()
            .max(0.0)
    }

    pub fn min_len(&self) -> usize {
        self.masses[0].0
    }

    pub fn max_len(&self) -> usize {
        self.masses[self.masses.len() - 1].0
    }

    pub fn is_constant(&self) -> bool {
        self.masses.len() == 1
    }

    /// Smallest length with `P(M ≤ l) ≥ q`.
    pub fn quantile(&self, q: f64) -> usize {
        let mut acc = 0.0;
        for &(l, p) in &self.masses {
            acc += p;
            if acc >= q {
                return l;
            }
        }
        self.max_len()
    }

    /// Rejection cap for length-biased sampling: the longest codeword for
    /// bounded laws, the `1 − 10^{-6}` quantile otherwise.
    pub fn cap(&self) -> usize {
        if self.unbounded {
            self.quantile(1.0 - 1e-6)
        } else {
            self.max_len()
        }
    }

    /// `P(M > cap)`: mass sampled without the full length tilt.
    pub fn mass_above_cap(&self) -> f64 {
        let cap = self.cap();
        self.masses.iter().filter(|p| p.0 > cap).map(|p| p.1).sum()
    }

    /// `E[M 1{M ≤ c}]`.
    pub fn truncated_mean(&self, c: usize) -> f64 {
        self.masses.iter().filter(|p| p.0 <= c).map(|&(l, p)| l as f64 * p).sum()
    }

    /// Smallest `C` with `E[M 1{M ≤ C}] ≥ a L`.
    pub fn find_ca(&self, a: f64) -> Result<usize> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!("a must lie in (0, 1), got {a}")));
        }
        let target = a * self.mean();
        let mut acc = 0.0;
        for &(l, p) in &self.masses {
            acc += l as f64 * p;
            if acc >= target {
                return Ok(l);
            }
        }
        Ok(self.max_len())
    }
}

/// Source models whose codeword-length law under a code is known exactly.
pub trait HasLengthLaw<C> {
    fn length_law(&self, code: &C) -> Result<LengthLaw>;
}

fn table_law(pmf: &[f64], code: &TableCode) -> Result<LengthLaw> {
    if pmf.len() != code.len() {
        return Err(Error::Domain(format!("model has {} symbols, code has {}", pmf.len(), code.len())));
    }
    LengthLaw::new(pmf.iter().enumerate().map(|(i, &p)| (code.codeword_len(&i).expect("in range"), p)), false)
}

impl HasLengthLaw<TableCode> for IidModel {
    fn length_law(&self, code: &TableCode) -> Result<LengthLaw> {
        table_law(self.pmf(), code)
    }
}

impl HasLengthLaw<FixedLengthCode> for IidModel {
    fn length_law(&self, code: &FixedLengthCode) -> Result<LengthLaw> {
        table_law(self.pmf(), code.table())
    }
}

impl HasLengthLaw<TableCode> for MixtureModel {
    fn length_law(&self, code: &TableCode) -> Result<LengthLaw> {
        let n = self.components()[0].alphabet_len();
        let pmf: Vec<f64> = (0..n)
            .map(|i| self.weights().iter().zip(self.components()).map(|(w, c)| w * c.pmf()[i]).sum())
            .collect();
        table_law(&pmf, code)
    }
}

/// Index bits `j = ⌊log₂ k⌋` below which sampled `K` live.
const SAMPLER_BITS: u32 = 126;

impl HasLengthLaw<ConjCode> for SantaFeModel {
    /// The law realized by [`SantaFeModel::sample_k`], including the
    /// folding of indices beyond `2^127`.
    fn length_law(&self, code: &ConjCode) -> Result<LengthLaw> {
        let a = code.payload_len();
        let z = self.zeta().value;
        let mut masses = Vec::with_capacity(SAMPLER_BITS as usize + 1);
        let mut acc = 0.0;
        for j in 0..SAMPLER_BITS {
            let p = power_sum(2f64.powi(j as i32), 2f64.powi(j as i32 + 1) - 1.0, self.alpha()) / z;
            acc += p;
            masses.push((codeword_length_conj(1u128 << j, a)?, p));
        }
        masses.push((codeword_length_conj(1u128 << SAMPLER_BITS, a)?, (1.0 - acc).max(0.0)));
        LengthLaw::new(masses, true)
    }
}
