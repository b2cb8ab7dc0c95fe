//! Block entropies, entropy rates and the identities linking the entropy of
//! a source with that of its coded stationary mean. All values are in nats.

mod exact;
mod identities;
mod jensen;

use std::fmt::Write as _;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{CylinderCounts, HasLengthLaw};

pub use exact::{ExactModel, TruncatedSantaFe};
pub use identities::{
    check_coded_block_identity, check_conditional_n, check_fixed_length_bound, check_length_biased_inequality,
    check_rate_ratio, check_sandwich, entropy_vocab_lower_bound, BlockIdentity, ConditionalPhase, FixedLengthBound,
    LengthBiasedVerdict, RateRatio, Sandwich, VocabBound, coded_entropy_vocab_lower_bound,
};
pub use jensen::{check_jensen_bound, DeterministicSequence, JensenCheck, PeriodicCoin, ShiftedBlocks};

/// `−Σ p ln p` over the given masses, with `0 ln 0 = 0`.
pub fn entropy_of<I: IntoIterator<Item = f64>>(masses: I) -> f64 {
    masses.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.ln()).sum()
}

/// `η(p) = −p ln p − (1−p) ln(1−p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("p must lie in [0, 1], got {p}")));
    }
    Ok(entropy_of([p, 1.0 - p]))
}

/// `E[(|f(X)|/L) ln(|f(X)|/L)]` from the exact length law.
pub fn eta<C, M: HasLengthLaw<C>>(model: &M, code: &C) -> Result<f64> {
    Ok(model.length_law(code)?.eta())
}

/// Smallest `C` with `E[M₁ 1{M₁ ≤ C}] ≥ aL`, where `M₁ = |f(X₁)|`.
pub fn find_ca<C, M: HasLengthLaw<C>>(model: &M, code: &C, a: f64) -> Result<usize> {
    model.length_law(code)?.find_ca(a)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyFlavor {
    Exact,
    /// Plug-in estimate from counts; biased downwards.
    PlugIn,
    /// Plug-in estimate plus the first-order bias.
    Miller,
}

impl EntropyFlavor {
    pub fn as_str(self) -> &'static str {
        match self {
            EntropyFlavor::Exact => "exact",
            EntropyFlavor::PlugIn => "plug-in",
            EntropyFlavor::Miller => "miller",
        }
    }
}

/// Plug-in block entropy of the length-`n` words in `counts`, with the
/// first-order bias `(#observed − 1) / (2 · total)`.
pub fn plug_in_entropy<S: Hash + Eq + Clone + Ord>(counts: &CylinderCounts<S>, n: usize) -> Result<(f64, f64)> {
    if n > counts.max_len() {
        return Err(Error::InsufficientDepth { need: n, have: counts.max_len() });
    }
    let total = counts.total() as f64;
    if n == 0 || total == 0.0 {
        return Ok((0.0, 0.0));
    }
    let words = counts.of_length(n);
    let h = entropy_of(words.iter().map(|(_, c)| *c as f64 / total));
    let bias = (words.len().saturating_sub(1)) as f64 / (2.0 * total);
    Ok((h, bias))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyRow {
    pub n: usize,
    pub h: f64,
    pub flavor: EntropyFlavor,
    pub bias: f64,
}

/// Block entropies `H(n)` by increasing `n`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct EntropyTable {
    rows: Vec<EntropyRow>,
}

impl EntropyTable {
    /// `H(n)` for `n = 0..=n_max` from a block-entropy oracle.
    pub fn exact<F: FnMut(usize) -> f64>(n_max: usize, mut h: F) -> Self {
        let rows = (0..=n_max).map(|n| EntropyRow { n, h: h(n), flavor: EntropyFlavor::Exact, bias: 0.0 }).collect();
        EntropyTable { rows }
    }

    pub fn plug_in<S: Hash + Eq + Clone + Ord>(counts: &CylinderCounts<S>) -> Self {
        Self::from_counts(counts, false)
    }

    /// Plug-in estimates with the bias added back.
    pub fn miller<S: Hash + Eq + Clone + Ord>(counts: &CylinderCounts<S>) -> Self {
        Self::from_counts(counts, true)
    }

    fn from_counts<S: Hash + Eq + Clone + Ord>(counts: &CylinderCounts<S>, corrected: bool) -> Self {
        let flavor = if corrected { EntropyFlavor::Miller } else { EntropyFlavor::PlugIn };
        let rows = (0..=counts.max_len())
            .map(|n| {
                let (h, bias) = plug_in_entropy(counts, n).expect("n within depth");
                let h = if corrected { h + bias } else { h };
                EntropyRow { n, h, flavor, bias }
            })
            .collect();
        EntropyTable { rows }
    }

    pub fn rows(&self) -> &[EntropyRow] {
        &self.rows
    }

    pub fn get(&self, n: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n).map(|r| r.h)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,H_nats,flavor,bias_estimate\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                r.n,
                crate::cli::fmt_sig(r.h),
                r.flavor.as_str(),
                crate::cli::fmt_sig(r.bias)
            );
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateEstimate {
    pub n: usize,
    /// `H(n) − H(n−1)` at the largest `n`.
    pub increment: f64,
    /// `H(n)/n`, which converges more slowly.
    pub per_symbol: f64,
}

/// Entropy rate from the last increment of a table with at least three
/// consecutive rows. Exact tables must be nondecreasing.
pub fn entropy_rate(table: &EntropyTable) -> Result<RateEstimate> {
    let rows = table.rows();
    if rows.len() < 3 || rows.windows(2).any(|w| w[1].n != w[0].n + 1) {
        return Err(Error::Domain("entropy rate needs at least three consecutive block lengths".into()));
    }
    for w in rows.windows(2) {
        if w[1].flavor == EntropyFlavor::Exact && w[1].h < w[0].h - 1e-12 {
            return Err(Error::NonMonotone(w[1].n));
        }
    }
    let (prev, last) = (rows[rows.len() - 2], rows[rows.len() - 1]);
    let per_symbol = if last.n == 0 { 0.0 } else { last.h / last.n as f64 };
    Ok(RateEstimate { n: last.n, increment: last.h - prev.h, per_symbol })
}
