use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;

use super::{binary_entropy, entropy_of, ExactModel, TruncatedSantaFe};
use crate::codes::{ConjCode, FixedLengthCode, TableCode};
use crate::error::{Error, Result};
use crate::processes::coded_predictions;

const TOL: f64 = 1e-10;

fn entropy_of_map<K: Hash + Eq>(m: HashMap<K, f64>) -> f64 {
    entropy_of(m.into_values())
}

fn require_prefix_free(code: &TableCode) -> Result<()> {
    if code.is_prefix_free() {
        Ok(())
    } else {
        Err(Error::InvalidCode("the identity needs a prefix-free code".into()))
    }
}

fn encode(code: &TableCode, x: &[usize]) -> Vec<u8> {
    x.iter().flat_map(|&s| code.codewords()[s].iter().copied()).collect()
}

fn eta_of(model: &ExactModel, code: &TableCode, mean: f64) -> f64 {
    let lens = code.lengths();
    model
        .marginal()
        .iter()
        .zip(&lens)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, &l)| {
            let r = l as f64 / mean;
            p * r * r.ln()
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlockIdentity {
    /// `H_P(X^n)`.
    pub source: f64,
    /// `H_P(Y^{M_n})`, the entropy of the coded block `f*(X^n)`.
    pub coded: f64,
}

impl BlockIdentity {
    pub fn holds(&self) -> bool {
        (self.source - self.coded).abs() <= TOL
    }
}

pub fn check_coded_block_identity(model: &ExactModel, code: &TableCode, n: usize) -> Result<BlockIdentity> {
    model.check_code(code)?;
    require_prefix_free(code)?;
    let blocks = model.block_pmf(n);
    let source = entropy_of(blocks.iter().map(|(_, p)| *p));
    let mut coded: HashMap<Vec<u8>, f64> = HashMap::new();
    for (x, p) in &blocks {
        *coded.entry(encode(code, x)).or_default() += p;
    }
    Ok(BlockIdentity { source, coded: entropy_of_map(coded) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionalPhase {
    /// `H(X̄_k^l, N) − H(X̄_k^l)` by enumeration.
    pub enumerated: f64,
    pub log_l: f64,
    pub eta: f64,
}

impl ConditionalPhase {
    pub fn holds(&self) -> bool {
        (self.enumerated - (self.log_l + self.eta)).abs() <= TOL
    }
}

fn check_window(k: i64, l: i64) -> Result<usize> {
    if k > 1 || l < 1 {
        return Err(Error::Domain(format!("the block {k}..={l} must contain position 1")));
    }
    Ok((1 - k) as usize)
}

/// `H(N | X̄_k^l)` against `ln L + η`. The joint law puts `P(x)/L` on each
/// `(x, n)` with `n < |f(x₁)|`.
pub fn check_conditional_n(model: &ExactModel, code: &TableCode, k: i64, l: i64) -> Result<ConditionalPhase> {
    let first = check_window(k, l)?;
    let mean = model.mean_len(code)?;
    let lens = code.lengths();
    let blocks = model.block_pmf((l - k + 1) as usize);
    let joint: f64 = blocks
        .iter()
        .map(|(x, p)| {
            let q = p / mean;
            lens[x[first]] as f64 * -q * q.ln()
        })
        .sum();
    let marginal = entropy_of(blocks.iter().map(|(x, p)| p * lens[x[first]] as f64 / mean));
    Ok(ConditionalPhase { enumerated: joint - marginal, log_l: mean.ln(), eta: eta_of(model, code, mean) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthBiasedVerdict {
    /// `H_P̄(X̄_k^l)`.
    pub biased: f64,
    /// `H_P(X_k^l)`.
    pub unbiased: f64,
    pub eta: f64,
    /// `cov_P(|f(X₁)|, −ln P(X_k^l = ·))`.
    pub covariance: f64,
    pub inequality_holds: bool,
    pub covariance_nonnegative: bool,
}

impl LengthBiasedVerdict {
    /// The inequality holds exactly when the covariance is nonnegative.
    pub fn consistent(&self) -> bool {
        self.inequality_holds == self.covariance_nonnegative
    }
}

pub fn check_length_biased_inequality(model: &ExactModel, code: &TableCode, k: i64, l: i64) -> Result<LengthBiasedVerdict> {
    let first = check_window(k, l)?;
    let mean = model.mean_len(code)?;
    let lens = code.lengths();
    let blocks = model.block_pmf((l - k + 1) as usize);
    let unbiased = entropy_of(blocks.iter().map(|(_, p)| *p));
    let biased = entropy_of(blocks.iter().map(|(x, p)| p * lens[x[first]] as f64 / mean));
    let cross: f64 = blocks.iter().map(|(x, p)| p * lens[x[first]] as f64 * -p.ln()).sum();
    let covariance = cross - mean * unbiased;
    let eta = eta_of(model, code, mean);
    Ok(LengthBiasedVerdict {
        biased,
        unbiased,
        eta,
        covariance,
        inequality_holds: biased >= unbiased - eta - TOL,
        covariance_nonnegative: covariance >= -TOL,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    /// `H(Ȳ^{M̄_n − M̄_1}, N)`.
    pub coded_tail: f64,
    /// `H(X̄^n, N)`.
    pub source: f64,
    /// `H(X̄_2^n, N)`.
    pub source_tail: f64,
    /// `H(Ȳ^{M̄_n}, N)`.
    pub coded: f64,
}

impl Sandwich {
    pub fn first_holds(&self) -> bool {
        self.coded_tail <= self.source + TOL
    }

    pub fn second_holds(&self) -> bool {
        self.source_tail <= self.coded + TOL
    }
}

pub fn check_sandwich(model: &ExactModel, code: &TableCode, n: usize) -> Result<Sandwich> {
    if n == 0 {
        return Err(Error::Domain("the sandwich needs n ≥ 1".into()));
    }
    model.check_code(code)?;
    require_prefix_free(code)?;
    let mean = model.mean_len(code)?;
    let lens = code.lengths();
    let mut coded_tail: HashMap<(Vec<u8>, usize), f64> = HashMap::new();
    let mut source_tail: HashMap<(Vec<usize>, usize), f64> = HashMap::new();
    let mut source = 0.0;
    for (x, p) in model.block_pmf(n) {
        let q = p / mean;
        let y = encode(code, &x);
        let tail_len = y.len() - lens[x[0]];
        for phase in 0..lens[x[0]] {
            source += -q * q.ln();
            *coded_tail.entry((y[phase..phase + tail_len].to_vec(), phase)).or_default() += q;
            *source_tail.entry((x[1..].to_vec(), phase)).or_default() += q;
        }
    }
    // Ȳ^{M̄_n} runs past f*(x̄^n) by the phase, so later symbols are drawn
    // until the window is covered.
    let mut coded: HashMap<(Vec<u8>, usize), f64> = HashMap::new();
    let coded_len = |x: &[usize]| x.iter().map(|&s| lens[s]).sum::<usize>();
    for x1 in 0..model.alphabet_len() {
        for phase in 0..lens[x1] {
            let done = |x: &[usize]| x.len() >= n && coded_len(x) >= phase + coded_len(&x[..n]);
            model.walk(&[x1], &done, &mut |x, p| {
                let y = encode(code, x);
                let m = coded_len(&x[..n]);
                *coded.entry((y[phase..phase + m].to_vec(), phase)).or_default() += p / mean;
            });
        }
    }
    Ok(Sandwich {
        coded_tail: entropy_of_map(coded_tail),
        source,
        source_tail: entropy_of_map(source_tail),
        coded: entropy_of_map(coded),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedLengthBound {
    /// `H_ν̄(nL)`.
    pub coded: f64,
    /// `H_μ̄(n)`.
    pub source: f64,
    /// `H_μ̄(2) + ln L`.
    pub bound: f64,
}

impl FixedLengthBound {
    pub fn gap(&self) -> f64 {
        (self.coded - self.source).abs()
    }

    pub fn slack(&self) -> f64 {
        self.bound - self.gap()
    }

    pub fn holds(&self) -> bool {
        self.slack() >= -TOL
    }
}

pub fn check_fixed_length_bound(model: &ExactModel, code: &FixedLengthCode, n: usize) -> Result<FixedLengthBound> {
    let len = code.length();
    Ok(FixedLengthBound {
        coded: model.coded_stationary_entropy(code.table(), n * len)?,
        source: model.block_entropy(n),
        bound: model.block_entropy(2) + (len as f64).ln(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRatio {
    /// `H_μ(d) − H_μ(d−1)`.
    pub source_rate: f64,
    /// `H_ν̄(d') − H_ν̄(d'−1)`.
    pub coded_rate: f64,
    pub mean_len: f64,
}

impl RateRatio {
    /// `h_ν̄ L / h_μ`, which should be 1.
    pub fn ratio(&self) -> f64 {
        self.coded_rate * self.mean_len / self.source_rate
    }

    pub fn within(&self, tol: f64) -> bool {
        (self.ratio() - 1.0).abs() <= tol
    }
}

/// Compares `h_ν̄` with `h_μ / L` through exact entropy increments. Every
/// mixture component must share the expansion rate.
pub fn check_rate_ratio(model: &ExactModel, code: &TableCode, source_depth: usize, coded_depth: usize) -> Result<RateRatio> {
    require_prefix_free(code)?;
    if source_depth == 0 || coded_depth == 0 {
        return Err(Error::Domain("rate increments need depth ≥ 1".into()));
    }
    let per = model.component_mean_lengths(code)?;
    let lo = per.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = per.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo > 1e-12 * hi {
        return Err(Error::NonConstantExpansion(lo, hi));
    }
    let source_rate = model.block_entropy(source_depth) - model.block_entropy(source_depth - 1);
    let coded_rate =
        model.coded_stationary_entropy(code, coded_depth)? - model.coded_stationary_entropy(code, coded_depth - 1)?;
    Ok(RateRatio { source_rate, coded_rate, mean_len: model.mean_len(code)? })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VocabBound {
    /// `H_P(X^n)`, or `H_P̄(Ȳ^m)` for the coded form.
    pub entropy: f64,
    /// `h_μ`, or `h_ν̄ = h_μ / L`.
    pub rate: f64,
    pub length: usize,
    pub delta: f64,
    /// `|U_δ(n)|`, or `|Ū_δ̄(m)|`.
    pub vocabulary: usize,
}

impl VocabBound {
    /// `rate · length + [ln 2 − η(δ)] · vocabulary`.
    pub fn lower_bound(&self) -> f64 {
        let eta = binary_entropy(self.delta).expect("delta validated");
        self.rate * self.length as f64 + (2f64.ln() - eta) * self.vocabulary as f64
    }

    pub fn holds(&self) -> bool {
        self.entropy >= self.lower_bound() - TOL
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.5 && delta < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("delta must lie in (1/2, 1), got {delta}")))
    }
}

/// `H_P(X^n) ≥ h_μ n + [ln 2 − η(δ)] |U_δ(n)|` on a truncated model.
pub fn entropy_vocab_lower_bound(sf: &TruncatedSantaFe, n: usize, delta: f64) -> Result<VocabBound> {
    check_delta(delta)?;
    Ok(VocabBound {
        entropy: sf.model().block_entropy(n),
        rate: sf.entropy_rate(),
        length: n,
        delta,
        vocabulary: sf.u_size(delta, n),
    })
}

/// `H_P̄(Ȳ^m) ≥ h_ν̄ m + [ln 2 − η(δ̄)] |Ū_δ̄(m)|` with every term exact:
/// `Ū` is evaluated per bit assignment on the law of `Ȳ^m`.
pub fn coded_entropy_vocab_lower_bound(sf: &TruncatedSantaFe, code: &ConjCode, m: usize, delta_bar: f64) -> Result<VocabBound> {
    check_delta(delta_bar)?;
    if code.payload_len() != 1 || !code.is_free_payload() {
        return Err(Error::Domain("the coded predictors read a single free payload bit".into()));
    }
    let table = sf.table(code)?;
    let model = sf.model();
    let mean = model.mean_len(&table)?;
    let mut hit = vec![0.0; sf.k_small() + 1];
    for (c, w) in model.weights().iter().enumerate() {
        let z = sf.assignment(c);
        for (y, p) in model.component(c).rho_block_pmf(&table, m)? {
            for (k, s) in coded_predictions(&y) {
                let k = k as usize;
                if k >= 1 && k <= sf.k_small() && s == z[k - 1] {
                    hit[k] += w * p;
                }
            }
        }
    }
    Ok(VocabBound {
        entropy: model.coded_stationary_entropy(&table, m)?,
        rate: sf.entropy_rate() / mean,
        length: m,
        delta: delta_bar,
        vocabulary: hit.iter().skip(1).filter(|&&p| p >= delta_bar).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strings::Alphabet;

    fn fair() -> ExactModel {
        ExactModel::iid(vec![0.5, 0.5]).unwrap()
    }

    fn t2() -> TableCode {
        TableCode::from_codewords(Alphabet::BINARY, &["0", "10"]).unwrap()
    }

    #[test]
    fn coded_blocks_keep_their_entropy() {
        let r = check_coded_block_identity(&fair(), &t2(), 3).unwrap();
        assert!((r.source - 3.0 * 2f64.ln()).abs() < 1e-12 && r.holds());
        let id = TableCode::identity(Alphabet::TERNARY);
        assert!(check_coded_block_identity(&ExactModel::iid(vec![0.2, 0.3, 0.5]).unwrap(), &id, 3).unwrap().holds());
        let sf = TruncatedSantaFe::new(1.5, 3).unwrap();
        let table = sf.table(&ConjCode::santa_fe()).unwrap();
        assert!(check_coded_block_identity(sf.model(), &table, 3).unwrap().holds());
        let bad = TableCode::from_codewords(Alphabet::BINARY, &["0", "01"]).unwrap();
        assert!(check_coded_block_identity(&fair(), &bad, 2).is_err());
    }

    #[test]
    fn conditional_phase_entropy() {
        let r = check_conditional_n(&fair(), &t2(), 1, 1).unwrap();
        assert!((r.enumerated - (2.0 / 3.0) * 2f64.ln()).abs() < 1e-12);
        assert!((r.enumerated - 0.462098).abs() < 1e-6);
        assert!(r.holds());
        assert!(check_conditional_n(&fair(), &t2(), -1, 2).unwrap().holds());
        let fixed = TableCode::from_codewords(Alphabet::BINARY, &["00", "11"]).unwrap();
        let r = check_conditional_n(&fair(), &fixed, 0, 1).unwrap();
        assert!((r.enumerated - 2f64.ln()).abs() < 1e-12 && r.eta.abs() < 1e-15);
        let single = TableCode::from_codewords(Alphabet::BINARY, &["000"]).unwrap();
        let r = check_conditional_n(&ExactModel::iid(vec![1.0]).unwrap(), &single, 1, 1).unwrap();
        assert!((r.enumerated - 3f64.ln()).abs() < 1e-12);
        assert!(check_conditional_n(&fair(), &t2(), 2, 3).is_err());
        let sf = TruncatedSantaFe::new(2.0, 3).unwrap();
        let table = sf.table(&ConjCode::santa_fe()).unwrap();
        assert!(check_conditional_n(sf.model(), &table, 0, 2).unwrap().holds());
    }

    #[test]
    fn length_biased_biconditional() {
        let model = ExactModel::iid(vec![0.6, 0.3, 0.1]).unwrap();
        let code = TableCode::from_codewords(Alphabet::BINARY, &["0", "10", "11"]).unwrap();
        let v = check_length_biased_inequality(&model, &code, 0, 2).unwrap();
        assert!(v.covariance >= 0.0 && v.inequality_holds && v.consistent());
        let fixed = TableCode::from_codewords(Alphabet::BINARY, &["00", "01", "10"]).unwrap();
        let v = check_length_biased_inequality(&model, &fixed, 1, 1).unwrap();
        assert!(v.covariance.abs() < 1e-12 && v.eta.abs() < 1e-15 && (v.biased - v.unbiased).abs() < 1e-12);
        // Long codewords on likely symbols make the covariance negative.
        let mut reversed = None;
        for i in 1..20 {
            let p = 0.5 + 0.025 * i as f64;
            let model = ExactModel::iid(vec![p, 1.0 - p]).unwrap();
            let code = TableCode::from_codewords(Alphabet::BINARY, &["10", "0"]).unwrap();
            let v = check_length_biased_inequality(&model, &code, 1, 2).unwrap();
            assert!(v.consistent());
            if v.covariance < 0.0 {
                reversed = Some(v);
            }
        }
        let v = reversed.expect("a negative covariance on the grid");
        assert!(!v.inequality_holds);
    }

    #[test]
    fn sandwich_inequalities() {
        let s = check_sandwich(&fair(), &t2(), 3).unwrap();
        assert!(s.first_holds() && s.second_holds(), "{s:?}");
        let id = TableCode::identity(Alphabet::BINARY);
        let s = check_sandwich(&fair(), &id, 3).unwrap();
        assert!((s.coded_tail - 2.0 * 2f64.ln()).abs() < 1e-12 && (s.source - 3.0 * 2f64.ln()).abs() < 1e-12);
        assert!((s.source_tail - 2.0 * 2f64.ln()).abs() < 1e-12 && (s.coded - 3.0 * 2f64.ln()).abs() < 1e-12);
        let sf = TruncatedSantaFe::new(1.5, 3).unwrap();
        let table = sf.table(&ConjCode::santa_fe()).unwrap();
        let s = check_sandwich(sf.model(), &table, 2).unwrap();
        assert!(s.first_holds() && s.second_holds(), "{s:?}");
    }

    #[test]
    fn fixed_length_bounds() {
        let code = FixedLengthCode::from_codewords(Alphabet::BINARY, &["00", "11"]).unwrap();
        for n in 1..=3 {
            let b = check_fixed_length_bound(&fair(), &code, n).unwrap();
            assert!(b.holds() && b.slack() > 0.0, "{b:?}");
        }
        let id = FixedLengthCode::identity(Alphabet::BINARY);
        let b = check_fixed_length_bound(&fair(), &id, 3).unwrap();
        assert!(b.gap() < 1e-12 && b.holds());
        let mix = ExactModel::mixture(vec![0.5, 0.5], vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        for n in 1..=3 {
            assert!(check_fixed_length_bound(&mix, &code, n).unwrap().holds());
        }
    }

    #[test]
    fn rate_ratios() {
        let r = check_rate_ratio(&fair(), &t2(), 4, 10).unwrap();
        assert!((r.coded_rate - 2f64.ln() / 1.5).abs() < 1e-10);
        assert!(r.within(1e-9));
        let id = TableCode::identity(Alphabet::BINARY);
        assert!((check_rate_ratio(&fair(), &id, 3, 3).unwrap().ratio() - 1.0).abs() < 1e-12);
        let two = TableCode::from_codewords(Alphabet::BINARY, &["00", "11"]).unwrap();
        // The phase of a 2-blocked coin stays ambiguous with probability
        // 2^{-d/2}, so increments approach ln2/2 geometrically.
        let r = check_rate_ratio(&fair(), &two, 3, 16).unwrap();
        assert!(r.coded_rate > 2f64.ln() / 2.0 && r.within(0.01), "{r:?}");
        let mix = ExactModel::mixture(vec![0.5, 0.5], vec![vec![0.9, 0.1], vec![0.2, 0.8]]).unwrap();
        assert!(matches!(check_rate_ratio(&mix, &t2(), 3, 3), Err(Error::NonConstantExpansion(..))));
    }

    #[test]
    fn vocabulary_bounds() {
        let sf = TruncatedSantaFe::new(1.5, 4).unwrap();
        let b = entropy_vocab_lower_bound(&sf, 4, 0.6).unwrap();
        assert!(b.vocabulary >= 1 && b.holds(), "{b:?}");
        let near_one = entropy_vocab_lower_bound(&sf, 4, 0.999_999).unwrap();
        assert_eq!(near_one.vocabulary, 0);
        assert!(near_one.holds());
        assert!(entropy_vocab_lower_bound(&sf, 4, 0.5).is_err());
        let small = TruncatedSantaFe::new(2.0, 2).unwrap();
        let b = coded_entropy_vocab_lower_bound(&small, &ConjCode::santa_fe(), 7, 0.55).unwrap();
        assert!(b.vocabulary >= 1 && b.holds(), "{b:?}");
    }
}
