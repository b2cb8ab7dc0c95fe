use std::collections::HashMap;

use super::{entropy_of, EntropyTable};
use crate::codes::{Code, ConjCode, Fact, TableCode};
use crate::error::{Error, Result};
use crate::processes::{IidModel, MixtureModel};
use crate::strings::{Alphabet, Word};

const SUM_TOL: f64 = 1e-12;

/// A finite mixture of IID laws on `{0, …, D−1}`, small enough for exact
/// enumeration of blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactModel {
    weights: Vec<f64>,
    components: Vec<Vec<f64>>,
}

fn check_pmf(p: &[f64]) -> Result<()> {
    if p.iter().any(|&x| !(x >= 0.0)) || (p.iter().sum::<f64>() - 1.0).abs() > SUM_TOL {
        return Err(Error::Domain("masses must be nonnegative and sum to 1".into()));
    }
    Ok(())
}

impl ExactModel {
    pub fn iid(pmf: Vec<f64>) -> Result<Self> {
        Self::mixture(vec![1.0], vec![pmf])
    }

    pub fn mixture(weights: Vec<f64>, components: Vec<Vec<f64>>) -> Result<Self> {
        check_pmf(&weights)?;
        if weights.len() != components.len() || components.is_empty() {
            return Err(Error::Domain("one weight per component".into()));
        }
        let d = components[0].len();
        if d == 0 || components.iter().any(|c| c.len() != d) {
            return Err(Error::Domain("components must share a nonempty alphabet".into()));
        }
        components.iter().try_for_each(|c| check_pmf(c))?;
        Ok(ExactModel { weights, components })
    }

    pub fn from_iid(model: &IidModel) -> Self {
        ExactModel { weights: vec![1.0], components: vec![model.pmf().to_vec()] }
    }

    pub fn from_mixture(model: &MixtureModel) -> Self {
        ExactModel {
            weights: model.weights().to_vec(),
            components: model.components().iter().map(|c| c.pmf().to_vec()).collect(),
        }
    }

    pub fn alphabet_len(&self) -> usize {
        self.components[0].len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// The model conditioned on component `c`.
    pub fn component(&self, c: usize) -> ExactModel {
        ExactModel { weights: vec![1.0], components: vec![self.components[c].clone()] }
    }

    /// One-symbol marginal.
    pub fn marginal(&self) -> Vec<f64> {
        (0..self.alphabet_len())
            .map(|s| self.weights.iter().zip(&self.components).map(|(w, c)| w * c[s]).sum())
            .collect()
    }

    pub fn block_prob(&self, x: &[usize]) -> f64 {
        self.weights.iter().zip(&self.components).map(|(w, c)| w * x.iter().map(|&s| c[s]).product::<f64>()).sum()
    }

    /// Depth-first enumeration of positive-probability source strings that
    /// extend `start`, stopping at the first prefix accepted by `done`.
    pub(crate) fn walk<D, V>(&self, start: &[usize], done: &D, visit: &mut V)
    where
        D: Fn(&[usize]) -> bool,
        V: FnMut(&[usize], f64),
    {
        let probs: Vec<f64> = self
            .weights
            .iter()
            .zip(&self.components)
            .map(|(w, c)| w * start.iter().map(|&s| c[s]).product::<f64>())
            .collect();
        if probs.iter().all(|&p| p == 0.0) {
            return;
        }
        let mut prefix = start.to_vec();
        self.walk_rec(&mut prefix, &probs, done, visit);
    }

    fn walk_rec<D, V>(&self, prefix: &mut Vec<usize>, probs: &[f64], done: &D, visit: &mut V)
    where
        D: Fn(&[usize]) -> bool,
        V: FnMut(&[usize], f64),
    {
        if done(prefix) {
            visit(prefix, probs.iter().sum());
            return;
        }
        for s in 0..self.alphabet_len() {
            let next: Vec<f64> = probs.iter().zip(&self.components).map(|(p, c)| p * c[s]).collect();
            if next.iter().all(|&p| p == 0.0) {
                continue;
            }
            prefix.push(s);
            self.walk_rec(prefix, &next, done, visit);
            prefix.pop();
        }
    }

    /// Positive-probability blocks of length `n` with their masses.
    pub fn block_pmf(&self, n: usize) -> Vec<(Vec<usize>, f64)> {
        let mut out = Vec::new();
        self.walk(&[], &|x: &[usize]| x.len() == n, &mut |x, p| out.push((x.to_vec(), p)));
        out
    }

    pub fn block_entropy(&self, n: usize) -> f64 {
        entropy_of(self.block_pmf(n).into_iter().map(|(_, p)| p))
    }

    pub fn entropy_table(&self, n_max: usize) -> EntropyTable {
        EntropyTable::exact(n_max, |n| self.block_entropy(n))
    }

    /// `E|f(X)|` under each component.
    pub fn component_mean_lengths(&self, code: &TableCode) -> Result<Vec<f64>> {
        self.check_code(code)?;
        let lens = code.lengths();
        Ok(self.components.iter().map(|c| c.iter().zip(&lens).map(|(p, &l)| p * l as f64).sum()).collect())
    }

    pub fn mean_len(&self, code: &TableCode) -> Result<f64> {
        Ok(self.weights.iter().zip(self.component_mean_lengths(code)?).map(|(w, l)| w * l).sum())
    }

    pub(crate) fn check_code(&self, code: &TableCode) -> Result<()> {
        if code.len() != self.alphabet_len() {
            return Err(Error::Domain(format!(
                "code has {} codewords for a source alphabet of {}",
                code.len(),
                self.alphabet_len()
            )));
        }
        if code.lengths().contains(&0) {
            return Err(Error::InvalidCode("empty codeword".into()));
        }
        Ok(())
    }

    /// Exact law of `Ȳ^n` for the stationary mean of the coded process:
    /// `x̄₁` drawn with mass `P(x₁)|f(x₁)|/L`, a uniform phase inside
    /// `f(x̄₁)`, and the process continued until `n` coded symbols follow it.
    pub fn rho_block_pmf(&self, code: &TableCode, n: usize) -> Result<HashMap<Vec<u8>, f64>> {
        let mean = self.mean_len(code)?;
        let cws = code.codewords();
        let coded_len = |x: &[usize]| x.iter().map(|&s| cws[s].len()).sum::<usize>();
        let mut out: HashMap<Vec<u8>, f64> = HashMap::new();
        for x1 in 0..self.alphabet_len() {
            for phase in 0..cws[x1].len() {
                let done = |x: &[usize]| coded_len(x) >= phase + n;
                self.walk(&[x1], &done, &mut |x, p| {
                    let y: Vec<u8> = x.iter().flat_map(|&s| cws[s].iter().copied()).collect();
                    *out.entry(y[phase..phase + n].to_vec()).or_default() += p / mean;
                });
            }
        }
        Ok(out)
    }

    /// `H_ν̄(n)` from [`Self::rho_block_pmf`].
    pub fn coded_stationary_entropy(&self, code: &TableCode, n: usize) -> Result<f64> {
        Ok(entropy_of(self.rho_block_pmf(code, n)?.into_values()))
    }
}

/// Santa Fe restricted to `K ∈ {1, …, K_small}` with renormalized zeta
/// masses, mixed exactly over all `2^{K_small}` assignments of the bits.
/// Source symbol `2(k−1) + z` stands for the fact `(k, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSantaFe {
    alpha: f64,
    masses: Vec<f64>,
    model: ExactModel,
}

pub const MAX_K_SMALL: usize = 6;

impl TruncatedSantaFe {
    pub fn new(alpha: f64, k_small: usize) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
        }
        if !(1..=MAX_K_SMALL).contains(&k_small) {
            return Err(Error::Domain(format!("K_small must lie in 1..={MAX_K_SMALL}, got {k_small}")));
        }
        let raw: Vec<f64> = (1..=k_small).map(|k| (k as f64).powf(-alpha)).collect();
        let total: f64 = raw.iter().sum();
        let masses: Vec<f64> = raw.iter().map(|p| p / total).collect();
        let assignments = 1usize << k_small;
        let components = (0..assignments)
            .map(|bits| {
                let mut c = vec![0.0; 2 * k_small];
                for (i, &p) in masses.iter().enumerate() {
                    c[2 * i + ((bits >> i) & 1)] = p;
                }
                c
            })
            .collect();
        let model = ExactModel { weights: vec![1.0 / assignments as f64; assignments], components };
        Ok(TruncatedSantaFe { alpha, masses, model })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn k_small(&self) -> usize {
        self.masses.len()
    }

    /// Renormalized `P(K = k)` for `k = 1..=K_small`.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn model(&self) -> &ExactModel {
        &self.model
    }

    pub fn fact(symbol: usize) -> Fact {
        Fact { k: (symbol / 2 + 1) as u128, z: (symbol % 2) as u32 }
    }

    /// The bits `Z_1, …, Z_{K_small}` of mixture component `c`.
    pub fn assignment(&self, c: usize) -> Vec<u8> {
        (0..self.k_small()).map(|i| ((c >> i) & 1) as u8).collect()
    }

    /// The restriction of `code` to the truncated facts as a table.
    pub fn table(&self, code: &ConjCode) -> Result<TableCode> {
        let entries = (0..2 * self.k_small())
            .map(|s| {
                let f = Self::fact(s);
                Ok((f.to_string(), code.codeword(&f)?))
            })
            .collect::<Result<Vec<(String, Word)>>>()?;
        TableCode::new(Alphabet::TERNARY, entries)
    }

    /// Entropy rate `H(K)`: every component is IID with this entropy.
    pub fn entropy_rate(&self) -> f64 {
        entropy_of(self.masses.iter().copied())
    }

    /// `P(k ∈ {K_1, …, K_n})`.
    pub fn prediction_prob(&self, k: usize, n: usize) -> f64 {
        1.0 - (1.0 - self.masses[k - 1]).powi(n as i32)
    }

    /// `|U_δ(n)|` on the truncated support.
    pub fn u_size(&self, delta: f64, n: usize) -> usize {
        (1..=self.k_small()).filter(|&k| self.prediction_prob(k, n) >= delta).count()
    }

    /// `H(X^n) = n H(K) + ln 2 · E[#distinct K in n draws]`: given `K^n`, the
    /// bits of the distinct indices are fresh fair coins.
    pub fn block_entropy_closed_form(&self, n: usize) -> f64 {
        let distinct: f64 = (1..=self.k_small()).map(|k| self.prediction_prob(k, n)).sum();
        n as f64 * self.entropy_rate() + 2f64.ln() * distinct
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::entropy_rate;

    #[test]
    fn rejects_bad_masses() {
        assert!(ExactModel::iid(vec![0.5, 0.4]).is_err());
        assert!(ExactModel::mixture(vec![1.0], vec![vec![0.5, 0.5], vec![1.0, 0.0]]).is_err());
        assert!(ExactModel::mixture(vec![0.5, 0.5], vec![vec![0.5, 0.5], vec![1.0]]).is_err());
        assert!(TruncatedSantaFe::new(1.0, 3).is_err());
        assert!(TruncatedSantaFe::new(2.0, 7).is_err());
    }

    #[test]
    fn block_pmf_sums_to_one() {
        let sf = TruncatedSantaFe::new(1.5, 3).unwrap();
        for n in 0..4 {
            let total: f64 = sf.model().block_pmf(n).iter().map(|(_, p)| p).sum();
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn truncated_santa_fe_matches_closed_form() {
        for (alpha, k) in [(1.1, 3), (2.0, 4), (1.5, 2)] {
            let sf = TruncatedSantaFe::new(alpha, k).unwrap();
            for n in 0..=4 {
                let h = sf.model().block_entropy(n);
                assert!((h - sf.block_entropy_closed_form(n)).abs() < 1e-10, "α={alpha} K={k} n={n}");
            }
        }
    }

    #[test]
    fn truncated_santa_fe_increments_decrease() {
        let sf = TruncatedSantaFe::new(1.5, 4).unwrap();
        let table = sf.model().entropy_table(5);
        let h: Vec<f64> = table.rows().iter().map(|r| r.h).collect();
        let incs: Vec<f64> = h.windows(2).map(|w| w[1] - w[0]).collect();
        assert!(incs.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{incs:?}");
        let rate = entropy_rate(&table).unwrap();
        assert!(rate.increment > sf.entropy_rate());
    }

    #[test]
    fn rho_of_two_word_code() {
        let model = ExactModel::iid(vec![0.5, 0.5]).unwrap();
        let code = TableCode::from_codewords(Alphabet::BINARY, &["0", "10"]).unwrap();
        let one = model.rho_block_pmf(&code, 1).unwrap();
        assert!((one[&vec![1u8]] - 1.0 / 3.0).abs() < 1e-15);
        let two = model.rho_block_pmf(&code, 2).unwrap();
        assert!(!two.contains_key(&vec![1u8, 1]));
        assert!((two[&vec![0u8, 0]] - 1.0 / 3.0).abs() < 1e-15);
        let total: f64 = model.rho_block_pmf(&code, 7).unwrap().values().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
