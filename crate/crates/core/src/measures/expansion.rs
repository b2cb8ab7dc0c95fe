use rayon::prelude::*;
use serde::Serialize;

use super::{Estimate, HasLengthLaw};
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::processes::{SantaFeModel, SourceModel};
use crate::rng::{domain, stream};
use crate::series::power_sum;

/// Per-realization expansion rates `S(x, n)/n` and their mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionStats {
    pub n: usize,
    pub per_realization: Vec<f64>,
    /// Cross-realization estimate of `L`.
    pub estimate: Estimate,
    /// `L` under the exact length law of the sampler.
    pub law_mean: f64,
}

impl ExpansionStats {
    /// Standard deviation of the per-realization rates.
    pub fn spread(&self) -> f64 {
        self.estimate.stderr * (self.per_realization.len() as f64).sqrt()
    }
}

pub fn expansion_rate<M, C>(model: &M, code: &C, n: usize, realizations: usize, seed: u64) -> Result<ExpansionStats>
where
    M: SourceModel + HasLengthLaw<C>,
    C: Code<Source = M::Symbol> + Sync,
{
    if n == 0 || realizations == 0 {
        return Err(Error::Domain("expansion_rate needs n >= 1 and at least one realization".into()));
    }
    let law_mean = model.length_law(code)?.mean();
    let per_realization = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, domain::REALIZATION, r as u64);
            let mut hidden = model.realize(&mut rng);
            let mut s = 0usize;
            for _ in 0..n {
                s += code.codeword_len(&model.draw(&mut hidden, &mut rng))?;
            }
            Ok(s as f64 / n as f64)
        })
        .collect::<Result<Vec<f64>>>()?;
    let estimate = Estimate::from_samples(&per_realization);
    Ok(ExpansionStats { n, per_realization, estimate, law_mean })
}

/// `L = Σ_k (⌊log₂ k⌋ + 1 + A) k^{-α} / ζ(α)` of the untruncated process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticRate {
    pub value: f64,
    /// Bound on the omitted index blocks.
    pub tail_bound: f64,
    /// Index blocks `[2^j, 2^{j+1})` summed.
    pub blocks: u32,
}

pub fn analytic_expansion_rate(model: &SantaFeModel, payload_len: u32) -> AnalyticRate {
    let alpha = model.alpha();
    let z = model.zeta().value;
    let r = 2f64.powf(1.0 - alpha);
    let c = 1.0 + payload_len as f64;
    // Block j holds 2^j terms, each at most 2^{-jα}.
    let tail = |j: f64| r.powf(j) * ((j + c) / (1.0 - r) + r / (1.0 - r).powi(2)) / z;
    let mut value = 0.0;
    let mut j = 0u32;
    while j < 1000 {
        let lo = 2f64.powi(j as i32);
        value += (j as f64 + c) * power_sum(lo, 2.0 * lo - 1.0, alpha) / z;
        j += 1;
        if tail(j as f64) < 1e-15 * value {
            break;
        }
    }
    AnalyticRate { value, tail_bound: tail(j as f64), blocks: j }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{ConjCode, FixedLengthCode};
    use crate::processes::IidModel;
    use crate::strings::Alphabet;

    #[test]
    fn fixed_length_rate_is_exact() {
        let code = FixedLengthCode::from_codewords(Alphabet::BINARY, &["000", "101"]).unwrap();
        let stats = expansion_rate(&IidModel::fair_coin(), &code, 100, 5, 1).unwrap();
        assert!(stats.per_realization.iter().all(|&l| l == 3.0));
        assert_eq!(stats.law_mean, 3.0);
    }

    #[test]
    fn analytic_rate_oracle() {
        // Direct summation over k up to 10^7 plus a integral tail estimate.
        let m = SantaFeModel::with_k_max(2.0, 100).unwrap();
        let a = analytic_expansion_rate(&m, 1);
        let direct: f64 = (1..10_000_000u64).rev().map(|k| (64 - k.leading_zeros() + 1) as f64 * m.pmf(k as u128)).sum();
        assert!((a.value - direct).abs() < 5e-6, "{} vs {direct}", a.value);
        assert!(a.tail_bound < 1e-14);
        let law = m.length_law(&ConjCode::santa_fe()).unwrap();
        assert!((law.mean() - a.value).abs() < 1e-12);
    }

    #[test]
    fn santa_fe_rates_agree_across_realizations() {
        let m = SantaFeModel::with_k_max(2.0, 100_000).unwrap();
        let stats = expansion_rate(&m, &ConjCode::santa_fe(), 10_000, 20, 3).unwrap();
        assert!(stats.estimate.z_against(stats.law_mean) < 4.0);
        assert!(stats.spread() < 0.05);
    }
}
