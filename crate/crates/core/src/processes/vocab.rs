use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::predictors::coded_predictions;
use super::santa_fe::{SantaFeModel, K_CEILING};
use super::SourceModel;
use crate::codes::ConjCode;
use crate::error::{Error, Result};
use crate::measures::{HasLengthLaw, PhaseSampler};
use crate::rng::{domain, stream};

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.5 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (1/2, 1), got {delta}")));
    }
    Ok(())
}

/// `P(s_k(X_1^n) = Z_k) = 1 − (1 − p_k)^n`: the bit is predicted exactly
/// when `k` occurs among `K_1, …, K_n`.
pub fn exact_prediction_prob(model: &SantaFeModel, k: u128, n: u64) -> Result<f64> {
    if k == 0 || k >= K_CEILING {
        return Err(Error::Domain(format!("k must lie in [1, 2^127), got {k}")));
    }
    Ok(-((n as f64) * (-model.pmf(k)).ln_1p()).exp_m1())
}

/// `U_δ(n) = {1, …, largest}`; the set is an initial segment because the
/// prediction probability decreases in `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct USet {
    pub delta: f64,
    pub n: u64,
    pub largest: u128,
}

impl USet {
    pub fn len(&self) -> u128 {
        self.largest
    }

    pub fn is_empty(&self) -> bool {
        self.largest == 0
    }

    pub fn contains(&self, k: u128) -> bool {
        k >= 1 && k <= self.largest
    }

    pub fn members(&self) -> impl Iterator<Item = u128> {
        1..=self.largest
    }
}

pub fn u_set(model: &SantaFeModel, delta: f64, n: u64) -> Result<USet> {
    check_delta(delta)?;
    let qualifies = |k: u128| exact_prediction_prob(model, k, n).map(|p| p >= delta);
    if !qualifies(1)? {
        return Ok(USet { delta, n, largest: 0 });
    }
    let mut hi = 2u128;
    while hi < K_CEILING / 2 && qualifies(hi)? {
        hi *= 2;
    }
    if qualifies(hi)? {
        return Err(Error::TableTooSmall(hi));
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if qualifies(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(USet { delta, n, largest: lo })
}

pub fn u_size(model: &SantaFeModel, delta: f64, n: u64) -> Result<u128> {
    u_set(model, delta, n).map(|u| u.len())
}

/// `(n / (−ζ(α) ln(1−δ)))^{1/α}`.
pub fn power_law_bound(model: &SantaFeModel, delta: f64, n: u64) -> Result<f64> {
    check_delta(delta)?;
    Ok((n as f64 / (-model.zeta().value * (-delta).ln_1p())).powf(1.0 / model.alpha()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KEstimate {
    pub k: u128,
    pub hits: usize,
    pub p_hat: f64,
    /// Half-width of the upper Wilson bound at three standard deviations.
    pub radius: f64,
}

/// Monte Carlo estimate of `Ū_δ̄(m) = {k : P̄(s̄_k(Ȳ^m) = Z̄_k) ≥ δ̄}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BarUEstimate {
    pub m: usize,
    pub trials: usize,
    pub delta_bar: f64,
    /// Every `k` predicted correctly at least once, in increasing order.
    pub per_k: Vec<KEstimate>,
}

impl BarUEstimate {
    pub fn members(&self) -> impl Iterator<Item = u128> + '_ {
        self.per_k.iter().filter(|e| e.p_hat >= self.delta_bar).map(|e| e.k)
    }

    pub fn len(&self) -> usize {
        self.members().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, k: u128) -> Option<&KEstimate> {
        self.per_k.binary_search_by(|e| e.k.cmp(&k)).ok().map(|i| &self.per_k[i])
    }

    /// `k` is in the set, or its estimate is within confidence of `δ̄`.
    pub fn plausibly_contains(&self, k: u128) -> bool {
        self.get(k).is_some_and(|e| e.p_hat + e.radius >= self.delta_bar)
    }
}

const Z_CONFIDENCE: f64 = 3.0;

fn wilson_upper(hits: usize, trials: usize, z: f64) -> f64 {
    let n = trials as f64;
    let p = hits as f64 / n;
    let denom = 1.0 + z * z / n;
    let centre = p + z * z / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt();
    ((centre + spread) / denom).min(1.0)
}

/// Samples `Ȳ^m` from the stationary mean of the coded Santa Fe process
/// `trials` times and counts, for every `k`, how often `s̄_k` recovers `Z_k`.
pub fn bar_u_estimate(
    model: &SantaFeModel,
    code: &ConjCode,
    delta_bar: f64,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<BarUEstimate> {
    check_delta(delta_bar)?;
    if code.payload_len() != 1 || !code.is_free_payload() {
        return Err(Error::Domain("the coded predictors read a single free payload bit".into()));
    }
    if trials < 10 {
        return Err(Error::TooFewTrials { trials, radius: 0.5 });
    }
    let law = model.length_law(code)?;
    let sampler = PhaseSampler::new(model, code, &law);
    let wins: Vec<Vec<u128>> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Vec<u128>> {
            if m == 0 {
                return Ok(Vec::new());
            }
            let mut rng = stream(seed, domain::TRIAL, t as u64);
            let mut z = model.realize(&mut rng);
            let sample = sampler.sample(&mut z, 0, m, &mut rng)?;
            Ok(coded_predictions(sample.coded.right())
                .into_iter()
                .filter(|&(k, s)| s != 2 && s == z.peek(k))
                .map(|(k, _)| k)
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut hits: BTreeMap<u128, usize> = BTreeMap::new();
    for k in wins.into_iter().flatten() {
        *hits.entry(k).or_default() += 1;
    }
    let per_k = hits
        .into_iter()
        .map(|(k, h)| {
            let p_hat = h as f64 / trials as f64;
            KEstimate { k, hits: h, p_hat, radius: wilson_upper(h, trials, Z_CONFIDENCE) - p_hat }
        })
        .collect();
    Ok(BarUEstimate { m, trials, delta_bar, per_k })
}
