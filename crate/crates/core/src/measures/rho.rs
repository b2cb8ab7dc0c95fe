use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Num, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::{Estimate, LengthLaw, PhaseSampler};
use crate::codes::{Code, TableCode};
use crate::error::{Error, Result};
use crate::processes::{IidModel, SourceModel};
use crate::rng::{domain, stream};

/// Two estimates of `ρ([u])` for the stationary mean of a coded process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoEstimate {
    /// Mean of `G([u], x)/L`, where `G` counts the phases inside `f(x_1)`
    /// at which the coded sequence starts with `u`.
    pub g_route: Estimate,
    /// Frequency of `ȳ ∈ [u]` over length-biased phase samples.
    pub phase_route: Estimate,
    /// Distance between the two in joint standard errors.
    pub z: f64,
}

/// Bound above which the two routes are taken to disagree.
pub const RHO_AGREEMENT_Z: f64 = 5.0;

pub fn estimate_rho<M, C>(model: &M, code: &C, law: &LengthLaw, u: &[u8], trials: usize, seed: u64) -> Result<RhoEstimate>
where
    M: SourceModel,
    C: Code<Source = M::Symbol> + Sync,
{
    if trials == 0 {
        return Err(Error::Domain("estimate_rho needs at least one trial".into()));
    }
    let mean_len = law.mean();
    let g: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, domain::TRIAL, t as u64);
            let mut hidden = model.realize(&mut rng);
            let first = code.codeword(&model.draw(&mut hidden, &mut rng))?;
            let mut y = first.clone().into_inner();
            while y.len() < first.len() - 1 + u.len() {
                code.write_codeword(&model.draw(&mut hidden, &mut rng), &mut y)?;
            }
            let hits = (0..first.len()).filter(|&k| y[k..].starts_with(u)).count();
            Ok(hits as f64 / mean_len)
        })
        .collect::<Result<_>>()?;
    let sampler = PhaseSampler::new(model, code, law);
    let phase: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream(seed, domain::PHASE, t as u64);
            let mut hidden = model.realize(&mut rng);
            let s = sampler.sample(&mut hidden, 0, u.len(), &mut rng)?;
            Ok(if s.coded.right() == u { 1.0 } else { 0.0 })
        })
        .collect::<Result<_>>()?;
    let g_route = Estimate::from_samples(&g);
    let phase_route = Estimate::from_samples(&phase);
    let z = g_route.z_between(&phase_route);
    if z > RHO_AGREEMENT_Z {
        return Err(Error::EstimatorDisagreement { a: g_route.value, b: phase_route.value, z });
    }
    Ok(RhoEstimate { g_route, phase_route, z })
}

/// `ρ([u])` computed exactly; `exact` is set when the pmf is rational.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactRho {
    pub value: f64,
    pub exact: Option<BigRational>,
}

/// `L^{-1} Σ_{x_1} P(x_1) Σ_{k < |f(x_1)|} P(T^k f*(x) ∈ [u] | x_1)` by
/// recursion over source prefixes whose coded length covers `u`.
///
/// `depth` bounds the coded length explored and must be at least
/// `|u| + max |f(x)|`.
pub fn exact_rho_iid(model: &IidModel, code: &TableCode, u: &[u8], depth: usize) -> Result<ExactRho> {
    if model.alphabet_len() != code.len() {
        return Err(Error::Domain("model and code disagree on the source alphabet".into()));
    }
    if !code.is_prefix_free() {
        return Err(Error::InvalidCode("exact_rho_iid needs a prefix-free code".into()));
    }
    let need = u.len() + code.max_len();
    if depth < need {
        return Err(Error::InsufficientDepth { need, have: depth });
    }
    match model.exact_pmf() {
        Some(pmf) => {
            let r = rho_in(pmf, code, u);
            Ok(ExactRho { value: r.to_f64().unwrap_or(f64::NAN), exact: Some(r) })
        }
        None => Ok(ExactRho { value: rho_in(model.pmf(), code, u), exact: None }),
    }
}

fn rho_in<T: Num + Clone>(pmf: &[T], code: &TableCode, u: &[u8]) -> T {
    let cws = code.codewords();
    let mut memo: HashMap<usize, T> = HashMap::new();
    let mut mean = T::zero();
    let mut acc = T::zero();
    for (p, cw) in pmf.iter().zip(cws) {
        mean = mean + p.clone() * T::from_usize(cw.len());
        for k in 0..cw.len() {
            let tail = &cw[k..];
            let ok = if tail.len() >= u.len() {
                tail.starts_with(u)
            } else {
                u.starts_with(tail)
            };
            if ok {
                let rest = if tail.len() >= u.len() { T::one() } else { starts_with(pmf, cws, u, tail.len(), &mut memo) };
                acc = acc + p.clone() * rest;
            }
        }
    }
    acc / mean
}

/// `P(f*(X_1 X_2 …) starts with u[offset..])`.
fn starts_with<T: Num + Clone>(pmf: &[T], cws: &[crate::strings::Word], u: &[u8], offset: usize, memo: &mut HashMap<usize, T>) -> T {
    if offset >= u.len() {
        return T::one();
    }
    if let Some(v) = memo.get(&offset) {
        return v.clone();
    }
    let s = &u[offset..];
    let mut total = T::zero();
    for (p, cw) in pmf.iter().zip(cws) {
        if cw.len() >= s.len() {
            if cw.starts_with(s) {
                total = total + p.clone();
            }
        } else if s.starts_with(cw) {
            total = total + p.clone() * starts_with(pmf, cws, u, offset + cw.len(), memo);
        }
    }
    memo.insert(offset, total.clone());
    total
}

trait FromUsize {
    fn from_usize(n: usize) -> Self;
}

impl<T: Num> FromUsize for T {
    fn from_usize(n: usize) -> Self {
        (0..n).fold(T::zero(), |acc, _| acc + T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::HasLengthLaw;
    use crate::strings::Alphabet;

    fn t2() -> TableCode {
        TableCode::from_codewords(Alphabet::BINARY, &["0", "10"]).unwrap()
    }

    /// Enumerates all `n`-symbol source blocks and every phase inside the first
    /// codeword; `n` is large enough for the coded block to cover `u`.
    fn brute(pmf: &[f64], code: &TableCode, u: &[u8], n: usize) -> f64 {
        let k = pmf.len();
        let mean: f64 = pmf.iter().zip(code.codewords()).map(|(p, w)| p * w.len() as f64).sum();
        let mut total = 0.0;
        for idx in 0..k.pow(n as u32) {
            let mut x = Vec::with_capacity(n);
            let mut r = idx;
            for _ in 0..n {
                x.push(r % k);
                r /= k;
            }
            let p: f64 = x.iter().map(|&s| pmf[s]).product();
            let y = crate::codes::encode_star(code, &x).unwrap();
            let first = code.codewords()[x[0]].len();
            let hits = (0..first).filter(|&j| y[j..].starts_with(u)).count();
            total += p * hits as f64;
        }
        total / mean
    }

    #[test]
    fn two_word_code_density() {
        let r = exact_rho_iid(&IidModel::fair_coin(), &t2(), &[1], 8).unwrap();
        assert_eq!(r.exact.unwrap(), BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn identity_code() {
        let r = exact_rho_iid(&IidModel::fair_coin(), &TableCode::identity(Alphabet::BINARY), &[0], 4).unwrap();
        assert_eq!(r.value, 0.5);
    }

    #[test]
    fn depth_guard() {
        assert!(matches!(
            exact_rho_iid(&IidModel::fair_coin(), &t2(), &[1, 0, 1, 1], 5),
            Err(Error::InsufficientDepth { need: 6, .. })
        ));
    }

    #[test]
    fn matches_block_enumeration() {
        let code = TableCode::from_codewords(Alphabet::BINARY, &["0", "10", "110", "111"]).unwrap();
        let model = IidModel::new(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        for u in [vec![1u8], vec![0, 1], vec![1, 1, 0], vec![0, 1, 1, 1], vec![1, 0, 0, 1, 1]] {
            let exact = exact_rho_iid(&model, &code, &u, 16).unwrap().value;
            // Every codeword has length ≥ 1, so |u| + 3 symbols always cover u.
            let b = brute(model.pmf(), &code, &u, u.len() + 3);
            assert!((exact - b).abs() < 1e-12, "{u:?}: {exact} vs {b}");
        }
    }

    #[test]
    fn both_routes_agree() {
        let model = IidModel::fair_coin();
        let code = t2();
        let law = model.length_law(&code).unwrap();
        let est = estimate_rho(&model, &code, &law, &[1], 40_000, 9).unwrap();
        assert!(est.phase_route.z_against(1.0 / 3.0) < 4.0);
        assert!(est.g_route.z_against(1.0 / 3.0) < 4.0);
    }
}
