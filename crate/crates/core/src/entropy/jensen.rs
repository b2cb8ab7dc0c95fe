use std::collections::HashMap;

use serde::Serialize;

use super::{entropy_of, ExactModel};
use crate::error::{Error, Result};
use crate::processes::champernowne_digits;

/// A possibly nonstationary process whose shifted block laws
/// `P(X_{i+1}^{i+m} = ·)` are known exactly.
pub trait ShiftedBlocks {
    fn shifted_block_pmf(&self, shift: usize, m: usize) -> Result<Vec<(Vec<u8>, f64)>>;
}

/// Fresh fair coins held for `period` steps, starting at phase 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicCoin {
    pub period: usize,
}

impl ShiftedBlocks for PeriodicCoin {
    fn shifted_block_pmf(&self, shift: usize, m: usize) -> Result<Vec<(Vec<u8>, f64)>> {
        if self.period == 0 {
            return Err(Error::Domain("period must be positive".into()));
        }
        if m == 0 {
            return Ok(vec![(Vec::new(), 1.0)]);
        }
        let first = shift / self.period;
        let coins = (shift + m - 1) / self.period - first + 1;
        let mass = 0.5f64.powi(coins as i32);
        Ok((0..1usize << coins)
            .map(|bits| {
                let block = (shift..shift + m).map(|i| ((bits >> (i / self.period - first)) & 1) as u8).collect();
                (block, mass)
            })
            .collect())
    }
}

/// A single sequence carrying all the mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeterministicSequence(pub Vec<u8>);

impl DeterministicSequence {
    pub fn champernowne(len: usize) -> Self {
        DeterministicSequence(champernowne_digits(len).into_inner())
    }
}

impl ShiftedBlocks for DeterministicSequence {
    fn shifted_block_pmf(&self, shift: usize, m: usize) -> Result<Vec<(Vec<u8>, f64)>> {
        let block = self
            .0
            .get(shift..shift + m)
            .ok_or(Error::InsufficientDepth { need: shift + m, have: self.0.len() })?;
        Ok(vec![(block.to_vec(), 1.0)])
    }
}

impl ShiftedBlocks for ExactModel {
    fn shifted_block_pmf(&self, _shift: usize, m: usize) -> Result<Vec<(Vec<u8>, f64)>> {
        if self.alphabet_len() > 256 {
            return Err(Error::Domain("blocks are reported over at most 256 symbols".into()));
        }
        Ok(self.block_pmf(m).into_iter().map(|(x, p)| (x.into_iter().map(|s| s as u8).collect(), p)).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JensenCheck {
    /// Entropy of the Cesàro average `n⁻¹ Σ_{i<n} P(X_{i+1}^{i+m} = ·)`.
    pub averaged: f64,
    /// `n⁻¹ Σ_{i<n} H(i; m)`.
    pub mean_shifted: f64,
}

impl JensenCheck {
    pub fn gap(&self) -> f64 {
        self.averaged - self.mean_shifted
    }

    pub fn holds(&self) -> bool {
        self.gap() >= -1e-12
    }
}

pub fn check_jensen_bound<P: ShiftedBlocks + ?Sized>(process: &P, m: usize, n: usize) -> Result<JensenCheck> {
    if n == 0 {
        return Err(Error::Domain("the average needs n ≥ 1".into()));
    }
    let mut averaged: HashMap<Vec<u8>, f64> = HashMap::new();
    let mut mean_shifted = 0.0;
    for i in 0..n {
        let pmf = process.shifted_block_pmf(i, m)?;
        mean_shifted += entropy_of(pmf.iter().map(|(_, p)| *p)) / n as f64;
        for (w, p) in pmf {
            *averaged.entry(w).or_default() += p / n as f64;
        }
    }
    Ok(JensenCheck { averaged: entropy_of(averaged.into_values()), mean_shifted })
}
