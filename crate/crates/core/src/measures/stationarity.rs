use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::rng::{domain, stream, StreamRng};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationarityReport {
    pub m: usize,
    pub trials: usize,
    /// Total variation between the block law at shift `k` and at shift 0.
    pub tv_by_shift: Vec<f64>,
    pub max_tv: f64,
    /// `½ Σ_w sqrt((p_0(1−p_0) + p_k(1−p_k))/T)`, maximized over shifts.
    pub noise_scale: f64,
}

impl StationarityReport {
    pub fn within(&self, multiple: f64) -> bool {
        self.max_tv <= multiple * self.noise_scale
    }
}

/// Tabulates the laws of `y_{k+1}^{k+m}` for `k = 0..=max_shift` across
/// `trials` independent windows and compares each with the unshifted law.
pub fn stationarity_check<F>(sample: F, m: usize, max_shift: usize, trials: usize, seed: u64) -> StationarityReport
where
    F: Fn(&mut StreamRng) -> Vec<u8> + Sync,
{
    let windows: Vec<Vec<u8>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let y = sample(&mut stream(seed, domain::TRIAL, t as u64));
            assert!(y.len() >= m + max_shift, "window shorter than m plus the largest shift");
            y
        })
        .collect();
    let tables: Vec<HashMap<&[u8], usize>> = (0..=max_shift)
        .map(|k| {
            let mut h: HashMap<&[u8], usize> = HashMap::new();
            for y in &windows {
                *h.entry(&y[k..k + m]).or_default() += 1;
            }
            h
        })
        .collect();
    let n = trials as f64;
    let mut tv_by_shift = Vec::with_capacity(max_shift + 1);
    let mut noise_scale: f64 = 0.0;
    for table in &tables {
        let mut keys: Vec<&[u8]> = tables[0].keys().chain(table.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        let (mut tv, mut noise) = (0.0, 0.0);
        for w in keys {
            let p0 = *tables[0].get(w).unwrap_or(&0) as f64 / n;
            let pk = *table.get(w).unwrap_or(&0) as f64 / n;
            tv += 0.5 * (p0 - pk).abs();
            noise += 0.5 * ((p0 * (1.0 - p0) + pk * (1.0 - pk)) / n).sqrt();
        }
        tv_by_shift.push(tv);
        noise_scale = noise_scale.max(noise);
    }
    let max_tv = tv_by_shift.iter().copied().fold(0.0, f64::max);
    StationarityReport { m, trials, tv_by_shift, max_tv, noise_scale }
}
