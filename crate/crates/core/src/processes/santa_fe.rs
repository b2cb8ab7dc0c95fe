use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::Rng;

use super::SourceModel;
use crate::codes::Fact;
use crate::error::{Error, Result};
use crate::rng::keyed_bit;
use crate::series::{zeta, ZetaValue};
use crate::strings::TwoSidedWindow;

/// Largest index the sampler emits; draws beyond it are folded into
/// `[2^126, 2^127)`.
pub const K_CEILING: u128 = 1 << 127;

/// The Santa Fe process `X_i = (K_i, Z_{K_i})` with `P(K_i = k) ∝ k^{-α}`.
///
/// `K` is drawn by inverse CDF on a table up to `k_max` and by exact
/// rejection from a discretized Pareto proposal beyond it.
#[derive(Debug, Clone)]
pub struct SantaFeModel {
    alpha: f64,
    zeta: ZetaValue,
    k_max: u64,
    cdf: Arc<Vec<f64>>,
}

impl SantaFeModel {
    pub const DEFAULT_K_MAX: u64 = 1_000_000;

    pub fn new(alpha: f64) -> Result<Self> {
        Self::with_k_max(alpha, Self::DEFAULT_K_MAX)
    }

    pub fn with_k_max(alpha: f64, k_max: u64) -> Result<Self> {
        if !(alpha > 1.0) {
            return Err(Error::Domain(format!("santa fe needs alpha > 1, got {alpha}")));
        }
        if k_max < 1 {
            return Err(Error::Domain("k_max must be at least 1".into()));
        }
        let zeta = zeta(alpha, 1e-12)?;
        let mut acc = 0.0;
        let cdf = (1..=k_max)
            .map(|k| {
                acc += (k as f64).powf(-alpha) / zeta.value;
                acc
            })
            .collect();
        Ok(SantaFeModel { alpha, zeta, k_max, cdf: Arc::new(cdf) })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn zeta(&self) -> &ZetaValue {
        &self.zeta
    }

    pub fn k_max(&self) -> u64 {
        self.k_max
    }

    /// `P(K = k) = k^{-α}/ζ(α)`.
    pub fn pmf(&self, k: u128) -> f64 {
        if k == 0 {
            0.0
        } else {
            (k as f64).powf(-self.alpha) / self.zeta.value
        }
    }

    /// `P(K > k_max)`, the mass handled by the rejection sampler.
    pub fn tail_mass(&self) -> f64 {
        1.0 - self.cdf.last().copied().unwrap_or(0.0)
    }

    /// `P(K ≥ 2^127)`, the mass folded below the ceiling.
    pub fn folded_mass(&self) -> f64 {
        crate::series::power_sum(K_CEILING as f64, f64::INFINITY, self.alpha) / self.zeta.value
    }

    pub fn sample_k<R: Rng + ?Sized>(&self, rng: &mut R) -> u128 {
        let u: f64 = rng.gen();
        if u < *self.cdf.last().expect("table is nonempty") {
            return self.cdf.partition_point(|&c| c <= u) as u128 + 1;
        }
        self.sample_tail(rng)
    }

    fn sample_tail<R: Rng + ?Sized>(&self, rng: &mut R) -> u128 {
        let k0 = (self.k_max + 1) as f64;
        let s = 1.0 - self.alpha;
        // k^{-α} / ∫_k^{k+1} t^{-α} dt, decreasing in k.
        let ratio = |k: f64| s / (k * (s * (1.0 / k).ln_1p()).exp_m1());
        let top = ratio(k0);
        loop {
            let u: f64 = 1.0 - rng.gen::<f64>();
            let y = k0 * u.powf(-1.0 / (self.alpha - 1.0));
            if !(y < K_CEILING as f64) {
                return (1u128 << 126) | (rng.gen::<u128>() >> 2);
            }
            let k = y.floor();
            if rng.gen::<f64>() * top <= ratio(k) {
                let mut k = k as u128;
                if k > (1u128 << 53) {
                    // Below the f64 resolution the proposal is uniform.
                    let spacing = 1u128 << (128 - k.leading_zeros() - 53);
                    k = (k & !(spacing - 1)) | (rng.gen::<u128>() & (spacing - 1));
                }
                return k;
            }
        }
    }
}

/// The bits `Z_k` of one realization, drawn on first use.
///
/// Each bit is a keyed hash of `(seed, k)`, so its value does not depend on
/// the order of queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZRecord {
    seed: u64,
    assigned: BTreeMap<u128, u8>,
}

impl ZRecord {
    pub fn new(seed: u64) -> Self {
        ZRecord { seed, assigned: BTreeMap::new() }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn get(&mut self, k: u128) -> u8 {
        let seed = self.seed;
        *self.assigned.entry(k).or_insert_with(|| keyed_bit(seed, k))
    }

    /// `Z_k` without recording it.
    pub fn peek(&self, k: u128) -> u8 {
        keyed_bit(self.seed, k)
    }

    pub fn assigned(&self) -> &BTreeMap<u128, u8> {
        &self.assigned
    }
}

impl SourceModel for SantaFeModel {
    type Symbol = Fact;
    type Hidden = ZRecord;

    fn realize<R: Rng + ?Sized>(&self, rng: &mut R) -> ZRecord {
        ZRecord::new(rng.gen())
    }

    fn draw<R: Rng + ?Sized>(&self, hidden: &mut ZRecord, rng: &mut R) -> Fact {
        let k = self.sample_k(rng);
        Fact { k, z: hidden.get(k) as u32 }
    }
}

/// A sampled window `x_lo, …, x_hi` with its bits.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessSample {
    pub window: TwoSidedWindow<Fact>,
    pub z_record: ZRecord,
}

impl ProcessSample {
    /// `i<TAB>k<TAB>z` lines in index order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (i, x) in (self.window.lo()..).zip(self.window.concat()) {
            let _ = writeln!(s, "{i}\t{}\t{}", x.k, x.z);
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Vec<(i64, Fact)>> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(n, l)| {
                let bad = |msg: &str| Error::Parse { line: n + 1, msg: msg.to_string() };
                let mut it = l.split('\t');
                let i = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad index"))?;
                let k = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad k"))?;
                let z = it.next().and_then(|v| v.parse().ok()).ok_or_else(|| bad("bad z"))?;
                Ok((i, Fact { k, z }))
            })
            .collect()
    }

    /// True iff every symbol carries its realization's bit.
    pub fn is_consistent(&self) -> bool {
        self.window.concat().iter().all(|x| x.z as u8 == self.z_record.peek(x.k))
    }
}

/// Samples `x_lo, …, x_0 . x_1, …, x_hi`.
pub fn sample_santa_fe<R: Rng + ?Sized>(model: &SantaFeModel, lo: i64, hi: i64, rng: &mut R) -> Result<ProcessSample> {
    if lo > 0 || hi < 0 {
        return Err(Error::Domain(format!("window needs lo <= 0 <= hi, got [{lo}, {hi}]")));
    }
    let mut z_record = model.realize(rng);
    let left = model.draw_n(&mut z_record, (1 - lo) as usize, rng);
    let right = model.draw_n(&mut z_record, hi as usize, rng);
    Ok(ProcessSample { window: TwoSidedWindow::new(left, right), z_record })
}
