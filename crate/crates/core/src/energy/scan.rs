use std::fmt::Display;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::codes::Code;
use crate::error::{Error, Result};
use crate::measures::CylinderCounts;

pub const DEFAULT_MIN_SUPPORT: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Pairs whose joint count `#[uv]` falls below this are skipped.
    pub min_support: u64,
    /// Largest `|uv|` scanned; capped by the depth of the counts.
    pub depth: usize,
}

impl ScanOptions {
    pub fn new(depth: usize) -> Self {
        ScanOptions { min_support: DEFAULT_MIN_SUPPORT, depth }
    }

    pub fn min_support(self, min_support: u64) -> Self {
        ScanOptions { min_support, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    /// `μ([uv]) ≤ K c^{|v|} μ([u])`.
    Plain,
    /// `μ([uv]) ≤ K c^{|f*(v)|} μ([u])`.
    Coded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct PairStat {
    ratio: f64,
    stderr: f64,
}

/// Result of a ratio scan: `K̂ = max #[uv]/(#[u] c^{e(v)})` over supported
/// pairs, with its witness. `u` may be empty; `v` never is.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyScan<S> {
    pub flavor: Flavor,
    pub c: f64,
    pub k_hat: f64,
    /// Standard error of the witnessing ratio.
    pub stderr: f64,
    pub witness: Option<(Vec<S>, Vec<S>)>,
    pub options: ScanOptions,
    pairs: Vec<PairStat>,
}

impl<S> EnergyScan<S> {
    pub fn pairs_scanned(&self) -> usize {
        self.pairs.len()
    }

    /// Largest excess of a scanned ratio over `k_bound`, in its own standard
    /// errors; zero when no ratio exceeds the bound.
    pub fn violation_z(&self, k_bound: f64) -> f64 {
        self.pairs
            .iter()
            .filter(|p| p.ratio > k_bound)
            .map(|p| if p.stderr > 0.0 { (p.ratio - k_bound) / p.stderr } else { f64::INFINITY })
            .fold(0.0, f64::max)
    }
}

impl<S: Display> EnergyScan<S> {
    /// Certifies `K = max(K̂, 1)`: any bound with `K < 1` also holds at 1.
    pub fn certificate(&self, code: Option<&str>) -> EnergyCertificate {
        let show = |w: &[S]| w.iter().map(|s| s.to_string()).collect::<String>();
        let (u, v) = self.witness.as_ref().map(|(u, v)| (show(u), show(v))).unwrap_or_default();
        EnergyCertificate {
            flavor: self.flavor,
            code: code.map(str::to_string),
            k: self.k_hat.max(1.0),
            c: self.c,
            witness_u: u,
            witness_v: v,
            support_min: self.options.min_support,
            scan_depth: self.options.depth,
        }
    }
}

/// A claimed `(K, c)` or `(K, c, f)` bound and the scan that supports it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyCertificate {
    pub flavor: Flavor,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(rename = "K")]
    pub k: f64,
    pub c: f64,
    pub witness_u: String,
    pub witness_v: String,
    pub support_min: u64,
    pub scan_depth: usize,
}

impl EnergyCertificate {
    /// Coded energy measures decay per code symbol; a complete prefix-free
    /// code over `D` symbols forces `c ≥ 1/D`.
    pub fn check_kraft_floor(&self, target_alphabet: usize, complete_prefix_free: bool) -> Result<()> {
        if !(self.c > 0.0 && self.c < 1.0) {
            return Err(Error::Domain(format!("c must lie in (0, 1), got {}", self.c)));
        }
        if self.k < 1.0 {
            return Err(Error::Domain(format!("K must be at least 1, got {}", self.k)));
        }
        let floor = 1.0 / target_alphabet as f64;
        if self.flavor == Flavor::Coded && complete_prefix_free && self.c < floor {
            return Err(Error::Domain(format!(
                "c = {} is below the Kraft floor 1/{target_alphabet} of a complete prefix-free code",
                self.c
            )));
        }
        Ok(())
    }
}

fn check_c(c: f64) -> Result<()> {
    if c > 0.0 && c < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("c must lie in (0, 1), got {c}")))
    }
}

fn scan<S, E>(counts: &CylinderCounts<S>, c: f64, options: ScanOptions, flavor: Flavor, exponent: E) -> Result<EnergyScan<S>>
where
    S: Hash + Eq + Clone + Ord,
    E: Fn(&[S]) -> Result<usize>,
{
    check_c(c)?;
    if counts.total() == 0 {
        return Err(Error::Domain("energy scan over empty counts".into()));
    }
    let depth = options.depth.min(counts.max_len());
    let mut pairs = Vec::new();
    let mut best: Option<(f64, f64, usize, Vec<S>)> = None;
    // Sorted order makes the witness of tied ratios reproducible.
    for (w, cw) in counts.sorted() {
        if w.len() > depth || cw < options.min_support {
            continue;
        }
        for split in 0..w.len() {
            let (u, v) = w.split_at(split);
            let cu = counts.count(u) as f64;
            let q = cw as f64 / cu;
            let scale = c.powf(-(exponent(v)? as f64));
            let ratio = q * scale;
            let stderr = (q * (1.0 - q) / cu).max(0.0).sqrt() * scale;
            pairs.push(PairStat { ratio, stderr });
            if best.as_ref().is_none_or(|b| ratio > b.0) {
                best = Some((ratio, stderr, split, w.clone()));
            }
        }
    }
    let (k_hat, stderr, witness) = match best {
        Some((r, se, split, w)) => (r, se, Some((w[..split].to_vec(), w[split..].to_vec()))),
        None => (f64::NAN, f64::NAN, None),
    };
    Ok(EnergyScan { flavor, c, k_hat, stderr, witness, options: ScanOptions { depth, ..options }, pairs })
}

/// Plain energy scan with `e(v) = |v|`.
pub fn empirical_energy_k<S>(counts: &CylinderCounts<S>, c: f64, options: ScanOptions) -> Result<EnergyScan<S>>
where
    S: Hash + Eq + Clone + Ord,
{
    scan(counts, c, options, Flavor::Plain, |v| Ok(v.len()))
}

/// Coded energy scan over source counts with `e(v) = |f*(v)|`.
pub fn gfe_energy_k<C>(counts: &CylinderCounts<C::Source>, code: &C, c: f64, options: ScanOptions) -> Result<EnergyScan<C::Source>>
where
    C: Code,
    C::Source: Hash + Eq + Clone + Ord,
{
    scan(counts, c, options, Flavor::Coded, |v| v.iter().map(|s| code.codeword_len(s)).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{encode_star, TableCode};
    use crate::processes::{IidModel, SourceModel};
    use crate::rng::stream;
    use crate::strings::Alphabet;
    use proptest::prelude::*;

    fn iid_counts(model: &IidModel, depth: usize, windows: usize, seed: u64) -> CylinderCounts<usize> {
        let mut rng = stream(seed, 0, 0);
        let mut counts = CylinderCounts::new(depth);
        for _ in 0..windows {
            counts.add_prefixes(&model.draw_n(&mut (), depth, &mut rng));
        }
        counts
    }

    #[test]
    fn fair_coin_has_unit_energy_at_one_half() {
        let counts = iid_counts(&IidModel::fair_coin(), 6, 50_000, 1);
        let s = empirical_energy_k(&counts, 0.5, ScanOptions::new(6)).unwrap();
        assert!(s.k_hat > 0.9 && s.k_hat < 1.3, "{}", s.k_hat);
        assert!(s.violation_z(1.0) < 5.0);
    }

    #[test]
    fn constant_source_grows_geometrically() {
        let mut counts = CylinderCounts::new(10);
        for _ in 0..100 {
            counts.add_prefixes(&[0u8; 10]);
        }
        for depth in [4, 7, 10] {
            let s = empirical_energy_k(&counts, 0.5, ScanOptions::new(depth)).unwrap();
            assert_eq!(s.k_hat, 2f64.powi(depth as i32));
            let (u, v) = s.witness.unwrap();
            assert!(u.is_empty() && v.len() == depth);
        }
    }

    #[test]
    fn c_outside_unit_interval_is_rejected() {
        let counts = iid_counts(&IidModel::fair_coin(), 2, 10, 1);
        assert!(empirical_energy_k(&counts, 1.0, ScanOptions::new(2)).is_err());
        assert!(empirical_energy_k(&counts, 0.0, ScanOptions::new(2)).is_err());
        assert!(empirical_energy_k(&CylinderCounts::<u8>::new(2), 0.5, ScanOptions::new(2)).is_err());
    }

    #[test]
    fn identity_code_matches_plain_scan() {
        let counts = iid_counts(&IidModel::uniform(3), 4, 5_000, 2);
        let id = TableCode::identity(Alphabet::TERNARY);
        let a = empirical_energy_k(&counts, 0.4, ScanOptions::new(4)).unwrap();
        let b = gfe_energy_k(&counts, &id, 0.4, ScanOptions::new(4)).unwrap();
        assert_eq!(a.k_hat, b.k_hat);
        assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn certificate_json_and_kraft_floor() {
        let cert = EnergyCertificate {
            flavor: Flavor::Coded,
            code: Some("t2".into()),
            k: 1.5,
            c: 0.4,
            witness_u: "0".into(),
            witness_v: "1".into(),
            support_min: 30,
            scan_depth: 6,
        };
        let json = serde_json::to_value(&cert).unwrap();
        for key in ["flavor", "K", "c", "witness_u", "witness_v", "support_min", "scan_depth"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        assert_eq!(json["flavor"], "coded");
        assert!(cert.check_kraft_floor(2, true).is_err());
        assert!(cert.check_kraft_floor(2, false).is_ok());
        assert!(cert.check_kraft_floor(3, true).is_ok());
        assert!(EnergyCertificate { flavor: Flavor::Plain, ..cert }.check_kraft_floor(2, true).is_ok());
    }

    #[test]
    fn coded_counts_match_source_counts() {
        // Windows start at codeword boundaries, so #[f*(w)] = #[w] whenever
        // f*(w) fits the coded depth; ν-ratios then equal μ-ratios.
        let code = TableCode::from_codewords(Alphabet::BINARY, &["0", "10", "11"]).unwrap();
        let model = IidModel::new(vec![0.5, 0.3, 0.2]).unwrap();
        let mut rng = stream(5, 0, 0);
        let depth = 5;
        let mut src = CylinderCounts::new(depth);
        let mut coded = CylinderCounts::new(depth);
        for _ in 0..2_000 {
            let x = model.draw_n(&mut (), depth, &mut rng);
            src.add_prefixes(&x);
            coded.add_prefixes(&encode_star(&code, &x).unwrap());
        }
        let mut checked = 0;
        for (w, cw) in src.sorted() {
            let y = encode_star(&code, &w).unwrap();
            if y.len() <= depth {
                assert_eq!(coded.count(&y), cw, "{w:?}");
                checked += 1;
            }
        }
        assert!(checked > 20);
    }

    proptest! {
        #[test]
        fn prefix_free_coded_bound_dominates_plain(seed in 0u64..1000, c in 0.2f64..0.9) {
            let code = TableCode::from_codewords(Alphabet::BINARY, &["0", "10", "11"]).unwrap();
            let counts = iid_counts(&IidModel::new(vec![0.5, 0.3, 0.2]).unwrap(), 3, 400, seed);
            let opts = ScanOptions::new(3).min_support(5);
            let plain = empirical_energy_k(&counts, c, opts).unwrap();
            let coded = gfe_energy_k(&counts, &code, c, opts).unwrap();
            prop_assert!(coded.k_hat >= plain.k_hat);
            prop_assert!(coded.pairs.iter().zip(&plain.pairs).all(|(a, b)| a.ratio >= b.ratio));
        }

        #[test]
        fn k_hat_is_nonincreasing_in_c(seed in 0u64..1000, c in 0.1f64..0.8, dc in 0.01f64..0.19) {
            let counts = iid_counts(&IidModel::new(vec![0.7, 0.3]).unwrap(), 4, 300, seed);
            let opts = ScanOptions::new(4).min_support(5);
            let lo = empirical_energy_k(&counts, c, opts).unwrap();
            let hi = empirical_energy_k(&counts, c + dc, opts).unwrap();
            prop_assert!(hi.k_hat <= lo.k_hat);
        }
    }
}
