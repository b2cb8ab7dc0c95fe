use std::collections::BTreeMap;

use crate::codes::conj::{index_bits, index_from_tail, TERMINATOR};
use crate::codes::Fact;

/// The "cannot tell" prediction.
pub const BOTH_OR_NEITHER: u8 = 2;

fn verdict(zero: bool, one: bool) -> u8 {
    match (zero, one) {
        (true, false) => 0,
        (false, true) => 1,
        _ => BOTH_OR_NEITHER,
    }
}

/// `s_k(v)`: the bit seen next to `k` in `v`, or 2 if none or both occur.
pub fn predictor_s(k: u128, v: &[Fact]) -> u8 {
    let zero = v.iter().any(|x| x.k == k && x.z == 0);
    let one = v.iter().any(|x| x.k == k && x.z == 1);
    verdict(zero, one)
}

/// `s̄_k(w)`: looks for `2 b(k) 0 2` and `2 b(k) 1 2` as substrings of `w`.
pub fn predictor_bar_s(k: u128, w: &[u8]) -> u8 {
    if k == 0 {
        return BOTH_OR_NEITHER;
    }
    let pattern = |z: u8| {
        let mut p = vec![TERMINATOR];
        p.extend(index_bits(k));
        p.extend([z, TERMINATOR]);
        p
    };
    let occurs = |p: Vec<u8>| w.windows(p.len()).any(|win| win == p.as_slice());
    verdict(occurs(pattern(0)), occurs(pattern(1)))
}

/// `s̄_k(w)` for every `k` that appears between two terminators of `w`,
/// in one pass. Agrees with [`predictor_bar_s`] on every `k`.
pub fn coded_predictions(w: &[u8]) -> BTreeMap<u128, u8> {
    let mut seen: BTreeMap<u128, (bool, bool)> = BTreeMap::new();
    let ends: Vec<usize> = w.iter().enumerate().filter(|(_, &s)| s == TERMINATOR).map(|(i, _)| i).collect();
    for p in ends.windows(2) {
        let body = &w[p[0] + 1..p[1]];
        let Some((&z, b)) = body.split_last() else { continue };
        if z > 1 {
            continue;
        }
        if let Some(k) = index_from_tail(b) {
            let e = seen.entry(k).or_default();
            if z == 0 {
                e.0 = true;
            } else {
                e.1 = true;
            }
        }
    }
    seen.into_iter().map(|(k, (a, b))| (k, verdict(a, b))).collect()
}
