use rayon::prelude::*;

use super::Estimate;
use crate::rng::{domain, stream, StreamRng};

/// Time average `n^{-1} Σ_{i<n} 1{x_{i+1}^{i+|u|} = u}` per realization,
/// averaged over realizations.
///
/// `path(rng, len)` must return a path of at least `len` symbols; each
/// realization receives its own stream.
pub fn cesaro_frequency<S, F>(path: F, u: &[S], n_positions: usize, realizations: usize, seed: u64) -> Estimate
where
    S: PartialEq + Sync,
    F: Fn(&mut StreamRng, usize) -> Vec<S> + Sync,
{
    let need = n_positions + u.len().saturating_sub(1);
    let per: Vec<f64> = (0..realizations)
        .into_par_iter()
        .map(|r| {
            let mut rng = stream(seed, domain::REALIZATION, r as u64);
            let x = path(&mut rng, need);
            assert!(x.len() >= need, "path generator returned {} < {need} symbols", x.len());
            let hits = (0..n_positions).filter(|&i| x[i..i + u.len()] == *u).count();
            hits as f64 / n_positions as f64
        })
        .collect();
    Estimate::from_samples(&per)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::{champernowne_digits, IidModel};

    #[test]
    fn fair_coin_pairs() {
        let m = IidModel::fair_coin();
        let est = cesaro_frequency(
            |rng, n| (0..n).map(|_| m.sample(rng) as u8).collect(),
            &[0u8, 1],
            100_000,
            4,
            1,
        );
        assert!((est.value - 0.25).abs() < 0.01);
    }

    #[test]
    fn deterministic_path() {
        let est = cesaro_frequency(|_, n| champernowne_digits(n).into_inner(), &[7u8], 100_000, 1, 0);
        assert!((est.value - 0.1).abs() < 0.02);
        assert_eq!(est.stderr, 0.0);
    }

    #[test]
    fn doubling_n_shrinks_the_gap() {
        let m = IidModel::new(vec![0.3, 0.7]).unwrap();
        let gen = |rng: &mut StreamRng, n: usize| (0..n).map(|_| m.sample(rng) as u8).collect::<Vec<u8>>();
        let small = cesaro_frequency(gen, &[1u8, 1], 20_000, 8, 2);
        let big = cesaro_frequency(gen, &[1u8, 1], 80_000, 8, 3);
        assert!((small.value - 0.49).abs() < 5.0 * small.stderr.max(1e-4));
        assert!(big.stderr < small.stderr);
    }
}
