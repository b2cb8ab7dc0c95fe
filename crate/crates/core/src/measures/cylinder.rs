use std::collections::HashMap;
use std::fmt::Write as _;
use std::hash::Hash;

use crate::strings::{digit_char, Alphabet};

/// Empirical cylinder probabilities: occurrence counts of words over a set
/// of scanned positions. Each position contributes every word of length
/// `1..=max_len` starting there, so counts of all lengths share one total.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderCounts<S: Hash + Eq> {
    counts: HashMap<Vec<S>, u64>,
    total: u64,
    max_len: usize,
    alphabet: Option<Alphabet>,
}

impl<S: Hash + Eq + Clone + Ord> CylinderCounts<S> {
    pub fn new(max_len: usize) -> Self {
        CylinderCounts { counts: HashMap::new(), total: 0, max_len, alphabet: None }
    }

    pub fn with_alphabet(max_len: usize, alphabet: Alphabet) -> Self {
        CylinderCounts { alphabet: Some(alphabet), ..Self::new(max_len) }
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn alphabet(&self) -> Option<Alphabet> {
        self.alphabet
    }

    /// Counts the prefixes of one sampled window as one position.
    pub fn add_prefixes(&mut self, window: &[S]) {
        assert!(window.len() >= self.max_len, "window shorter than the scan depth");
        for l in 1..=self.max_len {
            *self.counts.entry(window[..l].to_vec()).or_default() += 1;
        }
        self.total += 1;
    }

    /// Counts every position `i ≤ |path| − max_len` of one path.
    pub fn add_sliding(&mut self, path: &[S]) {
        if path.len() < self.max_len {
            return;
        }
        for i in 0..=path.len() - self.max_len {
            for l in 1..=self.max_len {
                *self.counts.entry(path[i..i + l].to_vec()).or_default() += 1;
            }
            self.total += 1;
        }
    }

    /// Pure addition; associative and commutative.
    pub fn merge(&mut self, other: &CylinderCounts<S>) {
        assert_eq!(self.max_len, other.max_len, "merging counts of different depths");
        for (w, c) in &other.counts {
            *self.counts.entry(w.clone()).or_default() += c;
        }
        self.total += other.total;
    }

    /// Count of `[w]`; the empty word counts every position.
    pub fn count(&self, w: &[S]) -> u64 {
        if w.is_empty() {
            self.total
        } else {
            self.counts.get(w).copied().unwrap_or(0)
        }
    }

    pub fn freq(&self, w: &[S]) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.count(w) as f64 / self.total as f64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<S>, &u64)> {
        self.counts.iter()
    }

    /// Observed words of length `n` with their counts, sorted.
    pub fn of_length(&self, n: usize) -> Vec<(Vec<S>, u64)> {
        let mut v: Vec<(Vec<S>, u64)> =
            self.counts.iter().filter(|(w, _)| w.len() == n).map(|(w, c)| (w.clone(), *c)).collect();
        v.sort();
        v
    }

    /// All observed words sorted by length, then lexicographically.
    pub fn sorted(&self) -> Vec<(Vec<S>, u64)> {
        let mut v: Vec<(Vec<S>, u64)> = self.counts.iter().map(|(w, c)| (w.clone(), *c)).collect();
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        v
    }
}

impl CylinderCounts<u8> {
    /// `word,count,total,freq` rows in sorted order.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("word,count,total,freq\n");
        for (w, c) in self.sorted() {
            let word: String = w.iter().map(|&d| digit_char(d)).collect();
            let _ = writeln!(s, "{word},{c},{},{}", self.total, crate::cli::fmt_sig(c as f64 / self.total as f64));
        }
        s
    }
}
