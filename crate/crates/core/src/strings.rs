//! Alphabets, words, two-sided windows and the prefix-side string calculus:
//! difference, comparability, remainder and completion sets.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::codes::ConjCode;
use crate::error::{Error, Result};

/// A finite target alphabet `{0, …, D−1}` with `D ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet {
    size: usize,
}

impl Alphabet {
    pub const BINARY: Alphabet = Alphabet { size: 2 };
    pub const TERNARY: Alphabet = Alphabet { size: 3 };
    pub const DECIMAL: Alphabet = Alphabet { size: 10 };

    pub fn new(size: usize) -> Result<Self> {
        if size < 2 {
            return Err(Error::AlphabetTooSmall(size));
        }
        if size > 36 {
            return Err(Error::Domain(format!("alphabets above 36 symbols have no digit form, got {size}")));
        }
        Ok(Alphabet { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn contains(&self, symbol: u8) -> bool {
        (symbol as usize) < self.size
    }

    pub fn check(&self, word: &[u8]) -> Result<()> {
        match word.iter().find(|&&s| !self.contains(s)) {
            Some(&s) => Err(Error::SymbolOutOfRange { symbol: s as usize, size: self.size }),
            None => Ok(()),
        }
    }

    /// Parses a word written with digits `0-9a-z`.
    pub fn parse(&self, text: &str) -> Result<Word> {
        let word: Word = text.parse()?;
        self.check(&word)?;
        Ok(word)
    }
}

/// A finite word over a small alphabet; `Word::default()` is the empty word.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(symbols: Vec<u8>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn into_inner(self) -> Vec<u8> {
        self.0
    }

    pub fn push(&mut self, symbol: u8) {
        self.0.push(symbol);
    }

    pub fn extend_from_slice(&mut self, symbols: &[u8]) {
        self.0.extend_from_slice(symbols);
    }

    pub fn concat(&self, other: &[u8]) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(other);
        Word(v)
    }
}

impl Deref for Word {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl AsRef<[u8]> for Word {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl From<Vec<u8>> for Word {
    fn from(v: Vec<u8>) -> Self {
        Word(v)
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Word(v.to_vec())
    }
}

pub fn digit_char(symbol: u8) -> char {
    std::char::from_digit(symbol as u32, 36).unwrap_or('?')
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.iter().try_for_each(|&s| write!(f, "{}", digit_char(s)))
    }
}

impl FromStr for Word {
    type Err = Error;
    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::Parse { line: 0, msg: format!("{c:?} is not a digit") })
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// A finite window `x_{lo}, …, x_0 . x_1, …, x_{hi}` around the origin.
///
/// The left part is kept reversed so that both sides grow in O(1).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoSidedWindow<S> {
    left_rev: Vec<S>,
    right: Vec<S>,
}

impl<S> Default for TwoSidedWindow<S> {
    fn default() -> Self {
        TwoSidedWindow { left_rev: Vec::new(), right: Vec::new() }
    }
}

impl<S: Clone> TwoSidedWindow<S> {
    /// `left` is given in natural order, its last element being `x_0`.
    pub fn new(left: Vec<S>, right: Vec<S>) -> Self {
        let mut left_rev = left;
        left_rev.reverse();
        TwoSidedWindow { left_rev, right }
    }

    pub fn left(&self) -> Vec<S> {
        self.left_rev.iter().rev().cloned().collect()
    }

    pub fn concat(&self) -> Vec<S> {
        let mut v = self.left();
        v.extend_from_slice(&self.right);
        v
    }

    pub fn map<T, F: FnMut(&S) -> T>(&self, mut f: F) -> TwoSidedWindow<T> {
        TwoSidedWindow {
            left_rev: self.left_rev.iter().map(&mut f).collect(),
            right: self.right.iter().map(f).collect(),
        }
    }
}

impl<S> TwoSidedWindow<S> {
    pub fn right(&self) -> &[S] {
        &self.right
    }

    /// Left part nearest-first: `x_0, x_{-1}, …`.
    pub fn left_outward(&self) -> &[S] {
        &self.left_rev
    }

    pub fn left_len(&self) -> usize {
        self.left_rev.len()
    }

    pub fn right_len(&self) -> usize {
        self.right.len()
    }

    pub fn len(&self) -> usize {
        self.left_rev.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Index of the leftmost symbol, `1 − |left|`.
    pub fn lo(&self) -> i64 {
        1 - self.left_rev.len() as i64
    }

    /// Index of the rightmost symbol, `|right|`.
    pub fn hi(&self) -> i64 {
        self.right.len() as i64
    }

    pub fn get(&self, i: i64) -> Option<&S> {
        if i >= 1 {
            self.right.get((i - 1) as usize)
        } else {
            self.left_rev.get((-i) as usize)
        }
    }

    pub fn push_left(&mut self, s: S) {
        self.left_rev.push(s);
    }

    pub fn push_right(&mut self, s: S) {
        self.right.push(s);
    }

    pub fn extend_right<I: IntoIterator<Item = S>>(&mut self, it: I) {
        self.right.extend(it);
    }

    /// Appends symbols outward on the left, nearest first.
    pub fn extend_left_outward<I: IntoIterator<Item = S>>(&mut self, it: I) {
        self.left_rev.extend(it);
    }
}

/// `w ⊖ z`: the tail `s` if `w = zs`, `λ` if `z = ws`, otherwise `w`.
pub fn string_minus(w: &[u8], z: &[u8]) -> Word {
    if w.len() > z.len() && w.starts_with(z) {
        Word::from(&w[z.len()..])
    } else if z.starts_with(w) {
        Word::empty()
    } else {
        Word::from(w)
    }
}

/// True iff one word is a prefix of the other.
pub fn is_comparable(w: &[u8], z: &[u8]) -> bool {
    w.starts_with(z) || z.starts_with(w)
}

/// A prefix-free set of words that can be queried for membership.
pub trait PrefixFreeLanguage {
    fn is_codeword(&self, w: &[u8]) -> bool;

    /// Longest codeword, if the set is finite.
    fn max_codeword_len(&self) -> Option<usize> {
        None
    }

    /// Remainder of `w`: the suffix after the last parse point reachable
    /// through a concatenation of codewords.
    fn remainder(&self, w: &[u8]) -> Word {
        let n = w.len();
        let mut reachable = vec![false; n + 1];
        reachable[0] = true;
        let mut last = 0;
        for j in 1..=n {
            let start = self.max_codeword_len().map_or(0, |m| j.saturating_sub(m));
            if (start..j).any(|i| reachable[i] && self.is_codeword(&w[i..j])) {
                reachable[j] = true;
                last = j;
            }
        }
        Word::from(&w[last..])
    }
}

/// A finite, nonempty, prefix-free set of nonempty words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixFreeSet {
    words: BTreeSet<Word>,
    max_len: usize,
}

impl PrefixFreeSet {
    pub fn new<I: IntoIterator<Item = Word>>(words: I) -> Result<Self> {
        let words: BTreeSet<Word> = words.into_iter().collect();
        if words.is_empty() {
            return Err(Error::InvalidCode("empty word set".into()));
        }
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidCode("the empty word cannot be a codeword".into()));
        }
        // In lexicographic order a prefix is immediately followed by an extension of it.
        let sorted: Vec<&Word> = words.iter().collect();
        if let Some(pair) = sorted.windows(2).find(|p| p[1].starts_with(p[0])) {
            return Err(Error::NotPrefixFree(pair[0].to_string(), pair[1].to_string()));
        }
        let max_len = words.iter().map(|w| w.len()).max().unwrap_or(0);
        Ok(PrefixFreeSet { words, max_len })
    }

    /// Convenience constructor from digit strings.
    pub fn parse(words: &[&str]) -> Result<Self> {
        Self::new(words.iter().map(|w| w.parse()).collect::<Result<Vec<Word>>>()?)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.words.iter()
    }

    /// `{ s : remainder(w) · s ∈ L }`, in lexicographic order.
    pub fn completion_set(&self, w: &[u8]) -> Vec<Word> {
        let r = self.remainder(w);
        self.words
            .iter()
            .filter(|c| c.starts_with(&r))
            .map(|c| Word::from(&c[r.len()..]))
            .collect()
    }
}

impl PrefixFreeLanguage for PrefixFreeSet {
    fn is_codeword(&self, w: &[u8]) -> bool {
        self.words.contains(&Word::from(w))
    }

    fn max_codeword_len(&self) -> Option<usize> {
        Some(self.max_len)
    }
}

pub fn remainder<L: PrefixFreeLanguage + ?Sized>(w: &[u8], language: &L) -> Word {
    language.remainder(w)
}

/// Length census `a_l = #{ s ∈ L_w : |s| = l }` for `l = 0..=l_max` of the
/// completion set of `w` under a comma code `b(k) w(k) 2`.
///
/// Counts saturate at `u128::MAX`.
pub fn completion_census(w: &[u8], code: &ConjCode, l_max: usize) -> Result<Vec<u128>> {
    Alphabet::TERNARY.check(w)?;
    let r = code.remainder(w);
    let mut census = vec![0u128; l_max + 1];
    if r.contains(&2) {
        return Ok(census);
    }
    let rho = r.len();
    let a = code.payload_len() as usize;
    for (l, slot) in census.iter_mut().enumerate().skip(1) {
        let total = rho + l;
        if total < a + 1 {
            continue;
        }
        let k_bits = total - 1 - a;
        *slot = if code.is_free_payload() {
            // b(k)·z ranges over all binary strings of length total−1.
            pow2_saturating(total - 1 - rho)
        } else if rho <= k_bits {
            pow2_saturating(k_bits - rho)
        } else {
            // b(k) = r[..k_bits] is forced; the payload must continue r.
            let k = crate::codes::conj::index_from_tail(&r[..k_bits]);
            match k.and_then(|k| code.payload_word(k)) {
                Some(p) if p.starts_with(&r[k_bits..]) => 1,
                _ => 0,
            }
        };
    }
    Ok(census)
}

fn pow2_saturating(e: usize) -> u128 {
    if e >= 128 {
        u128::MAX
    } else {
        1u128 << e
    }
}
