use std::collections::HashMap;
use std::fmt::Write as _;
use std::ops::Deref;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{Code, KraftValue, PrefixDecoder, Step};
use crate::error::{Error, Result};
use crate::strings::{Alphabet, PrefixFreeLanguage, Word};

#[derive(Debug, Clone)]
struct Node {
    children: Vec<Option<u32>>,
    terminal: Option<usize>,
}

/// A D-ary trie mapping words to entry indices.
#[derive(Debug, Clone)]
pub(crate) struct Trie {
    nodes: Vec<Node>,
    arity: usize,
}

impl Trie {
    fn new(arity: usize) -> Self {
        Trie { nodes: vec![Node { children: vec![None; arity], terminal: None }], arity }
    }

    fn insert<I: Iterator<Item = u8>>(&mut self, word: I, id: usize) {
        let mut at = 0usize;
        for s in word {
            at = match self.nodes[at].children[s as usize] {
                Some(n) => n as usize,
                None => {
                    self.nodes.push(Node { children: vec![None; self.arity], terminal: None });
                    let n = self.nodes.len() - 1;
                    self.nodes[at].children[s as usize] = Some(n as u32);
                    n
                }
            };
        }
        self.nodes[at].terminal = Some(id);
    }

    /// True iff no stored word is a proper prefix of another.
    fn is_prefix_free(&self) -> bool {
        self.nodes.iter().all(|n| n.terminal.is_none() || n.children.iter().all(Option::is_none))
    }

    /// First stored word along `y` (reading `y` in iteration order).
    pub(crate) fn walk<I: Iterator<Item = u8>>(&self, y: I) -> Step<usize> {
        let mut at = 0usize;
        for (i, s) in y.enumerate() {
            match self.nodes[at].children.get(s as usize).copied().flatten() {
                Some(n) => at = n as usize,
                None => return Step::Fault,
            }
            if let Some(id) = self.nodes[at].terminal {
                return Step::Complete(id, i + 1);
            }
        }
        Step::Incomplete
    }
}

/// A finite code given by an explicit table. Source symbols are the entry
/// indices `0..len()`; each entry also carries a text label.
#[derive(Debug, Clone)]
pub struct TableCode {
    alphabet: Alphabet,
    labels: Vec<String>,
    codewords: Vec<Word>,
    by_label: HashMap<String, usize>,
    forward: Trie,
    backward: Trie,
}

impl TableCode {
    pub fn new(alphabet: Alphabet, entries: Vec<(String, Word)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidCode("a code needs at least one entry".into()));
        }
        let mut by_label = HashMap::new();
        let mut seen = HashMap::new();
        let mut forward = Trie::new(alphabet.size());
        let mut backward = Trie::new(alphabet.size());
        for (i, (label, cw)) in entries.iter().enumerate() {
            if cw.is_empty() {
                return Err(Error::InvalidCode(format!("codeword for {label} is empty")));
            }
            alphabet.check(cw)?;
            if by_label.insert(label.clone(), i).is_some() {
                return Err(Error::InvalidCode(format!("source symbol {label} appears twice")));
            }
            if let Some(j) = seen.insert(cw.clone(), i) {
                return Err(Error::InvalidCode(format!("codeword {cw} is shared by {} and {label}", entries[j].0)));
            }
            forward.insert(cw.iter().copied(), i);
            backward.insert(cw.iter().rev().copied(), i);
        }
        let (labels, codewords) = entries.into_iter().unzip();
        Ok(TableCode { alphabet, labels, codewords, by_label, forward, backward })
    }

    /// Labels are the symbol indices written in decimal.
    pub fn from_codewords(alphabet: Alphabet, codewords: &[&str]) -> Result<Self> {
        let entries = codewords
            .iter()
            .enumerate()
            .map(|(i, c)| Ok((i.to_string(), alphabet.parse(c)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, entries)
    }

    /// `i ↦ i` on a `D`-letter alphabet.
    pub fn identity(alphabet: Alphabet) -> Self {
        let entries = (0..alphabet.size()).map(|i| (i.to_string(), Word::new(vec![i as u8]))).collect();
        Self::new(alphabet, entries).expect("identity code is valid")
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn codewords(&self) -> &[Word] {
        &self.codewords
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, symbol: usize) -> Option<&str> {
        self.labels.get(symbol).map(String::as_str)
    }

    pub fn symbol(&self, label: &str) -> Option<usize> {
        self.by_label.get(label).copied()
    }

    pub fn max_len(&self) -> usize {
        self.codewords.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.codewords.iter().map(|w| w.len()).collect()
    }

    /// Parses the text format: a first line `D`, then `label<TAB>codeword`
    /// lines. Blank lines and lines starting with `#` are ignored.
    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
        let (n, first) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing alphabet size".into() })?;
        let size: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::Parse { line: n + 1, msg: format!("bad alphabet size {first:?}") })?;
        let alphabet = Alphabet::new(size)?;
        let entries = lines
            .map(|(n, l)| {
                let (label, cw) = l
                    .split_once('\t')
                    .ok_or_else(|| Error::Parse { line: n + 1, msg: "expected symbol<TAB>codeword".into() })?;
                let word = alphabet
                    .parse(cw.trim())
                    .map_err(|e| Error::Parse { line: n + 1, msg: e.to_string() })?;
                Ok((label.to_string(), word))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, entries)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.alphabet.size());
        for (l, w) in self.labels.iter().zip(&self.codewords) {
            let _ = writeln!(s, "{l}\t{w}");
        }
        s
    }

    pub fn is_prefix_free(&self) -> bool {
        self.forward.is_prefix_free()
    }

    pub fn is_suffix_free(&self) -> bool {
        self.backward.is_prefix_free()
    }

    /// Longest codeword read backwards from the end of `y`.
    pub(crate) fn step_back(&self, y_rev: impl Iterator<Item = u8>) -> Step<usize> {
        self.backward.walk(y_rev)
    }
}

impl Code for TableCode {
    type Source = usize;

    fn target(&self) -> Alphabet {
        self.alphabet
    }

    fn write_codeword(&self, x: &usize, out: &mut Vec<u8>) -> Result<()> {
        let cw = self.codewords.get(*x).ok_or_else(|| Error::UnknownSymbol(x.to_string()))?;
        out.extend_from_slice(cw);
        Ok(())
    }

    fn codeword_len(&self, x: &usize) -> Result<usize> {
        self.codewords.get(*x).map(|w| w.len()).ok_or_else(|| Error::UnknownSymbol(x.to_string()))
    }
}

impl PrefixDecoder for TableCode {
    fn step(&self, y: &[u8]) -> Step<usize> {
        self.forward.walk(y.iter().copied())
    }
}

/// Membership queries; callers relying on unique parses must check
/// [`TableCode::is_prefix_free`] first.
impl PrefixFreeLanguage for TableCode {
    fn is_codeword(&self, w: &[u8]) -> bool {
        matches!(self.forward.walk(w.iter().copied()), Step::Complete(_, n) if n == w.len())
    }

    fn max_codeword_len(&self) -> Option<usize> {
        Some(self.max_len())
    }
}

/// A table code whose codewords all have the same length.
#[derive(Debug, Clone)]
pub struct FixedLengthCode {
    table: TableCode,
    length: usize,
}

impl FixedLengthCode {
    pub fn new(table: TableCode) -> Result<Self> {
        let length = table.codewords[0].len();
        if table.codewords.iter().any(|w| w.len() != length) {
            return Err(Error::InvalidCode("codewords of a fixed-length code must share one length".into()));
        }
        Ok(FixedLengthCode { table, length })
    }

    pub fn from_codewords(alphabet: Alphabet, codewords: &[&str]) -> Result<Self> {
        Self::new(TableCode::from_codewords(alphabet, codewords)?)
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        Self::new(TableCode::identity(alphabet)).expect("identity code has length one")
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn table(&self) -> &TableCode {
        &self.table
    }
}

impl Deref for FixedLengthCode {
    type Target = TableCode;
    fn deref(&self) -> &TableCode {
        &self.table
    }
}

impl Code for FixedLengthCode {
    type Source = usize;

    fn target(&self) -> Alphabet {
        self.table.alphabet
    }

    fn write_codeword(&self, x: &usize, out: &mut Vec<u8>) -> Result<()> {
        self.table.write_codeword(x, out)
    }

    fn codeword_len(&self, x: &usize) -> Result<usize> {
        self.table.codeword_len(x)
    }
}

impl PrefixDecoder for FixedLengthCode {
    fn step(&self, y: &[u8]) -> Step<usize> {
        self.table.step(y)
    }
}

/// Exact `Σ D^{-|w|}` over the common denominator `D^{max |w|}`.
pub fn kraft_sum(code: &TableCode) -> KraftValue {
    let d = BigInt::from(code.alphabet.size());
    let max = code.max_len();
    let numerator: BigInt = code.codewords.iter().map(|w| num_traits::pow(d.clone(), max - w.len())).sum();
    KraftValue::Exact(BigRational::new(numerator, num_traits::pow(d, max)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Freeness {
    pub prefix_free: bool,
    pub suffix_free: bool,
    pub fix_free: bool,
    pub complete: bool,
}

pub fn check_freeness(code: &TableCode) -> Freeness {
    let prefix_free = code.is_prefix_free();
    let suffix_free = code.is_suffix_free();
    let complete = match kraft_sum(code) {
        KraftValue::Exact(r) => r.is_one(),
        KraftValue::Truncated { .. } => false,
    };
    Freeness { prefix_free, suffix_free, fix_free: prefix_free && suffix_free, complete }
}

impl Freeness {
    pub fn complete_fix_free(&self) -> bool {
        self.fix_free && self.complete
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{decode_prefix_stream, encode_star};
    use proptest::prelude::*;

    pub(crate) const FIXFREE9: [&str; 9] = ["01", "000", "100", "110", "111", "0010", "0011", "1010", "1011"];

    fn b(words: &[&str]) -> TableCode {
        TableCode::from_codewords(Alphabet::BINARY, words).unwrap()
    }

    fn pairwise(words: &[Word]) -> (bool, bool) {
        let mut pf = true;
        let mut sf = true;
        for (i, a) in words.iter().enumerate() {
            for (j, c) in words.iter().enumerate() {
                if i != j {
                    pf &= !c.starts_with(a);
                    sf &= !c.ends_with(a);
                }
            }
        }
        (pf, sf)
    }

    #[test]
    fn kraft_examples() {
        let r = |n: i64, d: i64| KraftValue::Exact(BigRational::new(n.into(), d.into()));
        assert_eq!(kraft_sum(&b(&FIXFREE9)), r(1, 1));
        assert_eq!(kraft_sum(&b(&["0", "10", "11"])), r(1, 1));
        assert_eq!(kraft_sum(&b(&["0", "11"])), r(3, 4));
        assert!(kraft_sum(&b(&FIXFREE9)).is_exactly_one());
    }

    #[test]
    fn freeness_examples() {
        let f = check_freeness(&b(&FIXFREE9));
        assert!(f.fix_free && f.complete);
        assert!(!check_freeness(&b(&["0", "01"])).prefix_free);
        let f = check_freeness(&b(&["01", "11"]));
        assert!(f.fix_free && !f.complete);
        let f = check_freeness(&b(&["0", "10", "11"]));
        assert!(f.prefix_free && !f.suffix_free && f.complete);
    }

    #[test]
    fn table_validation() {
        assert!(TableCode::from_codewords(Alphabet::BINARY, &["0", "0"]).is_err());
        assert!(TableCode::from_codewords(Alphabet::BINARY, &["0", ""]).is_err());
        assert!(TableCode::from_codewords(Alphabet::BINARY, &["2"]).is_err());
        assert!(FixedLengthCode::from_codewords(Alphabet::BINARY, &["00", "1"]).is_err());
    }

    #[test]
    fn text_format_round_trip() {
        let code = b(&FIXFREE9);
        let text = code.to_text();
        assert!(text.starts_with("2\n0\t01\n1\t000\n"));
        let back = TableCode::parse_text(&text).unwrap();
        assert_eq!(back.codewords(), code.codewords());
        assert_eq!(back.to_text(), text);
        assert!(matches!(TableCode::parse_text("2\na 01\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(TableCode::parse_text("x\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn fixed_length_encoding() {
        let code = FixedLengthCode::from_codewords(Alphabet::BINARY, &["00", "01"]).unwrap();
        assert_eq!(encode_star(&code, &[0, 1]).unwrap().to_string(), "0001");
        assert_eq!(encode_star(&code, &[]).unwrap(), Word::empty());
        assert!(encode_star(&code, &[2]).is_err());
    }

    #[test]
    fn decode_fault_position() {
        let code = b(&["00", "01"]);
        let y: Word = "00011".parse().unwrap();
        assert_eq!(decode_prefix_stream(&code, &y), Err(Error::DecodeFault { position: 4 }));
    }

    fn binary_code() -> impl Strategy<Value = Vec<Word>> {
        prop::collection::btree_set(prop::collection::vec(0u8..2, 1..6), 1..33)
            .prop_map(|s| s.into_iter().map(Word::from).collect())
    }

    fn prefix_free_binary_code() -> impl Strategy<Value = Vec<Word>> {
        binary_code().prop_map(|words| {
            let mut kept: Vec<Word> = Vec::new();
            for w in words {
                if !kept.iter().any(|k| w.starts_with(k)) {
                    kept.push(w);
                }
            }
            kept
        })
    }

    proptest! {
        #[test]
        fn trie_flags_match_pairwise(words in binary_code()) {
            let entries = words.iter().enumerate().map(|(i, w)| (i.to_string(), w.clone())).collect();
            let code = TableCode::new(Alphabet::BINARY, entries).unwrap();
            let f = check_freeness(&code);
            prop_assert_eq!((f.prefix_free, f.suffix_free), pairwise(&words));
        }

        #[test]
        fn prefix_decode_inverts_encode(words in prefix_free_binary_code(), xs in prop::collection::vec(0usize..1000, 0..40)) {
            let entries = words.iter().enumerate().map(|(i, w)| (i.to_string(), w.clone())).collect();
            let code = TableCode::new(Alphabet::BINARY, entries).unwrap();
            prop_assert!(code.is_prefix_free());
            let x: Vec<usize> = xs.into_iter().map(|i| i % code.len()).collect();
            let y = encode_star(&code, &x).unwrap();
            let (back, rest) = decode_prefix_stream(&code, &y).unwrap();
            prop_assert_eq!(back, x);
            prop_assert!(rest.is_empty());
        }
    }
}
