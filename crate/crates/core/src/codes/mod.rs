//! Codes `f: 𝕏 → 𝕐*`, their extensions to sequences and windows, Kraft
//! sums, freeness checks and decoders.

pub mod conj;
mod comma;
mod table;
mod two_sided;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

pub use comma::{phase_recover, CommaCode, CommaTable, PhaseParse};
pub use conj::{codeword_length_conj, ConjCode, Fact};
pub use table::{check_freeness, kraft_sum, FixedLengthCode, Freeness, TableCode};
pub use two_sided::{decode_two_sided, TwoSidedDecode};

use crate::error::{Error, Result};
use crate::strings::{Alphabet, TwoSidedWindow, Word};

/// A code mapping source symbols to nonempty words over a finite alphabet.
pub trait Code {
    type Source;

    fn target(&self) -> Alphabet;

    /// Appends `f(x)` to `out`; fails for symbols outside the domain.
    fn write_codeword(&self, x: &Self::Source, out: &mut Vec<u8>) -> Result<()>;

    fn codeword(&self, x: &Self::Source) -> Result<Word> {
        let mut v = Vec::new();
        self.write_codeword(x, &mut v)?;
        Ok(Word::new(v))
    }

    fn codeword_len(&self, x: &Self::Source) -> Result<usize> {
        self.codeword(x).map(|w| w.len())
    }
}

/// One step of a greedy prefix parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step<S> {
    /// A codeword for `S` of the given length starts the input.
    Complete(S, usize),
    /// The input is a proper prefix of some codeword (or empty).
    Incomplete,
    /// No codeword starts the input.
    Fault,
}

/// Greedy decoding for prefix-free codes.
pub trait PrefixDecoder: Code {
    fn step(&self, y: &[u8]) -> Step<Self::Source>;
}

/// `f*(x) = f(x_1) f(x_2) … f(x_n)`.
pub fn encode_star<C: Code>(code: &C, x: &[C::Source]) -> Result<Word> {
    let mut out = Vec::new();
    for s in x {
        code.write_codeword(s, &mut out)?;
    }
    Ok(Word::new(out))
}

/// `f^Z` on a finite window: `f*(left) . f*(right)` with the origin
/// between the two halves.
pub fn encode_window<C: Code>(code: &C, x: &TwoSidedWindow<C::Source>) -> Result<TwoSidedWindow<u8>>
where
    C::Source: Clone,
{
    let left = encode_star(code, &x.left())?;
    let right = encode_star(code, x.right())?;
    Ok(TwoSidedWindow::new(left.into_inner(), right.into_inner()))
}

/// Greedy parse of `y`; returns the decoded symbols and the unparsed tail,
/// which is empty or a proper prefix of a codeword.
pub fn decode_prefix_stream<C: PrefixDecoder>(code: &C, y: &[u8]) -> Result<(Vec<C::Source>, Word)> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < y.len() {
        match code.step(&y[pos..]) {
            Step::Complete(x, len) => {
                out.push(x);
                pos += len;
            }
            Step::Incomplete => break,
            Step::Fault => return Err(Error::DecodeFault { position: pos }),
        }
    }
    Ok((out, Word::from(&y[pos..])))
}

/// A Kraft sum `Σ D^{-|w|}`.
#[derive(Debug, Clone, PartialEq)]
pub enum KraftValue {
    Exact(BigRational),
    /// Partial sum over lengths `≤ max_len` and a bound on the rest.
    Truncated { value: f64, tail_bound: f64, max_len: usize },
}

impl KraftValue {
    pub fn is_exactly_one(&self) -> bool {
        matches!(self, KraftValue::Exact(r) if r.is_one())
    }

    pub fn approx(&self) -> f64 {
        match self {
            KraftValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            KraftValue::Truncated { value, .. } => *value,
        }
    }
}

impl std::fmt::Display for KraftValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KraftValue::Exact(r) => write!(f, "{r}"),
            KraftValue::Truncated { value, tail_bound, max_len } => {
                write!(f, "{value} (+ at most {tail_bound:e} beyond length {max_len})")
            }
        }
    }
}
