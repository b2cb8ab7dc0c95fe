//! The comma code `f(k, z) = b(k) z 2` over `{0, 1, 2}`, where `1 b(k)` is
//! the binary expansion of `k` and `z` is an `A`-bit payload.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Code, CommaCode, KraftValue, PrefixDecoder, Step};
use crate::error::{Error, Result};
use crate::strings::{Alphabet, PrefixFreeLanguage, Word};

pub const TERMINATOR: u8 = 2;

/// A source symbol `(k, z)` with `k ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fact {
    pub k: u128,
    pub z: u32,
}

impl Fact {
    pub fn new(k: u128, z: u32) -> Self {
        Fact { k, z }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.z)
    }
}

fn bit_len(k: u128) -> u32 {
    128 - k.leading_zeros()
}

/// `|f(k, ·)| = ⌊log₂ k⌋ + 1 + A`, by integer bit length.
pub fn codeword_length_conj(k: u128, payload_len: u32) -> Result<usize> {
    if k < 1 {
        return Err(Error::Domain("codeword_length_conj needs k >= 1".into()));
    }
    Ok(bit_len(k) as usize + payload_len as usize)
}

/// `b(k)`: the binary expansion of `k` without its leading one.
pub fn index_bits(k: u128) -> Vec<u8> {
    let n = bit_len(k);
    (0..n.saturating_sub(1)).rev().map(|i| ((k >> i) & 1) as u8).collect()
}

/// Inverse of [`index_bits`]; `None` when the index would overflow `u128`.
pub fn index_from_tail(bits: &[u8]) -> Option<u128> {
    if bits.len() >= 128 || bits.iter().any(|&b| b > 1) {
        return None;
    }
    Some(bits.iter().fold(1u128, |acc, &b| (acc << 1) | b as u128))
}

pub type PayloadMap = Arc<dyn Fn(u128) -> u32 + Send + Sync>;

#[derive(Clone)]
enum Payload {
    Free,
    Fixed(PayloadMap),
}

/// The comma code with payload length `A`. The payload is either free
/// (`z` ranges over all `A`-bit values) or a fixed function `w(k)`.
#[derive(Clone)]
pub struct ConjCode {
    payload_len: u32,
    payload: Payload,
}

impl fmt::Debug for ConjCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConjCode")
            .field("payload_len", &self.payload_len)
            .field("free_payload", &self.is_free_payload())
            .finish()
    }
}

impl ConjCode {
    pub fn new(payload_len: u32) -> Self {
        assert!(payload_len <= 32, "payloads are at most 32 bits");
        ConjCode { payload_len, payload: Payload::Free }
    }

    /// The single-bit code `b(k) z 2`.
    pub fn santa_fe() -> Self {
        Self::new(1)
    }

    pub fn with_payload_map(payload_len: u32, map: PayloadMap) -> Self {
        assert!(payload_len <= 32, "payloads are at most 32 bits");
        ConjCode { payload_len, payload: Payload::Fixed(map) }
    }

    pub fn payload_len(&self) -> u32 {
        self.payload_len
    }

    pub fn is_free_payload(&self) -> bool {
        matches!(self.payload, Payload::Free)
    }

    /// The payload bits `w(k)` of the fixed variant.
    pub fn payload_word(&self, k: u128) -> Option<Vec<u8>> {
        match &self.payload {
            Payload::Free => None,
            Payload::Fixed(map) => Some(self.payload_bits(map(k))),
        }
    }

    fn payload_bits(&self, z: u32) -> Vec<u8> {
        (0..self.payload_len).rev().map(|i| ((z >> i) & 1) as u8).collect()
    }

    fn check(&self, x: &Fact) -> Result<()> {
        let fits = self.payload_len == 32 || (x.z as u64) < (1u64 << self.payload_len);
        let matches_map = match &self.payload {
            Payload::Free => true,
            Payload::Fixed(map) => map(x.k) == x.z,
        };
        if x.k == 0 || !fits || !matches_map {
            return Err(Error::UnknownSymbol(x.to_string()));
        }
        Ok(())
    }

    pub fn codeword_len_of(&self, k: u128) -> Result<usize> {
        codeword_length_conj(k, self.payload_len)
    }

    /// Number of codewords of length `l`, saturating.
    pub fn codewords_of_length(&self, l: usize) -> u128 {
        let a = self.payload_len as usize;
        if l < a + 1 {
            return 0;
        }
        let bits = if self.is_free_payload() { l - 1 } else { l - 1 - a };
        if bits >= 128 {
            u128::MAX
        } else {
            1u128 << bits
        }
    }

    /// Kraft sum truncated at codeword length `max_len`, with the exact
    /// geometric value of the remaining lengths as the tail bound.
    pub fn kraft_sum(&self, max_len: usize) -> KraftValue {
        let a = self.payload_len as i32;
        let scale = if self.is_free_payload() { 0.5 } else { 0.5f64.powi(a + 1) };
        let value: f64 = (a as usize + 1..=max_len).map(|l| scale * (2.0f64 / 3.0).powi(l as i32)).sum();
        let start = max_len.max(a as usize) + 1;
        let tail_bound = scale * (2.0f64 / 3.0).powi(start as i32) * 3.0;
        KraftValue::Truncated { value, tail_bound, max_len }
    }

    fn decode_segment_bits(&self, body: &[u8]) -> Option<Fact> {
        let a = self.payload_len as usize;
        if body.len() < a || body.iter().any(|&b| b > 1) {
            return None;
        }
        let (b, z_bits) = body.split_at(body.len() - a);
        let k = index_from_tail(b)?;
        let z = z_bits.iter().fold(0u32, |acc, &bit| (acc << 1) | bit as u32);
        let x = Fact { k, z };
        self.check(&x).ok().map(|_| x)
    }
}

impl Code for ConjCode {
    type Source = Fact;

    fn target(&self) -> Alphabet {
        Alphabet::TERNARY
    }

    fn write_codeword(&self, x: &Fact, out: &mut Vec<u8>) -> Result<()> {
        self.check(x)?;
        out.extend(index_bits(x.k));
        out.extend(self.payload_bits(x.z));
        out.push(TERMINATOR);
        Ok(())
    }

    fn codeword_len(&self, x: &Fact) -> Result<usize> {
        self.check(x)?;
        self.codeword_len_of(x.k)
    }
}

impl PrefixDecoder for ConjCode {
    fn step(&self, y: &[u8]) -> Step<Fact> {
        match y.iter().position(|&s| s == TERMINATOR) {
            None if y.iter().all(|&s| s < 2) => Step::Incomplete,
            None => Step::Fault,
            Some(t) => match self.decode_segment_bits(&y[..t]) {
                Some(x) => Step::Complete(x, t + 1),
                None => Step::Fault,
            },
        }
    }
}

impl CommaCode for ConjCode {
    fn terminator(&self) -> u8 {
        TERMINATOR
    }

    fn decode_segment(&self, segment: &[u8]) -> Option<Fact> {
        match segment.split_last() {
            Some((&TERMINATOR, body)) if !body.contains(&TERMINATOR) => self.decode_segment_bits(body),
            _ => None,
        }
    }
}

impl PrefixFreeLanguage for ConjCode {
    fn is_codeword(&self, w: &[u8]) -> bool {
        self.decode_segment(w).is_some()
    }

    fn remainder(&self, w: &[u8]) -> Word {
        // Every parse point sits right after a terminator.
        let mut last = 0;
        let mut start = 0;
        for (i, &s) in w.iter().enumerate() {
            if s == TERMINATOR {
                if start == last && self.is_codeword(&w[start..=i]) {
                    last = i + 1;
                }
                start = i + 1;
            }
        }
        Word::from(&w[last..])
    }
}
