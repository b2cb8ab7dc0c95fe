use super::{Code, TableCode};
use crate::error::{Error, Result};
use crate::strings::Word;

/// A code `f(x) = g(x) c` whose terminator `c` never occurs inside `g(x)`.
pub trait CommaCode: Code {
    fn terminator(&self) -> u8;

    /// Decodes a full codeword, terminator included.
    fn decode_segment(&self, segment: &[u8]) -> Option<Self::Source>;
}

/// Symbols recovered between terminators, with the partial head (up to and
/// including the first terminator) and tail (after the last one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseParse<S> {
    pub symbols: Vec<(usize, S)>,
    pub head: Word,
    pub tail: Word,
}

impl<S: Clone> PhaseParse<S> {
    /// The parse of `y[shift..]` predicted from the parse of `y`.
    pub fn shifted(&self, shift: usize) -> Vec<(usize, S)> {
        self.symbols.iter().filter(|(o, _)| *o > shift).map(|(o, s)| (o - shift, s.clone())).collect()
    }
}

/// Locates every terminator and decodes each segment between two of them.
pub fn phase_recover<C: CommaCode>(code: &C, y: &[u8]) -> Result<PhaseParse<C::Source>> {
    let c = code.terminator();
    let ends: Vec<usize> = y.iter().enumerate().filter(|(_, &s)| s == c).map(|(i, _)| i).collect();
    let Some((&first, &last)) = ends.first().zip(ends.last()) else {
        return Ok(PhaseParse { symbols: Vec::new(), head: Word::from(y), tail: Word::empty() });
    };
    let symbols = ends
        .windows(2)
        .map(|p| {
            let offset = p[0] + 1;
            code.decode_segment(&y[offset..=p[1]]).map(|x| (offset, x)).ok_or(Error::BadSegment { offset })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseParse { symbols, head: Word::from(&y[..=first]), tail: Word::from(&y[last + 1..]) })
}

/// A table code used as a comma code.
#[derive(Debug, Clone)]
pub struct CommaTable {
    table: TableCode,
    terminator: u8,
}

impl CommaTable {
    pub fn new(table: TableCode, terminator: u8) -> Result<Self> {
        for w in table.codewords() {
            let (last, body) = w.split_last().expect("codewords are nonempty");
            if *last != terminator || body.contains(&terminator) {
                return Err(Error::InvalidCode(format!("{w} is not terminated by {terminator} alone")));
            }
        }
        Ok(CommaTable { table, terminator })
    }

    pub fn table(&self) -> &TableCode {
        &self.table
    }
}

impl Code for CommaTable {
    type Source = usize;

    fn target(&self) -> crate::strings::Alphabet {
        self.table.alphabet()
    }

    fn write_codeword(&self, x: &usize, out: &mut Vec<u8>) -> Result<()> {
        self.table.write_codeword(x, out)
    }
}

impl CommaCode for CommaTable {
    fn terminator(&self) -> u8 {
        self.terminator
    }

    fn decode_segment(&self, segment: &[u8]) -> Option<usize> {
        self.table.codewords().iter().position(|w| **w == *segment)
    }
}
