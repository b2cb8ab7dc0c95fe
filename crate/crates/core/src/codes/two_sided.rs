use super::{check_freeness, Step, TableCode};
use crate::error::{Error, Result};
use crate::strings::{TwoSidedWindow, Word};

/// Result of two-sided decoding: the recovered source window and the
/// partial codewords left at the two edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSidedDecode {
    pub source: TwoSidedWindow<usize>,
    pub left_rem: Word,
    pub right_rem: Word,
}

/// Decodes a coded window by cutting codewords off as prefixes of the
/// right half and as suffixes of the left half, one cut per side per round.
pub fn decode_two_sided(code: &TableCode, y: &TwoSidedWindow<u8>) -> Result<TwoSidedDecode> {
    if !check_freeness(code).complete_fix_free() {
        return Err(Error::NotCompleteFixFree);
    }
    code.alphabet().check(y.right())?;
    code.alphabet().check(y.left_outward())?;
    let right = y.right();
    let left = y.left_outward();
    let mut source = TwoSidedWindow::default();
    let (mut r, mut l) = (0usize, 0usize);
    let (mut right_open, mut left_open) = (true, true);
    while right_open || left_open {
        if right_open {
            match code.step_right(&right[r..]) {
                Step::Complete(x, n) => {
                    source.push_right(x);
                    r += n;
                }
                _ => right_open = false,
            }
        }
        if left_open {
            match code.step_back(left[l..].iter().copied()) {
                Step::Complete(x, n) => {
                    source.push_left(x);
                    l += n;
                }
                _ => left_open = false,
            }
        }
    }
    let mut left_rem: Vec<u8> = left[l..].to_vec();
    left_rem.reverse();
    Ok(TwoSidedDecode { source, left_rem: Word::new(left_rem), right_rem: Word::from(&right[r..]) })
}

impl TableCode {
    fn step_right(&self, y: &[u8]) -> Step<usize> {
        super::PrefixDecoder::step(self, y)
    }
}
