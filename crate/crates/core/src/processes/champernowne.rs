use crate::strings::Word;

/// Digit at 0-based position `pos` of `123456789101112…`.
pub fn champernowne_digit_at(pos: u64) -> u8 {
    let mut pos = pos;
    let mut width = 1u32;
    let mut count = 9u64;
    let mut first = 1u64;
    while pos >= count * width as u64 {
        pos -= count * width as u64;
        width += 1;
        count *= 10;
        first *= 10;
    }
    let number = first + pos / width as u64;
    let digit = width - 1 - (pos % width as u64) as u32;
    ((number / 10u64.pow(digit)) % 10) as u8
}

/// The first `n` digits of the Champernowne sequence.
pub fn champernowne_digits(n: usize) -> Word {
    ChampernowneSource::new().take(n).collect::<Vec<u8>>().into()
}

/// The Champernowne digits as an iterator, starting at a given position.
#[derive(Debug, Clone, Default)]
pub struct ChampernowneSource {
    number: u64,
    digits: Vec<u8>,
}

impl ChampernowneSource {
    pub fn new() -> Self {
        ChampernowneSource { number: 0, digits: Vec::new() }
    }

    pub fn starting_at(pos: u64) -> Self {
        let mut s = Self::new();
        let mut skip = pos;
        let mut width = 1u64;
        let mut count = 9u64;
        let mut first = 1u64;
        while skip >= count * width {
            skip -= count * width;
            width += 1;
            count *= 10;
            first *= 10;
        }
        s.number = first + skip / width - 1;
        s.refill();
        let offset = (skip % width) as usize;
        s.digits.truncate(s.digits.len() - offset);
        s
    }

    fn refill(&mut self) {
        self.number += 1;
        let mut n = self.number;
        while n > 0 {
            self.digits.push((n % 10) as u8);
            n /= 10;
        }
    }
}

impl Iterator for ChampernowneSource {
    type Item = u8;

    fn next(&mut self) -> Option<u8> {
        if self.digits.is_empty() {
            self.refill();
        }
        self.digits.pop()
    }
}
