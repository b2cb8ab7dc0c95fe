use rand::Rng;

use super::LengthLaw;
use crate::codes::Code;
use crate::error::{Error, Result};
use crate::processes::SourceModel;
use crate::strings::TwoSidedWindow;

/// One draw from the stationary mean of a coded process.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSample<S> {
    /// `x̄`, with the length-biased symbol at index 1.
    pub source: TwoSidedWindow<S>,
    /// `N`, uniform on `0..|f(x̄_1)|`.
    pub phase: usize,
    pub first_len: usize,
    /// `ȳ = T^N f^Z(x̄)`, cut to the requested coverage.
    pub coded: TwoSidedWindow<u8>,
    /// Candidate draws of `x̄_1` until acceptance.
    pub attempts: usize,
}

/// Length-biased sampler: a candidate `x_1` is kept with probability
/// `|f(x_1)| / cap`. Candidates longer than the cap are always kept, which
/// under-weights them; [`LengthLaw::mass_above_cap`] bounds that bias.
pub struct PhaseSampler<'a, M, C> {
    model: &'a M,
    code: &'a C,
    cap: usize,
    max_symbols: usize,
}

impl<'a, M, C> PhaseSampler<'a, M, C>
where
    M: SourceModel,
    C: Code<Source = M::Symbol>,
{
    pub fn new(model: &'a M, code: &'a C, law: &LengthLaw) -> Self {
        Self::with_cap(model, code, law.cap())
    }

    pub fn with_cap(model: &'a M, code: &'a C, cap: usize) -> Self {
        PhaseSampler { model, code, cap: cap.max(1), max_symbols: 1 << 24 }
    }

    /// Largest number of source symbols one sample may use.
    pub fn max_symbols(mut self, n: usize) -> Self {
        self.max_symbols = n;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Draws `x̄` and `N`, returning `left` coded symbols before the origin
    /// and `right` after it.
    pub fn sample<R: Rng + ?Sized>(
        &self,
        hidden: &mut M::Hidden,
        left: usize,
        right: usize,
        rng: &mut R,
    ) -> Result<PhaseSample<M::Symbol>> {
        let mut attempts = 0;
        let (first, word) = loop {
            attempts += 1;
            let x = self.model.draw(hidden, rng);
            let w = self.code.codeword(&x)?;
            // Certain acceptance consumes no randomness, so unit-length codes
            // see exactly the stream of the unshifted process.
            if w.len() >= self.cap || rng.gen_range(0..self.cap) < w.len() {
                break (x, w);
            }
        };
        let first_len = word.len();
        let phase = if first_len == 1 { 0 } else { rng.gen_range(0..first_len) };
        let mut used = 1;

        let mut source = TwoSidedWindow::default();
        source.push_right(first);
        let mut coded_right: Vec<u8> = word[phase..].to_vec();
        while coded_right.len() < right {
            used += 1;
            if used > self.max_symbols {
                return Err(Error::WindowTooShort { need: right, have: coded_right.len() });
            }
            let x = self.model.draw(hidden, rng);
            self.code.write_codeword(&x, &mut coded_right)?;
            source.push_right(x);
        }
        coded_right.truncate(right);

        let mut coded_left_out: Vec<u8> = word[..phase].iter().rev().copied().collect();
        while coded_left_out.len() < left {
            used += 1;
            if used > self.max_symbols {
                return Err(Error::WindowTooShort { need: left, have: coded_left_out.len() });
            }
            let x = self.model.draw(hidden, rng);
            coded_left_out.extend(self.code.codeword(&x)?.iter().rev());
            source.push_left(x);
        }
        coded_left_out.truncate(left);
        let mut coded = TwoSidedWindow::default();
        coded.extend_left_outward(coded_left_out);
        coded.extend_right(coded_right);
        Ok(PhaseSample { source, phase, first_len, coded, attempts })
    }
}

/// One-shot convenience around [`PhaseSampler`].
pub fn length_biased_sample<M, C, R>(
    model: &M,
    code: &C,
    law: &LengthLaw,
    hidden: &mut M::Hidden,
    halfwidth: usize,
    rng: &mut R,
) -> Result<PhaseSample<M::Symbol>>
where
    M: SourceModel,
    C: Code<Source = M::Symbol>,
    R: Rng + ?Sized,
{
    PhaseSampler::new(model, code, law).sample(hidden, halfwidth, halfwidth, rng)
}

/// The first `right` symbols of `f*(x_1 x_2 …)`, unshifted.
pub fn sample_coded<M, C, R>(model: &M, code: &C, hidden: &mut M::Hidden, right: usize, rng: &mut R) -> Result<Vec<u8>>
where
    M: SourceModel,
    C: Code<Source = M::Symbol>,
    R: Rng + ?Sized,
{
    let mut y = Vec::with_capacity(right + 8);
    while y.len() < right {
        let x = model.draw(hidden, rng);
        code.write_codeword(&x, &mut y)?;
    }
    y.truncate(right);
    Ok(y)
}
