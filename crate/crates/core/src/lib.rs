//! Variable-length coding of two-sided processes.
//!
//! The crate covers the whole path from a source process to its coded image:
//!
//! * [`strings`] and [`codes`]: words, windows, table and comma codes, Kraft
//!   sums, prefix/suffix/fix-free checks, greedy and two-sided decoders.
//! * [`processes`]: the Santa Fe process, IID sources and the Champernowne
//!   sequence, with the bit predictors and their well-predictability sets.
//! * [`measures`]: cylinder counts, time averages, expansion rates and the
//!   stationary mean of a coded process, sampled through a length-biased
//!   random phase.
//! * [`energy`]: finite-energy scans and the analytic transfer bounds.
//! * [`entropy`]: block entropies and exact checks of the coding identities.
//! * [`cli`]: the seeded experiment driver behind the `amscode` binary.
//!
//! Entropies are in nats throughout.

pub mod cli;
pub mod codes;
pub mod energy;
pub mod entropy;
pub mod error;
pub mod measures;
pub mod processes;
pub mod rng;
pub mod series;
pub mod strings;

pub use error::{Error, Result};
