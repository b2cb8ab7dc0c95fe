use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("symbol {symbol} out of range for alphabet of size {size}")]
    SymbolOutOfRange { symbol: usize, size: usize },
    #[error("word set is not prefix-free: {0:?} is a prefix of {1:?}")]
    NotPrefixFree(String, String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("source symbol {0} is not in the domain of the code")]
    UnknownSymbol(String),
    #[error("no codeword matches the input at position {position}")]
    DecodeFault { position: usize },
    #[error("segment at offset {offset} is not a codeword")]
    BadSegment { offset: usize },
    #[error("two-sided decoding requires a complete fix-free code")]
    NotCompleteFixFree,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("parameter out of range: {0}")]
    Domain(String),
    #[error("window too short: need {need} symbols, have {have}")]
    WindowTooShort { need: usize, have: usize },
    #[error("enumeration depth {have} is too small, need at least {need}")]
    InsufficientDepth { need: usize, have: usize },
    #[error("estimators disagree: {a} vs {b} ({z:.2} joint standard errors)")]
    EstimatorDisagreement { a: f64, b: f64, z: f64 },
    #[error("certificates do not share (K, c)")]
    HeterogeneousCertificates,
    #[error("expansion rate is not constant across ergodic components: {0} vs {1}")]
    NonConstantExpansion(f64, f64),
    #[error("table truncation {0} is too small for the requested set")]
    TableTooSmall(u128),
    #[error("{trials} trials cannot resolve a confidence radius of {radius}")]
    TooFewTrials { trials: usize, radius: f64 },
    #[error("entropy table is not monotone at n = {0}")]
    NonMonotone(usize),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
