use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported preset `{0}`")]
    UnsupportedPreset(String),
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartanMatrix(String),
    #[error("non-crystallographic system: {0}")]
    NonCrystallographic(String),
    #[error("generator index {index} out of range for rank {rank}")]
    BadGenerator { index: usize, rank: usize },
    #[error("elements belong to different Coxeter systems")]
    SystemMismatch,
    #[error("table bound to a different Coxeter system")]
    TableMismatch,
    #[error("element cap of {cap} exceeded during enumeration")]
    ResourceLimit { cap: usize },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("operation requires a finite group")]
    InfiniteGroup,
    #[error("element is not a minimal coset representative for the given J")]
    NotMinimalRep,
    #[error("elements are not comparable in Bruhat order")]
    NotComparable,
    #[error("invalid layer range [{lo}, {hi}] for length {len}")]
    BadRange { lo: usize, hi: usize, len: usize },
    #[error("k = {0} is out of range for this element")]
    BadK(usize),
    #[error("generating-function symmetry violated (implementation bug): {0}")]
    SymmetryViolation(String),
    #[error("sequence entry at index {0} is negative")]
    NegativeEntry(usize),
    #[error("no atom-table seed available for k = {0} (seeded for k <= 4)")]
    MissingMTilde(usize),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("corpus is missing required entry `{0}`")]
    CorpusMissingEntry(String),
    #[error("search exhausted without finding a required witness: {0}")]
    SearchExhausted(String),
    #[error("cache file digest `{found}` does not match system digest `{expected}`")]
    DigestMismatch { expected: String, found: String },
    #[error("cache format error at line {line}: {msg}")]
    FormatError { line: usize, msg: String },
    #[error("invalid corpus file: {0}")]
    InvalidCorpus(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
