use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("digit {digit} is outside the alphabet {{0,..,{max}}}")]
    InvalidDigit { digit: u32, max: u8 },
    #[error("alphabet maximum must be at least 1")]
    InvalidAlphabet,
    #[error("alphabets differ: M={0} vs M={1}")]
    AlphabetMismatch(u8, u8),
    #[error("period of a periodic sequence must be nonempty")]
    EmptyPeriod,
    #[error("base must be greater than 1")]
    DegenerateBase,
    #[error("base is outside (1, M+1]")]
    BaseOutOfRange,
    #[error("values live over different bases")]
    IncompatibleBases,
    #[error("precision exhausted (limit {0})")]
    PrecisionExhausted(u32),
    #[error("no root of the value equation in (1, M+1]")]
    NoRootInRange,
    #[error("root isolation could not certify a unique root")]
    AmbiguousRoot,
    #[error("polynomial does not have exactly one simple root in the given interval")]
    NotIsolating,
    #[error("sequence is not self-admissible: shift {0} exceeds it")]
    NotSelfAdmissible(usize),
    #[error("pivot digit at position {0} is zero")]
    InvalidPivot(usize),
    #[error("prefix families have no common depth ({0} vs {1})")]
    DepthMismatch(usize, usize),
    #[error("point cloud is empty")]
    EmptyCloud,
    #[error("automaton exceeded {0} states")]
    TooManyStates(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
