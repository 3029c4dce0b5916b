use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Broad category of an [`Error`], used by front ends to pick exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or inconsistent input description.
    Input,
    /// A configurable resource guard tripped.
    Guard,
    /// A mathematical precondition of the requested quantity does not hold.
    Precondition,
    /// A numerical procedure failed to converge or to bracket.
    Numerical,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("control range must contain at least one value")]
    EmptyControlRange,
    #[error("duplicate control value `{0}`")]
    DuplicateControl(String),
    #[error("control value `{0}` is not in the control range")]
    UnknownControl(String),
    #[error("unknown potential `{0}`")]
    UnknownPotential(String),
    #[error("potential `{potential}` is not defined on control value `{control}`")]
    MissingPotentialValue { potential: String, control: String },
    #[error("potential `{potential}` must be strictly positive, found {value} at `{control}`")]
    NonPositivePotential {
        potential: String,
        control: String,
        value: f64,
    },
    #[error("per-symbol weights must be strictly positive, symbol {symbol} has weight {weight}")]
    NonPositiveWeights { symbol: usize, weight: f64 },
    #[error("time step tau must be a positive integer")]
    InvalidTau,
    #[error("partition must have at least one symbol")]
    NoSymbols,
    #[error("control word of symbol {symbol} has length {found}, expected tau = {expected}")]
    ControlWordLength {
        symbol: usize,
        expected: usize,
        found: usize,
    },
    #[error("symbol {0} is outside the alphabet")]
    UnknownSymbol(usize),
    #[error("symbol {0} has no outgoing transition; itineraries must extend forever")]
    SymbolWithoutSuccessor(usize),
    #[error("weights cover {weights} symbols but the language has {language}")]
    AlphabetMismatch { weights: usize, language: usize },
    #[error("system and partition disagree: {0}")]
    SymbolMismatch(String),
    #[error("invalid system description: {0}")]
    InvalidSystem(String),
    #[error("the partition is not invariant; validate it before compiling a language")]
    PartitionNotValid,
    #[error("operation requires a subshift of finite type presentation")]
    NotSft,
    #[error("word {0} is not admissible")]
    NotAdmissible(String),
    #[error("subset to cover is empty")]
    EmptySubset,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("resource guard: {what} needs {needed} but the limit is {limit}")]
    GuardTripped {
        what: &'static str,
        needed: u64,
        limit: u64,
    },
    #[error("root bracket [{lo}, {hi}] does not straddle zero (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    BracketFailure {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    #[error("{what} did not converge after {iterations} iterations")]
    NotConverged {
        what: &'static str,
        iterations: usize,
    },
    #[error("measure is not a probability measure consistent under refinement: {0}")]
    InconsistentMeasure(String),
    #[error("candidate measure charges cylinder {0} outside the target subset")]
    UnsupportedMeasure(String),
    #[error("measure charges the inadmissible word {0}")]
    MeasureSupport(String),
    #[error("weighted cover value is zero; the subset is null at this exponent")]
    NullCover,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        use Error::*;
        match self {
            GuardTripped { .. } => ErrorKind::Guard,
            NonPositivePotential { .. }
            | NonPositiveWeights { .. }
            | PartitionNotValid
            | NotSft
            | EmptySubset
            | NullCover
            | UnsupportedMeasure(_)
            | MeasureSupport(_)
            | SymbolWithoutSuccessor(_) => ErrorKind::Precondition,
            BracketFailure { .. } | NotConverged { .. } => ErrorKind::Numerical,
            _ => ErrorKind::Input,
        }
    }
}
