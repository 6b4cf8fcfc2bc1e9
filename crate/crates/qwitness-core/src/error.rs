use thiserror::Error;

/// Crate-wide error type. Variants mirror the documented failure modes of the
/// public operations; anything not listed here is a bug, not an error.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node index {index} out of range for {n} nodes")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("duplicate index within tuple {tuple:?}")]
    DuplicateIndex { tuple: Vec<usize> },

    #[error("tuple has {got} indices, expected arity {expected}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("edge set is empty")]
    EmptyEdgeSet,

    #[error("witness needs between 1 and 3 terms, got {got}")]
    BadTermCount { got: usize },

    #[error("witness term {term} has {got} letters, expected {expected}")]
    TermLengthMismatch {
        term: usize,
        expected: usize,
        got: usize,
    },

    #[error("witness letters must be X, Y or Z (term {term}, position {position})")]
    IdentityLetter { term: usize, position: usize },

    #[error("active witness terms repeat letter {letter} at position {position}")]
    RepeatedLetter { position: usize, letter: char },

    #[error("witness has no active terms (all alphas are 0)")]
    NoActiveTerms,

    #[error("term coefficient alpha must be 0 or 1, got {got}")]
    BadAlpha { got: u8 },

    #[error("uniform-letter witness requires two distinct letters")]
    SameLetters,

    #[error("vector families must share one length: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("empty input: {what}")]
    EmptyInput { what: &'static str },

    #[error("{n} qubits exceeds the configured cap of {cap}")]
    QubitCapExceeded { n: usize, cap: usize },

    #[error("dimension mismatch: observable on {observable} qubits, state on {state}")]
    DimensionMismatch { observable: usize, state: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed partition: {0}")]
    InvalidPartition(String),

    #[error("{family} family requires n >= {min}, got {n}")]
    FamilyMinimum {
        family: &'static str,
        min: usize,
        n: usize,
    },

    #[error("eigenvalue iteration did not converge: best {best}, residual {residual}")]
    NonConvergence { best: f64, residual: f64 },

    #[error("observable is not of two-term uniform-letter (W_PQ) form")]
    NotWpqForm,

    #[error("witness term {term} mixes letters; shot-based evaluation needs one basis per term")]
    MixedBasisTerm { term: usize },

    #[error("measurement dataset is missing basis {basis}")]
    MissingBasis { basis: &'static str },

    #[error("unknown basis label {label:?}; expected X, Y or Z")]
    UnknownBasis { label: String },

    #[error("malformed bitstring {bitstring:?} for {n} qubits")]
    MalformedBitstring { bitstring: String, n: usize },

    #[error("negative or non-finite count {count} for bitstring {bitstring:?}")]
    BadCount { bitstring: String, count: f64 },

    #[error("basis {basis} has zero total shots")]
    ZeroShots { basis: &'static str },

    #[error("missing ideal degree for qubit {qubit}")]
    MissingDegree { qubit: usize },

    #[error("degenerate fit: model is identically zero over the sweep")]
    DegenerateFit,

    #[error("need at least {min} sweep points, got {got}")]
    TooFewPoints { min: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
