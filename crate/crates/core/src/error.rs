use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Lexical or grammatical error in a formula, conditional, or KB file.
    /// Positions are 1-based; `line` is 0 for standalone (single-line) input.
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown atom `{name}` at line {line}, column {column}")]
    UnknownAtom {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("signature declares no atoms")]
    EmptySignature,

    #[error("invalid atom name `{0}`")]
    InvalidAtomName(String),

    #[error("duplicate atom `{0}` in signature")]
    DuplicateAtom(String),

    #[error("signature has {count} atoms, exceeding the cap of {cap}")]
    TooManyAtoms { count: usize, cap: usize },

    #[error("missing `signature:` line")]
    MissingSignature,

    #[error("duplicate rule label `{0}`")]
    DuplicateLabel(String),

    #[error("conditional `{label}` has an unsatisfiable antecedent")]
    UnsatisfiableAntecedent { label: String },

    #[error("signatures do not match")]
    SignatureMismatch,

    #[error("antecedent of `{label}` has infinite rank")]
    InfiniteAntecedent { label: String },

    #[error("formula has infinite rank, cannot conditionalize")]
    InfiniteCondition,

    #[error("ranking maps every world to infinity")]
    AllInfinite,

    #[error("posterior is finite on world `{world}` where the prior is infinite")]
    NotKappaConsistent { world: String },

    #[error("conditional `{label}` cannot be established: {side} set is empty")]
    EmptyWorldSet { label: String, side: &'static str },

    #[error("knowledge base is inconsistent: no tolerance partition exists")]
    InconsistentKb,

    #[error("no constant vector found within the iteration cap")]
    NoConstantsFound,

    #[error("composed rank of world `{world}` is not an integer")]
    NonIntegralRank { world: String },

    #[error("brute-force search space exceeds the guard ({0} candidates)")]
    SearchSpaceExceeded(String),

    #[error("posterior gives conditional `{label}` an antecedent of infinite rank")]
    PresuppositionViolated { label: String },

    #[error("max_literals {given} exceeds the number of atoms {atoms}")]
    TooManyLiterals { given: usize, atoms: usize },

    #[error("invalid ranking function: {0}")]
    InvalidOcf(String),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
