use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate edge ({from}, {to}, {label})")]
    DuplicateEdge {
        from: String,
        to: String,
        label: String,
    },

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("operands use different alphabets")]
    AlphabetMismatch,

    #[error("operation is undefined for the empty path set")]
    EmptyPathSet,

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("symbol `{0}` already belongs to the alphabet")]
    SymbolCollision(String),

    #[error("matrix is not square: {rows} rows, {cols} columns")]
    NonSquare { rows: usize, cols: usize },

    #[error("enumeration depth {requested} exceeds the cap of {max}")]
    DepthTooLarge { requested: usize, max: usize },

    #[error("index {index} out of range (must be below {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
