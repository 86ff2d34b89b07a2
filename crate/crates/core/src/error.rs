use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid literal code {0}")]
    InvalidCode(u32),
    #[error("constants have no complement")]
    ConstantComplement,
    #[error("auxiliary variable {0} has no complement")]
    AuxComplement(u16),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("variable {0} has no value in the assignment")]
    MissingVariable(u16),
    #[error("variable universe of {size} exceeds the oracle bound of {bound}")]
    UniverseTooLarge { size: usize, bound: usize },
    #[error("invalid lattice dimension {rows}x{cols}")]
    InvalidDim { rows: usize, cols: usize },
    #[error("{0}")]
    SizeGuard(String),
    #[error("number of variables must be in 1..=25, got {0}")]
    InvalidVarCount(usize),
    #[error("split schedule needs at least 2 terms, got {0}")]
    TooFewTerms(usize),
    #[error("chunk length must be at least 2, got {0}")]
    ChunkTooShort(usize),
    #[error("auxiliary variable code space exhausted")]
    AuxExhausted,
    #[error("plan references undefined auxiliary variable {0}")]
    DanglingAux(u16),
    #[error("term {0} cannot be placed on any lattice of this dimension")]
    Unmappable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
