use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("generator matrix for dimension {dim} is singular over GF(2)")]
    SingularMatrix { dim: usize },

    #[error("direction numbers cover {have} dimensions, {want} requested")]
    MissingDimension { have: usize, want: usize },

    #[error("depth {depth} exceeds the supported maximum of {max}")]
    DepthOutOfRange { depth: u32, max: u32 },

    #[error("no grammar satisfying the constraints found in {attempts} attempts; alphabet of {symbols} is too small")]
    ConstraintsUnsatisfied { attempts: usize, symbols: usize },

    #[error("scrambling-data system is inconsistent at tree level {level}, prefix {prefix}")]
    Infeasible { level: u32, prefix: u64 },

    #[error("pixel constraint system lost rank on a full-rank request; generator matrices are unsuitable")]
    DegenerateConstraints,

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
