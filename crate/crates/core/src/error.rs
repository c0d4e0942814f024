use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate basis: row {row} is linearly dependent on the previous rows")]
    DegenerateBasis { row: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("refused: {0}")]
    Intractable(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("parameters too small: {0}")]
    ParamsTooSmall(String),
    #[error("noise budget exceeded")]
    BudgetExceeded,
}
