use thiserror::Error;

/// Errors raised by the solver stack.
#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A cell lost admissibility (nonpositive density or temperature).
    #[error("inadmissible state at level {level}, cell {cell}: {detail}")]
    Inadmissible {
        level: usize,
        cell: usize,
        detail: String,
    },

    #[error("state is not native (f_e != 0 or trace of f_2e != 0)")]
    NotNative,

    #[error("config error: {0}")]
    Config(String),

    #[error("missing config key `{0}`")]
    MissingKey(String),

    #[error("snapshot decode error: {0}")]
    Snapshot(String),

    #[error("root finder failed to converge for degree {0}")]
    RootFinding(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SolverError {
    pub(crate) fn inadmissible(cell: usize, detail: impl Into<String>) -> Self {
        SolverError::Inadmissible {
            level: 0,
            cell,
            detail: detail.into(),
        }
    }

    /// Tags an admissibility error with the multigrid level it occurred on.
    pub fn at_level(self, level: usize) -> Self {
        match self {
            SolverError::Inadmissible { cell, detail, .. } => SolverError::Inadmissible {
                level,
                cell,
                detail,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, SolverError>;
