use std::fmt;

/// Pipeline stage that produced an error during [`crate::reduction::reduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Weights,
    Centers,
    Distance,
    Radii,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Stage::Weights => "weight reduction",
            Stage::Centers => "center fitting",
            Stage::Distance => "center distance",
            Stage::Radii => "radius reduction",
        };
        f.write_str(name)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("infeasible constraints: row {row} violated by {violation:.3e}")]
    Infeasible { row: usize, violation: f64 },

    #[error("singular or ill-conditioned matrix (condition estimate {condition:.3e})")]
    SingularMatrix { condition: f64 },

    #[error("active-set solver did not converge in {0} iterations")]
    NoConvergence(usize),

    #[error("{stage} failed: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn at(self, stage: Stage) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// The stage label, when the error came out of the reduction pipeline.
    pub fn stage(&self) -> Option<Stage> {
        match self {
            Error::Stage { stage, .. } => Some(*stage),
            _ => None,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
