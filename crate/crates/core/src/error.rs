use std::fmt;

/// Why a bounded search came back empty-handed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NotFoundReason {
    /// The search space was fully explored.
    Exhausted,
    /// The node or trial budget ran out first.
    Budget,
}

impl fmt::Display for NotFoundReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NotFoundReason::Exhausted => f.write_str("exhausted"),
            NotFoundReason::Budget => f.write_str("budget"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("size error: {0}")]
    Size(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("invalid contraction spec: {0}")]
    Spec(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not found ({reason}): {detail}")]
    NotFound {
        reason: NotFoundReason,
        detail: String,
    },
    #[error("target infeasible: minimum degree {actual} is below target {target}")]
    TargetInfeasible { actual: u64, target: u64 },
    #[error("placement failed on template edge {edge}: {detail}")]
    PlacementFailed { edge: usize, detail: String },
    #[error("template matching failed: {0}")]
    TemplateMatchingFailed(String),
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: crate::pipeline::Stage,
        #[source]
        source: Box<Error>,
    },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported schema version: {0}")]
    Schema(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn not_found(reason: NotFoundReason, detail: impl Into<String>) -> Self {
        Error::NotFound {
            reason,
            detail: detail.into(),
        }
    }

    pub(crate) fn at(stage: crate::pipeline::Stage) -> impl FnOnce(Error) -> Error {
        move |e| Error::Stage {
            stage,
            source: Box::new(e),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
