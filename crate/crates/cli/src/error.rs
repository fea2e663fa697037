use qicops_core::engine::EngineError;

/// Process exit statuses. Stable; scripts depend on them.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CAPTURED: i32 = 2;
    pub const ASSERTION: i32 = 3;
    pub const FORFEIT: i32 = 4;
    pub const DIVERGENCE: i32 = 5;
    pub const BAD_SPEC: i32 = 64;
    pub const IO: i32 = 74;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("bad spec: {0}")]
    BadSpec(String),
    #[error("malformed trace line {line}: {what}")]
    Trace { line: usize, what: String },
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BadSpec(_) | CliError::Trace { .. } | CliError::Engine(_) => exit::BAD_SPEC,
            CliError::Io(_) => exit::IO,
        }
    }
}

pub fn bad(what: impl Into<String>) -> CliError {
    CliError::BadSpec(what.into())
}
