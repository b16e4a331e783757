use zmtforge_core::EngineError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// malformed JSON or polynomial text, with a position
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{stage}: {source}")]
    Engine { stage: String, source: EngineError },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn engine(stage: &str, source: EngineError) -> Self {
        if let EngineError::Parse { line, col, msg } = &source {
            return CliError::Parse { line: *line, col: *col, msg: format!("{stage}: {msg}") };
        }
        CliError::Engine { stage: stage.to_string(), source }
    }

    /// 1 for a failed computation, 2 for bad input, 3 for an exhausted cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Engine { source, .. } if source.is_cap() => 3,
            CliError::Engine { source, .. } if source.is_parse() => 2,
            CliError::Engine { .. } => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        let msg = text.rsplit_once(" at line ").map_or(text.as_str(), |(m, _)| m).to_string();
        CliError::Parse { line: e.line(), col: e.column(), msg }
    }
}
