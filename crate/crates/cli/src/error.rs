use std::io;
use std::path::Path;

use serde_json::json;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Core(#[from] maxent_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Format(_) => "format",
            CliError::Core(e) => match e {
                maxent_core::Error::Layout(_) => "layout",
                maxent_core::Error::Size(_) => "size",
                maxent_core::Error::DimensionCap { .. } => "dimension_cap",
                maxent_core::Error::Invariant(_) => "invariant",
                maxent_core::Error::Domain(_) => "domain",
                maxent_core::Error::UnsupportedDimension(_) => "unsupported_dimension",
                maxent_core::Error::InvalidCorrelation(_) => "invalid_correlation",
                maxent_core::Error::NumericalFailure { .. } => "numerical_failure",
                maxent_core::Error::MaximalityViolated { .. } => "maximality_violated",
            },
        }
    }

    /// `{"error":{"kind":…,"message":…}}` on one line.
    pub fn to_json_line(&self) -> String {
        json!({"error": {"kind": self.kind(), "message": self.to_string()}}).to_string()
    }
}

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
