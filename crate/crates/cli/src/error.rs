use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message}")]
    Usage { flag: String, message: String },

    #[error("{0}")]
    ValidationFailed(String),

    #[error("{0}")]
    Accuracy(String),

    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn usage(flag: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Usage {
            flag: flag.into(),
            message: message.into(),
        }
    }

    pub fn from_library(e: nonstatic_core::Error) -> Self {
        use nonstatic_core::Error as E;
        match e {
            E::InvalidParameter { name, ref reason } => CliError::usage(
                format!("--{}", name.replace('_', "-")),
                format!("{name}: {reason}"),
            ),
            E::Accuracy { .. } => CliError::Accuracy(e.to_string()),
            other => CliError::usage("", other.to_string()),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => 2,
            CliError::ValidationFailed(_) => 3,
            CliError::Accuracy(_) => 4,
            CliError::Io(_) => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage { .. } => "usage",
            CliError::ValidationFailed(_) => "validation",
            CliError::Accuracy(_) => "accuracy",
            CliError::Io(_) => "io",
        }
    }

    /// Machine-readable form written to standard error.
    pub fn to_json(&self) -> String {
        let mut body = json!({
            "kind": self.kind(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        if let CliError::Usage { flag, .. } = self {
            if !flag.is_empty() {
                body["flag"] = json!(flag);
            }
        }
        json!({ "error": body }).to_string()
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
