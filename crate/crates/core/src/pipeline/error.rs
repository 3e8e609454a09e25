use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Validation,
    MissingPrerequisite,
    Io,
}

/// A failed stage. [`exit_code`](Self::exit_code) maps it onto the CLI's
/// exit status and [`to_json`](Self::to_json) gives the form printed on
/// standard error.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("{}", self.render())]
pub struct PipelineError {
    pub kind: ErrorKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub message: String,
}

impl PipelineError {
    pub fn validation(stage: &str, message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Validation,
            stage: Some(stage.to_string()),
            path: None,
            message: message.into(),
        }
    }

    pub fn missing(path: &Path) -> Self {
        Self {
            kind: ErrorKind::MissingPrerequisite,
            stage: None,
            path: Some(path.to_path_buf()),
            message: format!("required file {} does not exist", path.display()),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self {
            kind: ErrorKind::Io,
            stage: None,
            path: Some(path.to_path_buf()),
            message: e.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::MissingPrerequisite => 2,
            ErrorKind::Validation | ErrorKind::Io => 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error serializes")
    }

    fn render(&self) -> String {
        match (&self.stage, &self.path) {
            (Some(s), _) => format!("{s}: {}", self.message),
            (None, Some(p)) if self.kind == ErrorKind::Io => format!("{}: {}", p.display(), self.message),
            _ => self.message.clone(),
        }
    }
}
