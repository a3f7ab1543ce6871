//! File formats and command-line front end for `smp-core`.

pub mod cli;
pub mod csv_io;
pub mod spec_io;

use std::fmt;

/// Failures surfaced by the toolkit, each tied to a process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum ToolError {
    /// Bad flags, documents or tables (exit 2).
    Input(String),
    /// Unreadable or unwritable files (exit 2).
    Io(String),
    /// A precondition of the analysis does not hold (exit 3).
    Refused(String),
    /// The numerics broke down (exit 4).
    Numerical(String),
}

impl ToolError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Input(_) | ToolError::Io(_) => 2,
            ToolError::Refused(_) => 3,
            ToolError::Numerical(_) => 4,
        }
    }
}

impl fmt::Display for ToolError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToolError::Input(m) => write!(f, "input error: {m}"),
            ToolError::Io(m) => write!(f, "io error: {m}"),
            ToolError::Refused(m) => write!(f, "{m}"),
            ToolError::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl std::error::Error for ToolError {}

impl From<smp_core::Error> for ToolError {
    fn from(e: smp_core::Error) -> Self {
        use smp_core::Error as E;
        let msg = e.to_string();
        match e {
            E::DimensionMismatch { .. } | E::InvalidInput(_) | E::Unsupported(_) => ToolError::Input(msg),
            E::PositivityViolation(_) | E::Precondition(_) | E::Refused(_) => ToolError::Refused(msg),
            E::Numerical(_) => ToolError::Numerical(msg),
        }
    }
}

impl From<std::io::Error> for ToolError {
    fn from(e: std::io::Error) -> Self {
        ToolError::Io(e.to_string())
    }
}
