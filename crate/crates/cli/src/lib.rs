//! Command-line front end for `quasispec`: experiment configuration, the
//! preset catalog, the system-definition text format and CSV output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;
pub mod sysfile;

/// Exit status of the `quasispec` binary.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// Bad flags, configuration, system file or initial data. Exit 1.
    #[error("{0}")]
    Config(String),
    /// Reading or writing files failed. Exit 1.
    #[error("{0}")]
    Io(String),
    /// A non-finite value outside the blow-up detector. Exit 2.
    #[error("numerical fault: {0}")]
    Numerical(String),
    /// `check-system` found a violated assumption. Exit 3.
    #[error("{0}")]
    CheckFailed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::CheckFailed(_) => 3,
        }
    }
}

impl From<quasispec::Error> for CliError {
    fn from(e: quasispec::Error) -> Self {
        use quasispec::Error as E;
        match e {
            E::NonFinite | E::NonFiniteSample { .. } | E::ReferenceBlowUp { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
