use std::fmt;
use std::process::ExitCode;

use krein_core::Error;

/// Outcome classes that map one-to-one onto exit codes.
#[derive(Debug)]
pub enum Failure {
    /// A verification failed or was inconclusive.
    Verification(String),
    /// A theorem hypothesis does not hold, e.g. a divergent Krein integral.
    Precondition(String),
    /// Bad input, unreadable spec, or an unwritable output.
    Input(String),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Verification(_) => 1,
            Failure::Precondition(_) => 2,
            Failure::Input(_) => 3,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) => write!(f, "verification failed: {m}"),
            Failure::Precondition(m) => write!(f, "precondition not met: {m}"),
            Failure::Input(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::SupportMismatch { .. } => {
                Failure::Precondition(e.to_string())
            }
            Error::Spec(_) | Error::Domain(_) => Failure::Input(e.to_string()),
            Error::Accuracy { .. } | Error::Unsupported(_) => Failure::Verification(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

pub type Outcome<T = ()> = Result<T, Failure>;
