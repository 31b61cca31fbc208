use std::fmt;
use std::process::ExitCode;

use tubegeo::Error;

/// Reasons a run stops short of exit code 0.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Solver(String),
    /// The report was written but the target was not reached.
    Budget(String),
    /// The report was written but a check failed.
    Property(String),
}

impl Failure {
    pub fn code(&self) -> ExitCode {
        ExitCode::from(match self {
            Failure::Config(_) => 1,
            Failure::Solver(_) => 2,
            Failure::Budget(_) => 3,
            Failure::Property(_) => 4,
        })
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {}", m),
            Failure::Solver(m) => write!(f, "solver error: {}", m),
            Failure::Budget(m) => write!(f, "budget exhausted: {}", m),
            Failure::Property(m) => write!(f, "property check failed: {}", m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_) | Error::Domain(_) | Error::Parse(_) | Error::InconsistentDomain(_) | Error::Unsupported(_) => {
                Failure::Config(e.to_string())
            }
            Error::Numeric { .. } | Error::DegenerateParams(_) => Failure::Solver(e.to_string()),
        }
    }
}
