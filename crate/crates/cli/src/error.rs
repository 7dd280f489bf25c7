use std::fmt;

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Tolerance(String),
    Resource(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Resource(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Tolerance(m) | CliError::Resource(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<fraclat::Error> for CliError {
    fn from(e: fraclat::Error) -> Self {
        use fraclat::Error as E;
        match e {
            E::ToleranceNotMet { .. } | E::QuadratureNonConvergence(_) => CliError::Tolerance(e.to_string()),
            E::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
