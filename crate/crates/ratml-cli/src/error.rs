//! Process-level error classes. The exit code is a scripting contract:
//! 0 success, 2 usage, 3 I/O, 4 hypothesis violation, 5 runtime decode
//! failure.

use ratml::channel_sim::SimError;
use ratml::decode::DecodeError;
use ratml::rational_map::MapError;
use ratml::taylor::TaylorError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Hypothesis(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(_) => 3,
            CliError::Hypothesis(_) => 4,
            CliError::Runtime(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Hypothesis(m) | CliError::Runtime(m) => m,
        }
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> CliError {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<TaylorError> for CliError {
    fn from(err: TaylorError) -> CliError {
        match err {
            TaylorError::HypothesisViolated { .. } => CliError::Hypothesis(err.to_string()),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

impl From<DecodeError> for CliError {
    fn from(err: DecodeError) -> CliError {
        match err {
            DecodeError::LengthMismatch { .. } => CliError::Usage(err.to_string()),
            DecodeError::Map(MapError::InvalidEpsilon(_)) => CliError::Usage(err.to_string()),
            DecodeError::Taylor(t) => CliError::from(t),
            _ => CliError::Runtime(err.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(err: SimError) -> CliError {
        match err {
            SimError::Taylor(t) => CliError::from(t),
            SimError::Decode(d) => CliError::from(d),
            SimError::Workers(m) => CliError::Runtime(m),
            _ => CliError::Usage(err.to_string()),
        }
    }
}

impl From<ratml::code::CodeError> for CliError {
    fn from(err: ratml::code::CodeError) -> CliError {
        CliError::Usage(err.to_string())
    }
}
