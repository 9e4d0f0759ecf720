use std::fmt;

use minionlab_core::Error;

/// Exit codes, kept in sync with the `--help` footer.
pub mod code {
    pub const OK: i32 = 0;
    pub const VERDICT: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const MALFORMED: i32 = 3;
    pub const CAP: i32 = 4;
    pub const PARAMETER: i32 = 5;
    pub const IO: i32 = 6;
}

pub const EXIT_CODES_HELP: &str = "\
Exit codes:
  0  success
  1  verdict failure (an audit or check found a violation)
  2  usage error (unknown verb, missing or malformed flag)
  3  malformed input file
  4  size or arity cap exceeded
  5  invalid parameter or unsupported input for the verb
  6  I/O error";

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Verdict(String),
    Usage(String),
    Malformed(String),
    Cap(String),
    Parameter(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Verdict(_) => code::VERDICT,
            Failure::Usage(_) => code::USAGE,
            Failure::Malformed(_) => code::MALFORMED,
            Failure::Cap(_) => code::CAP,
            Failure::Parameter(_) => code::PARAMETER,
            Failure::Io(_) => code::IO,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn param(msg: impl Into<String>) -> Self {
        Failure::Parameter(msg.into())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verdict(m) => write!(f, "verdict failed: {m}"),
            Failure::Usage(m) => write!(f, "usage: {m}"),
            Failure::Malformed(m) => write!(f, "malformed input: {m}"),
            Failure::Cap(m) => write!(f, "cap exceeded: {m}"),
            Failure::Parameter(m) => write!(f, "invalid parameter: {m}"),
            Failure::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for Failure {}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Malformed(e.to_string()),
            Error::ArityCap { .. } | Error::SizeCap { .. } => Failure::Cap(e.to_string()),
            Error::InvalidParameter(m) => Failure::Parameter(m),
            _ => Failure::Parameter(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;
