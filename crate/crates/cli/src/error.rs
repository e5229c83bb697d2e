use std::fmt;

use embedmine::miner::MineError;
use embedmine::oracle::OracleError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse(anyhow::Error),
    Overflow(String),
    Mismatch(usize),
    Other(anyhow::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Other(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Overflow(_) => 4,
            CliError::Mismatch(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Parse(e) => write!(f, "{e:#}"),
            CliError::Overflow(m) => f.write_str(m),
            CliError::Mismatch(n) => write!(f, "{n} dataset(s) disagree between engines"),
            CliError::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<MineError> for CliError {
    fn from(e: MineError) -> Self {
        match e {
            MineError::InvalidMinsup | MineError::InvalidMaxSize => CliError::Usage(e.to_string()),
            MineError::CountOverflow { .. } | MineError::Occ(_) => CliError::Overflow(e.to_string()),
            MineError::Pool(_) => CliError::Other(e.into()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Mine(m) => m.into(),
            other => CliError::Other(other.into()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(e.into())
    }
}
