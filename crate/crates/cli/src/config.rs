use std::fmt;
use std::io::Read;

use holostar::{Error, Tolerances};

use crate::Format;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, unreadable input or a malformed document (exit 2).
    Usage(anyhow::Error),
    /// The computation itself failed, e.g. post-selection (exit 1).
    Failure(anyhow::Error),
}

impl CliError {
    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(anyhow::anyhow!("{msg}"))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(e) | CliError::Failure(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidParameter { .. }
            | Error::QubitOutOfRange { .. }
            | Error::DuplicateQubit(..)
            | Error::DimensionMismatch { .. } => CliError::Usage(e.into()),
            other => CliError::Failure(other.into()),
        }
    }
}

pub struct Output {
    pub text: String,
    pub pass: bool,
}

pub struct Context {
    pub format: Format,
    pub tol: Tolerances,
    pub seed: Option<u64>,
}

impl Context {
    pub fn require_json(&self, command: &str) -> Result<(), CliError> {
        match self.format {
            Format::Json => Ok(()),
            Format::Csv => Err(CliError::usage(format!(
                "{command} has no CSV output; use --format json"
            ))),
        }
    }
}

/// Defaults relaxed by the environment scale, then explicit overrides.
pub fn tolerances(scale: Option<&str>, overrides: &[String]) -> Result<Tolerances, CliError> {
    let factor = match scale {
        None => 1.0,
        Some(s) => match s.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 1.0 => v,
            _ => {
                return Err(CliError::usage(format!(
                    "HOLOSTAR_TOLERANCE_SCALE must be a real number ≥ 1, got {s:?}"
                )))
            }
        },
    };
    let mut tol = Tolerances::DEFAULT.scaled(factor);
    for item in overrides {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("--tol expects KEY=VALUE, got {item:?}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v > 0.0)
            .ok_or_else(|| CliError::usage(format!("tolerance {key} needs a positive number")))?;
        if !tol.set(key.trim(), value) {
            return Err(CliError::usage(format!(
                "unknown tolerance key {key:?}; known keys: {}",
                Tolerances::KEYS.join(", ")
            )));
        }
    }
    Ok(tol)
}

pub fn read_input(path: &str) -> Result<String, CliError> {
    let mut text = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
    Ok(text)
}
