//! IO, file formats and the batch front-end over `rauzylab-core`.
//!
//! The core crate is allocation-only; everything that touches files,
//! environment variables or serialization lives here. All outputs are
//! deterministic: identical invocations produce byte-identical artifacts.

pub mod commands;
pub mod export;
pub mod input;

use std::fmt;

/// Exit-code contract: 0 success, 1 usage/parse, 2 assertion violation,
/// 3 horizon insufficiency.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Violations(usize),
    Horizon(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Violations(_) => 2,
            CliError::Horizon(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Violations(n) => write!(f, "{n} check(s) violated"),
            CliError::Horizon(m) => write!(f, "{m}"),
        }
    }
}

/// Working precision for square roots and reported reals, overridable via
/// the RAUZYLAB_PRECISION environment variable.
pub fn precision_digits() -> u32 {
    std::env::var("RAUZYLAB_PRECISION")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&d| d >= 10 && d <= 10_000)
        .unwrap_or(50)
}
