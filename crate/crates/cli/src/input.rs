//! Source resolution: grammar specs plus raw digit files.

use std::fs;

use rauzylab_core::word::{PeriodicityClass, WordSource};
use rauzylab_core::FiniteWord;

use crate::CliError;

/// Either a generator description or a raw digit file (`file:<path>`,
/// one digit character per letter; whitespace ignored).
pub enum InputWord {
    Source(WordSource),
    Raw { path: String, word: FiniteWord },
}

impl InputWord {
    pub fn resolve(spec: &str) -> Result<InputWord, CliError> {
        if let Some(path) = spec.strip_prefix("file:") {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
            let digits: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            let word = FiniteWord::from_digit_str(&digits)
                .map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
            if word.is_empty() {
                return Err(CliError::Usage(format!("{path}: empty word")));
            }
            return Ok(InputWord::Raw { path: path.to_string(), word });
        }
        WordSource::parse(spec)
            .map(InputWord::Source)
            .map_err(|e| CliError::Usage(format!("bad source spec: {e}")))
    }

    /// Materializes `horizon` letters; raw files are truncated to their
    /// actual length.
    pub fn materialize(&self, horizon: usize) -> Result<FiniteWord, CliError> {
        match self {
            InputWord::Source(s) => s
                .materialize(horizon)
                .map_err(|e| CliError::Usage(format!("cannot materialize: {e}"))),
            InputWord::Raw { word, .. } => {
                let l = horizon.min(word.len());
                FiniteWord::new(word.letters()[..l].to_vec(), word.alphabet_size())
                    .map_err(|e| CliError::Usage(format!("{e}")))
            }
        }
    }

    pub fn class(&self) -> PeriodicityClass {
        match self {
            InputWord::Source(s) => s.periodicity(),
            InputWord::Raw { .. } => PeriodicityClass::Unknown,
        }
    }

    /// Explicit complexity bound for sources known to be eventually
    /// periodic (pattern lengths; remainder-cycle bound for digit
    /// expansions of rationals).
    pub fn complexity_bound(&self) -> Option<u64> {
        fn of(source: &WordSource) -> Option<u64> {
            match source {
                WordSource::Periodic(p) => Some(p.len() as u64),
                WordSource::EventuallyPeriodic { pre, per } => Some((pre.len() + per.len()) as u64),
                WordSource::RationalBase { q, .. } => Some(q + 64),
                WordSource::Composite { prefix, tail } => of(tail).map(|b| b + prefix.len() as u64),
                _ => None,
            }
        }
        match self {
            InputWord::Source(s) => of(s),
            InputWord::Raw { .. } => None,
        }
    }

    pub fn source(&self) -> Option<&WordSource> {
        match self {
            InputWord::Source(s) => Some(s),
            InputWord::Raw { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            InputWord::Source(s) => s.canonical_spec(),
            InputWord::Raw { path, .. } => format!("file:{path}"),
        }
    }
}
