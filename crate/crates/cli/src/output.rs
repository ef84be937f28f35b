use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Resource(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Library(#[from] borwein::Error),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) | CliError::Io { .. } => 3,
            CliError::Library(borwein::Error::Resource(_)) => 3,
            CliError::Library(_) => 2,
        }
    }
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Violation,
}

impl Outcome {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Pass
        } else {
            Outcome::Violation
        }
    }

    pub fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Violation => 1,
        }
    }
}

/// Output destination: a file when a path is given, standard output otherwise.
pub struct Sink {
    path: Option<PathBuf>,
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|source| CliError::Io { path: p.to_path_buf(), source })?,
            )),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        Ok(Self { path: path.map(Path::to_path_buf), inner })
    }

    fn io_error(&self, source: io::Error) -> CliError {
        CliError::Io { path: self.path.clone().unwrap_or_else(|| PathBuf::from("<stdout>")), source }
    }

    pub fn json<T: Serialize + ?Sized>(mut self, value: &T) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).map_err(|e| self.io_error(e.into()))?;
        writeln!(self.inner, "{text}").map_err(|e| self.io_error(e))?;
        self.inner.flush().map_err(|e| self.io_error(e))
    }

    pub fn csv<R, I>(self, header: &[&str], rows: I) -> Result<(), CliError>
    where
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
        I: IntoIterator<Item = R>,
    {
        let path = self.path.clone();
        let to_err = |e: csv::Error| CliError::Io {
            path: path.clone().unwrap_or_else(|| PathBuf::from("<stdout>")),
            source: io::Error::other(e),
        };
        let mut w = csv::Writer::from_writer(self.inner);
        w.write_record(header).map_err(to_err)?;
        for row in rows {
            w.write_record(row).map_err(to_err)?;
        }
        w.flush().map_err(|e| to_err(e.into()))
    }
}

/// Parses `a..b` (inclusive) or a single value `a`.
pub fn parse_range(text: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Usage(format!("expected a range `a..b` or a single integer, got {text:?}"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(CliError::Usage(format!("empty range {lo}..{hi}")));
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("1..100").unwrap(), (1, 100));
        assert_eq!(parse_range("7").unwrap(), (7, 7));
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("a..3").is_err());
    }
}
