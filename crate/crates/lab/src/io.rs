//! Input readers and JSON output.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use gse_core::gof::CountVector;
use gse_core::{Distribution, OrderSet};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

/// Failures of the command layer, split by exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or inconsistent input (exit 2).
    #[error("{0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{}: line {line}: {msg}", path.display())]
    Csv { path: PathBuf, line: u64, msg: String },
    #[error(transparent)]
    Core(#[from] gse_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use gse_core::Error as E;
        match self {
            CliError::Core(
                E::NoConvergence { .. }
                | E::RankDeficient { .. }
                | E::BoundaryExit { .. }
                | E::CollisionNotFound { .. }
                | E::SamplingFailed { .. },
            ) => 1,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Comma-separated orders; duplicates are rejected, input order is free.
pub fn parse_orders(s: &str) -> Result<OrderSet, String> {
    let values = parse_floats(s)?;
    OrderSet::from_unordered(values).map_err(|e| e.to_string())
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("'{t}' is not a number")))
        .collect()
}

pub fn parse_counts_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(str::trim)
        .map(|t| match t.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("'{t}' is not a positive integer")),
            Ok(n) => Ok(n),
        })
        .collect()
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    serde_json::from_str(&read(path)?).map_err(|source| CliError::Json { path: path.into(), source })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ProbsFile {
    Bare(Vec<f64>),
    Wrapped { probs: Vec<f64> },
}

/// `{"probs": [...]}` or a bare array.
pub fn read_probs(path: &Path) -> CliResult<Distribution> {
    let probs = match read_json::<ProbsFile>(path)? {
        ProbsFile::Bare(v) | ProbsFile::Wrapped { probs: v } => v,
    };
    Ok(Distribution::new(probs)?)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CountsFile {
    Bare(Vec<u64>),
    Wrapped { counts: Vec<u64> },
}

/// Counts from JSON (`.json`) or CSV: one count per line, or `label,count`
/// rows summed per label. A leading row whose count does not parse is taken
/// as a header.
pub fn read_counts(path: &Path) -> CliResult<CountVector> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        let counts = match read_json::<CountsFile>(path)? {
            CountsFile::Bare(v) | CountsFile::Wrapped { counts: v } => v,
        };
        return Ok(CountVector::new(counts)?);
    }
    let text = read(path)?;
    let csv_err = |line: u64, msg: String| CliError::Csv { path: path.into(), line, msg };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut plain = Vec::new();
    let mut labeled: BTreeMap<String, u64> = BTreeMap::new();
    let mut width = None;
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(i as u64 + 1, e.to_string()))?;
        let line = rec.position().map_or(i as u64 + 1, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let field = match rec.len() {
            1 => &rec[0],
            2 => &rec[1],
            n => return Err(csv_err(line, format!("expected 1 or 2 fields, found {n}"))),
        };
        let count = match field.parse::<u64>() {
            Ok(c) => c,
            Err(_) if width.is_none() && plain.is_empty() && labeled.is_empty() => continue,
            Err(_) => return Err(csv_err(line, format!("count '{field}' is not a nonnegative integer"))),
        };
        match *width.get_or_insert(rec.len()) {
            w if w != rec.len() => return Err(csv_err(line, "mixed 1- and 2-field rows".into())),
            1 => plain.push(count),
            _ => *labeled.entry(rec[0].to_string()).or_default() += count,
        }
    }
    let counts = if labeled.is_empty() { plain } else { labeled.into_values().collect() };
    Ok(CountVector::new(counts)?)
}

/// Pretty JSON with a trailing newline; floats use the shortest text that
/// parses back to the same value.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source }),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Write { path: "<stdout>".into(), source })
        }
    }
}
