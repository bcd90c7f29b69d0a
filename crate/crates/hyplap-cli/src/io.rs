//! Output plumbing: atomic file writes and the run-report schema.
//! Reports contain no timing or host data, so a run with a fixed seed is
//! byte-reproducible; wall-clock goes to stderr only.

use hyplap::verify::SuiteReport;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

/// Top-level JSON emitted by `verify`.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub version: &'static str,
    pub suite: String,
    pub seed: u64,
    pub all_passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl RunReport {
    pub fn new(suite: &str, seed: u64, suites: Vec<SuiteReport>) -> Self {
        let all_passed = suites.iter().all(|s| s.all_passed());
        Self {
            schema: 1,
            version: hyplap::VERSION,
            suite: suite.to_string(),
            seed,
            all_passed,
            suites,
        }
    }
}

/// Write bytes to `path` atomically: full content to a temp sibling, then
/// rename. No partial files on failure.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let mut tmp: PathBuf = path.to_path_buf();
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    tmp.set_file_name(format!(".{name}.tmp"));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// RFC-4180-style CSV assembly: CRLF line endings, header row, 17
/// significant digits, '.' decimal separator.
pub struct CsvBuilder {
    buf: String,
}

impl CsvBuilder {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push_str("\r\n");
        Self { buf }
    }

    pub fn row(&mut self, fields: &[CsvField]) {
        let cells: Vec<String> = fields.iter().map(|f| f.render()).collect();
        self.buf.push_str(&cells.join(","));
        self.buf.push_str("\r\n");
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

pub enum CsvField {
    Num(f64),
    Text(String),
}

impl CsvField {
    fn render(&self) -> String {
        match self {
            CsvField::Num(v) => format!("{v:.16e}"),
            CsvField::Text(s) => {
                if s.contains(',') || s.contains('"') || s.contains('\n') {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
        }
    }
}

/// Emit either to `--out` (atomically) or to stdout.
pub fn emit(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => write_atomic(path, content.as_bytes()),
        None => {
            print!("{content}");
            std::io::stdout().flush()
        }
    }
}
