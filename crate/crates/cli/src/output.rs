use std::fs;
use std::io::Write;
use std::path::PathBuf;

use codimlab_core::{Interval, ModelDescriptor};
use rug::Float;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Provenance recorded at the top of every CSV.
pub struct Header {
    pub command: String,
    pub model: Option<ModelDescriptor>,
    pub params: Value,
    pub seed: u64,
}

pub fn model_hash(desc: &ModelDescriptor) -> String {
    let canonical = serde_json::to_string(desc).expect("descriptor serializes");
    Sha256::digest(canonical.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl Header {
    fn lines(&self) -> String {
        let mut out = format!("# codimlab {} {}\n", env!("CARGO_PKG_VERSION"), self.command);
        if let Some(m) = &self.model {
            out += &format!(
                "# model sha256={} {}\n",
                model_hash(m),
                serde_json::to_string(m).expect("descriptor serializes")
            );
        }
        out += &format!("# params {}\n", self.params);
        out += &format!("# seed {}\n", self.seed);
        out
    }
}

pub fn float(f: &Float) -> String {
    format!("{:.20}[p{}]", f, f.prec())
}

pub fn interval(i: &Interval) -> String {
    i.to_string()
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn render(&self, header: &Header) -> Result<Vec<u8>, CliError> {
        let mut buf = header.lines().into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let io = |e: csv::Error| CliError::Input(e.to_string());
            w.write_record(&self.columns).map_err(io)?;
            for r in &self.rows {
                w.write_record(r).map_err(io)?;
            }
            w.flush().map_err(|e| CliError::Input(e.to_string()))?;
        }
        Ok(buf)
    }
}

pub struct Sink {
    pub csv: Option<PathBuf>,
    pub json: Option<PathBuf>,
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
}

fn stdout(bytes: &[u8]) -> Result<(), CliError> {
    match std::io::stdout().write_all(bytes) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Input(e.to_string())),
        _ => Ok(()),
    }
}

impl Sink {
    /// CSV to `--csv` or stdout; JSON to `--json` when given.
    pub fn table(&self, header: &Header, table: &Table, json: &Value) -> Result<(), CliError> {
        let bytes = table.render(header)?;
        match &self.csv {
            Some(p) => write_file(p, &bytes)?,
            None => stdout(&bytes)?,
        }
        self.json_file(json)
    }

    /// JSON to stdout and to `--json` when given.
    pub fn record(&self, json: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(json).expect("json renders");
        text.push('\n');
        stdout(text.as_bytes())?;
        self.json_file(json)
    }

    fn json_file(&self, json: &Value) -> Result<(), CliError> {
        if let Some(p) = &self.json {
            let mut text = serde_json::to_string_pretty(json).expect("json renders");
            text.push('\n');
            write_file(p, text.as_bytes())?;
        }
        Ok(())
    }
}
