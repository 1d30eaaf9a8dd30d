//! Artifacts: CSV or JSON tables with a provenance header, plus a JSON
//! summary of every asserted check.

use std::io::Write;
use std::path::Path;

use anyhow::Context;
use formsums::report::Table;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Format};

pub const TOOL: &str = "formsums";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Assertion { name: name.into(), passed, detail: detail.into() }
    }
}

/// What a command produced.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub table: Table,
    /// Typed records for `--format json`.
    pub records: Value,
    pub assertions: Vec<Assertion>,
    /// Extra artifacts such as certificates: `(file name, contents)`.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    pub fn new(table: Table, records: Value) -> Self {
        Outcome { table, records, assertions: Vec::new(), files: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

impl ErrorRecord {
    pub fn from_core(e: &formsums::Error) -> Self {
        let debug = format!("{e:?}");
        let kind = debug.split(|c: char| !c.is_alphanumeric()).next().unwrap_or("Error").to_string();
        ErrorRecord { kind, message: e.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub jobs: Option<usize>,
    pub passed: bool,
    pub assertions: Vec<Assertion>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorRecord>,
    pub result: Value,
}

impl Summary {
    pub fn new(config: &ExperimentConfig, outcome: Result<&Outcome, ErrorRecord>) -> Self {
        let (passed, assertions, error, result) = match outcome {
            Ok(o) => (o.passed(), o.assertions.clone(), None, o.records.clone()),
            Err(e) => (false, Vec::new(), Some(e), Value::Null),
        };
        Summary {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: config.command.name().into(),
            config_sha256: config.digest(),
            jobs: config.jobs,
            passed,
            assertions,
            error,
            result,
        }
    }
}

pub fn provenance(config: &ExperimentConfig) -> Vec<(String, String)> {
    vec![
        ("tool".into(), format!("{TOOL} {VERSION}")),
        ("command".into(), config.command.name().into()),
        ("config_sha256".into(), config.digest()),
    ]
}

/// The main artifact in the requested format.
pub fn render(config: &ExperimentConfig, outcome: &Outcome) -> anyhow::Result<String> {
    match config.format.unwrap_or_default() {
        Format::Csv => {
            let mut buf = Vec::new();
            outcome.table.write_csv_with_provenance(&mut buf, &provenance(config))?;
            Ok(String::from_utf8(buf).expect("UTF-8"))
        }
        Format::Json => {
            let header: serde_json::Map<String, Value> =
                provenance(config).into_iter().map(|(k, v)| (k, Value::String(v))).collect();
            let doc = json!({ "provenance": header, "records": outcome.records });
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
    }
}

/// Writes artifacts under `dir`: `<command>.csv|json`, `summary.json` and
/// any extra files.
pub fn write_dir(dir: &Path, config: &ExperimentConfig, outcome: Result<&Outcome, ErrorRecord>) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let summary = Summary::new(config, outcome.clone());
    if let Ok(o) = outcome {
        let ext = match config.format.unwrap_or_default() {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        write_file(&dir.join(format!("{}.{ext}", config.command.name())), &render(config, o)?)?;
        for (name, contents) in &o.files {
            write_file(&dir.join(name), contents)?;
        }
    }
    write_file(&dir.join("summary.json"), &(serde_json::to_string_pretty(&summary)? + "\n"))
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(contents.as_bytes()).with_context(|| format!("writing {}", path.display()))
}
