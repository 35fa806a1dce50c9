//! Reports and their JSON and CSV renderings.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::Format;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub value: f64,
    pub limit: f64,
}

/// A numeric table. Cells are strings so that integers, labels and floats
/// can share a row; floats go through [`num`].
#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
        w.write_record(&self.header).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Shortest decimal that reads back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            inputs: Value::Object(Map::new()),
            result: Value::Object(Map::new()),
            checks: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        insert(&mut self.inputs, key, v);
        self
    }

    pub fn set(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        insert(&mut self.result, key, v);
        self
    }

    /// Records `value ≤ limit`.
    pub fn check_le(&mut self, name: &str, value: f64, limit: f64) -> &mut Self {
        self.checks.push(Check { name: name.into(), ok: value <= limit, value, limit });
        self
    }

    pub fn check(&mut self, name: &str, ok: bool) -> &mut Self {
        self.checks.push(Check { name: name.into(), ok, value: if ok { 1.0 } else { 0.0 }, limit: 1.0 });
        self
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn to_json(&self) -> String {
        let tables: Map<String, Value> =
            self.tables.iter().map(|t| (t.name.clone(), json!({ "columns": t.header, "rows": t.rows.len() }))).collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "checks": self.checks,
            "tables": tables,
            "ok": self.ok(),
        });
        // serde_json maps are ordered by key, so the output is canonical
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn file_stem(&self) -> String {
        self.command.replace('-', "_")
    }

    /// Write to `dir` (files) or to `out` (stdout rendering).
    pub fn emit(&self, dir: Option<&Path>, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let stem = self.file_stem();
                if format != Format::Csv {
                    fs::write(dir.join(format!("{stem}.json")), self.to_json())?;
                }
                if format != Format::Json {
                    for t in &self.tables {
                        fs::write(dir.join(format!("{stem}_{}.csv", t.name)), t.to_csv()?)?;
                    }
                }
            }
            None => match format {
                Format::Json => out.write_all(self.to_json().as_bytes())?,
                Format::Csv => {
                    let t = self
                        .tables
                        .first()
                        .ok_or_else(|| CliError::Usage(format!("{} produces no table; use --format json", self.command)))?;
                    out.write_all(t.to_csv()?.as_bytes())?;
                }
                Format::Both => return Err(CliError::Usage("--format both needs an output directory".into())),
            },
        }
        Ok(())
    }
}

fn insert(target: &mut Value, key: &str, v: impl Serialize) {
    let v = serde_json::to_value(v).expect("value serializes");
    target.as_object_mut().expect("object").insert(key.into(), v);
}
