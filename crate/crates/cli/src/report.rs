//! Reports, rendered as text tables or as a `algd-report/1` JSON document.

use algebroid::verdict::Verdict;
use serde_json::{json, Map, Value};

pub const SCHEMA: &str = "algd-report/1";

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        self.rows.push(cells);
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub seed: u64,
    pub truncate: u32,
    pub mode: String,
    pub verdicts: Vec<Verdict>,
    pub tables: Vec<Table>,
    pub caveats: Vec<String>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    fn status(&self) -> &'static str {
        if self.passed() {
            "pass"
        } else {
            "fail"
        }
    }

    pub fn to_json(&self) -> String {
        let verdicts: Vec<Value> = self
            .verdicts
            .iter()
            .map(|v| json!({"name": v.name, "pass": v.pass, "witness": v.witness}))
            .collect();
        let mut tables = Map::new();
        for t in &self.tables {
            tables.insert(t.name.clone(), json!({"columns": t.columns, "rows": t.rows}));
        }
        let doc = json!({
            "schema": SCHEMA,
            "command": self.command,
            "input_digest": self.input_digest,
            "seed": self.seed,
            "truncate": self.truncate,
            "mode": self.mode,
            "verdicts": verdicts,
            "tables": tables,
            "caveats": self.caveats,
            "warnings": self.warnings,
            "status": self.status(),
        });
        let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "algd {}\ninput sha256 {}\nseed {}  truncate {}  mode {}\n",
            self.command, self.input_digest, self.seed, self.truncate, self.mode
        );
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        for t in &self.tables {
            out.push_str(&format!("\n{}\n", t.name));
            out.push_str(&render_table(t));
        }
        if !self.verdicts.is_empty() {
            out.push('\n');
        }
        for v in &self.verdicts {
            out.push_str(&format!("{v}\n"));
        }
        for c in &self.caveats {
            out.push_str(&format!("caveat: {c}\n"));
        }
        out.push_str(&format!("status: {}\n", self.status()));
        out
    }
}

fn render_table(t: &Table) -> String {
    let mut widths: Vec<usize> = t.columns.iter().map(|c| c.chars().count()).collect();
    for row in &t.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| -> String {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}", w = *w))
            .collect();
        format!("  {}\n", parts.join("  ").trim_end())
    };
    let mut out = line(&t.columns);
    for row in &t.rows {
        out.push_str(&line(row));
    }
    out
}
