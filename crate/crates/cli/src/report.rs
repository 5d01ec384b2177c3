//! Report documents: one JSON object per run, or TSV tables for quick inspection.

use gstab_core::stability::{Outcome, Verdict};
use gstab_core::ExtInt;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: u64 = 1;

/// Finite values as numbers, infinities as the strings `"inf"` and `"-inf"`.
pub fn ext(v: ExtInt) -> Value {
    match v {
        ExtInt::Finite(x) => json!(x),
        ExtInt::PosInf => json!("inf"),
        ExtInt::NegInf => json!("-inf"),
    }
}

pub fn opt_ext(v: Option<ExtInt>) -> Value {
    v.map_or(Value::Null, ext)
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn outcome_tag(o: &Outcome) -> &'static str {
    match o {
        Outcome::Pass => "pass",
        Outcome::Fail { .. } => "fail",
        Outcome::Inconclusive => "inconclusive",
        Outcome::NotApplicable => "not_applicable",
    }
}

pub fn verdict_json(v: &Verdict) -> Value {
    let degree = match v.outcome {
        Outcome::Fail { degree } => json!(degree),
        _ => Value::Null,
    };
    json!({
        "check": v.check.tag(),
        "outcome": outcome_tag(&v.outcome),
        "window": [v.window.lo, v.window.hi],
        "degree": degree,
        "detail": v.detail,
    })
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table { name: name.into(), header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, cells: &[Value]) {
        self.rows.push(cells.iter().map(cell).collect());
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: Vec<String>,
    pub input_hash: String,
    /// Command-specific fields, merged into the top level of the document.
    pub result: Map<String, Value>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
    pub scope: Vec<String>,
    pub timing_ms: u128,
}

impl Report {
    pub fn new(command: Vec<String>, input_hash: String) -> Report {
        Report { command, input_hash, result: Map::new(), tables: Vec::new(), verdicts: Vec::new(), scope: Vec::new(), timing_ms: 0 }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        self.result.insert(key.into(), v);
    }

    pub fn any_failed(&self) -> bool {
        self.verdicts.iter().any(|v| v.failed())
    }

    pub fn to_json(&self) -> Value {
        let mut doc = self.result.clone();
        doc.insert("schema_version".into(), json!(SCHEMA_VERSION));
        doc.insert("command".into(), json!(self.command));
        doc.insert("input_hash".into(), json!(self.input_hash));
        doc.insert("verdicts".into(), Value::from(self.verdicts.iter().map(verdict_json).collect::<Vec<_>>()));
        doc.insert("scope".into(), json!(self.scope));
        doc.insert("timing_ms".into(), json!(self.timing_ms as u64));
        Value::Object(doc)
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json");
        s.push('\n');
        s
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# gstab {}\tschema {}\tinput {}\n", self.command.join(" "), SCHEMA_VERSION, self.input_hash));
        for t in &self.tables {
            out.push_str(&format!("## {}\n{}\n", t.name, t.header.join("\t")));
            for r in &t.rows {
                out.push_str(&r.join("\t"));
                out.push('\n');
            }
        }
        if !self.verdicts.is_empty() {
            out.push_str("## verdicts\ncheck\toutcome\twindow\tdegree\tdetail\n");
            for v in &self.verdicts {
                let j = verdict_json(v);
                out.push_str(&format!(
                    "{}\t{}\t{}..{}\t{}\t{}\n",
                    v.check.tag(),
                    outcome_tag(&v.outcome),
                    v.window.lo,
                    v.window.hi,
                    cell(&j["degree"]),
                    v.detail
                ));
            }
        }
        for s in &self.scope {
            out.push_str(&format!("# scope: {s}\n"));
        }
        out
    }
}
