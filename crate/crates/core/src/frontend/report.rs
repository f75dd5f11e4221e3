use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fincat::FinCat;

pub const SCHEMA: &str = "spanforge.report/1";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Emit {
    #[default]
    Table,
    Dot,
    Json,
}

impl FromStr for Emit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Emit::Table),
            "dot" => Ok(Emit::Dot),
            "json" => Ok(Emit::Json),
            _ => Err(Error::Input(format!("unknown output format `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Violation,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
        })
    }
}

/// Outcome of one command.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub lines: Vec<String>,
    pub data: Value,
    pub dot: Option<String>,
    /// Parseable text carried by the report. Table output prints it verbatim
    /// and demotes everything else to comments, so it can be read back.
    pub document: Option<String>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Report {
        Report {
            command: command.into(),
            status: Status::Pass,
            lines: Vec::new(),
            data: json!({}),
            dot: None,
            document: None,
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    /// Records a failed check; the status becomes a violation.
    pub fn fail(&mut self, s: impl Into<String>) {
        self.status = Status::Violation;
        self.lines.push(s.into());
    }

    pub fn check(&mut self, ok: bool, what: &str) {
        if ok {
            self.line(format!("ok    {what}"));
        } else {
            self.fail(format!("FAIL  {what}"));
        }
    }

    pub fn set(&mut self, key: &str, v: Value) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.to_string(), v);
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Violation => 1,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "status": self.status.to_string(),
            "data": self.data,
        })
    }

    pub fn render(&self, emit: Emit) -> String {
        match emit {
            Emit::Table => {
                let lead = if self.document.is_some() { "# " } else { "" };
                let mut out = String::new();
                for l in &self.lines {
                    out.push_str(lead);
                    out.push_str(l);
                    out.push('\n');
                }
                if let Some(doc) = &self.document {
                    out.push_str(doc);
                }
                out.push_str(&format!("{lead}{}: {}\n", self.command, self.status));
                out
            }
            Emit::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("json values serialize");
                s.push('\n');
                s
            }
            Emit::Dot => self
                .dot
                .clone()
                .unwrap_or_else(|| format!("digraph \"{}\" {{\n}}\n", escape(&self.command))),
        }
    }
}

/// Exit code for a failed command.
pub fn error_exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Input(_) => 2,
        Error::InvalidInstance(_) => 3,
        Error::Internal(_) => 4,
    }
}

/// JSON form of an error, in the report schema.
pub fn error_json(command: &str, e: &Error) -> Value {
    let kind = match e {
        Error::Parse { .. } => "parse",
        Error::Input(_) => "input",
        Error::InvalidInstance(_) => "invalid_instance",
        Error::Internal(_) => "internal",
    };
    json!({
        "schema": SCHEMA,
        "command": command,
        "status": "error",
        "data": { "kind": kind, "message": e.to_string() },
    })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Hom-set sizes as rows of a table, objects in id order.
pub fn hom_table(cat: &FinCat) -> Vec<String> {
    let labels: Vec<&str> = cat.object_ids().map(|o| cat.object_label(o)).collect();
    if labels.is_empty() {
        return Vec::new();
    }
    let w = labels.iter().map(|l| l.chars().count()).max().unwrap_or(1).max(2);
    let mut out = Vec::with_capacity(labels.len() + 1);
    let mut head = format!("{:w$}", "");
    for l in &labels {
        head.push_str(&format!(" {l:>w$}"));
    }
    out.push(head.trim_end().to_string());
    for a in cat.object_ids() {
        let mut row = format!("{:w$}", cat.object_label(a));
        for b in cat.object_ids() {
            row.push_str(&format!(" {:>w$}", cat.hom(a, b).len()));
        }
        out.push(row);
    }
    out
}

/// Objects as nodes, one edge per non-empty hom-set labelled by its size.
pub fn hom_dot(name: &str, cat: &FinCat) -> String {
    let mut out = format!("digraph \"{}\" {{\n", escape(name));
    for o in cat.object_ids() {
        out.push_str(&format!("  \"{}\";\n", escape(cat.object_label(o))));
    }
    for a in cat.object_ids() {
        for b in cat.object_ids() {
            let n = cat.hom(a, b).len();
            if n > 0 {
                out.push_str(&format!(
                    "  \"{}\" -> \"{}\" [label=\"{n}\"];\n",
                    escape(cat.object_label(a)),
                    escape(cat.object_label(b))
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn hom_json(cat: &FinCat) -> Value {
    let objects: Vec<&str> = cat.object_ids().map(|o| cat.object_label(o)).collect();
    let sizes: Vec<Vec<usize>> = cat
        .object_ids()
        .map(|a| cat.object_ids().map(|b| cat.hom(a, b).len()).collect())
        .collect();
    json!({ "objects": objects, "hom_sizes": sizes })
}

/// Text for a failed command: the JSON error report, or one line for the
/// other formats.
pub fn render_error(command: &str, e: &Error, emit: Emit) -> String {
    match emit {
        Emit::Json => {
            let mut s = serde_json::to_string_pretty(&error_json(command, e)).expect("json values serialize");
            s.push('\n');
            s
        }
        _ => format!("spanforge {command}: {e}\n"),
    }
}
