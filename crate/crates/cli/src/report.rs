//! Report values shared by all commands; every field is plain text so the
//! JSON form round-trips exactly.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub lines: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub status: String,
    pub rule: String,
    pub polynomial: Option<String>,
    pub structure: Option<String>,
    pub certificate: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub input: Vec<Field>,
    pub window: Option<i64>,
    pub convention: Option<String>,
    pub summary: String,
    pub steps: Vec<Step>,
    pub verdict: Option<VerdictReport>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.into(),
            input: Vec::new(),
            window: None,
            convention: None,
            summary: String::new(),
            steps: Vec::new(),
            verdict: None,
            exit_code: 0,
        }
    }

    pub fn input(&mut self, name: &str, value: impl Into<String>) {
        self.input.push(Field { name: name.into(), value: value.into() });
    }

    pub fn step(&mut self, name: &str, lines: Vec<String>) {
        self.steps.push(Step { name: name.into(), lines });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.summary).unwrap();
        for f in &self.input {
            writeln!(out, "{}: {}", f.name, f.value).unwrap();
        }
        if let Some(w) = self.window {
            writeln!(out, "window: {w}").unwrap();
        }
        if let Some(c) = &self.convention {
            writeln!(out, "convention: {c}").unwrap();
        }
        for s in &self.steps {
            writeln!(out, "[{}]", s.name).unwrap();
            for l in &s.lines {
                writeln!(out, "  {l}").unwrap();
            }
        }
        if let Some(v) = &self.verdict {
            writeln!(out, "[verdict]").unwrap();
            writeln!(out, "  status: {}", v.status).unwrap();
            writeln!(out, "  rule: {}", v.rule).unwrap();
            if let Some(p) = &v.polynomial {
                writeln!(out, "  polynomial: {p}").unwrap();
            }
            if let Some(s) = &v.structure {
                writeln!(out, "  structure: {s}").unwrap();
            }
            for c in &v.certificate {
                writeln!(out, "  certificate: {c}").unwrap();
            }
            for n in &v.notes {
                writeln!(out, "  note: {n}").unwrap();
            }
        }
        out
    }
}
