use std::fmt::Write;

use justinf_core::Error;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Plain,
}

/// A command result in every rendering it supports.
pub struct Output {
    json: Value,
    plain: Option<String>,
    dot: Option<String>,
}

impl Output {
    pub fn new<T: Serialize>(value: &T) -> Self {
        Output {
            json: serde_json::to_value(value).expect("command results serialize"),
            plain: None,
            dot: None,
        }
    }

    pub fn plain(mut self, text: impl Into<String>) -> Self {
        self.plain = Some(text.into());
        self
    }

    pub fn dot(mut self, text: String) -> Self {
        self.dot = Some(text);
        self
    }

    pub fn render(&self, format: Format) -> Result<String, Error> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json).expect("valid JSON")),
            Format::Plain => Ok(self.plain.clone().unwrap_or_else(|| plain_of(&self.json))),
            Format::Dot => self
                .dot
                .clone()
                .ok_or_else(|| Error::Malformed("dot output is only available for diagrams".into())),
        }
    }
}

fn plain_of(v: &Value) -> String {
    match v {
        Value::Object(map) => {
            let mut s = String::new();
            for (k, v) in map {
                let _ = writeln!(s, "{k}: {}", scalar(v));
            }
            s.pop();
            s
        }
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join("\n"),
        other => scalar(other),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn error_json(e: &Error) -> String {
    let mut body = serde_json::json!({ "kind": e.kind(), "message": e.to_string() });
    if let Error::ResourceCap { what, requested, cap } = e {
        body["what"] = Value::from(*what);
        body["requested"] = Value::from(*requested);
        body["cap"] = Value::from(*cap);
    }
    serde_json::json!({ "error": body }).to_string()
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Precondition(_) => 1,
        Error::ResourceCap { .. } => 2,
        Error::Malformed(_) => 3,
    }
}
