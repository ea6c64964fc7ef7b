use frobquant::Error;
use serde::Serialize;
use serde_json::{json, Value};

pub enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

#[derive(Serialize, Debug)]
pub struct TrailEntry {
    pub check: String,
    pub ok: bool,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub command: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub result: Value,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub error: Value,
    pub trail: Vec<TrailEntry>,
}

impl Report {
    pub fn new(command: &str, result: Value) -> Self {
        Report { command: command.into(), result, error: Value::Null, trail: Vec::new() }
    }

    pub fn check(&mut self, check: impl Into<String>, ok: bool) -> &mut Self {
        self.trail.push(TrailEntry { check: check.into(), ok });
        self
    }

    pub fn error(command: &str, e: &Error) -> Self {
        let mut err = json!({ "name": e.name(), "message": e.to_string() });
        if let Error::Parse { pos, msg } = e {
            err["position"] = json!(pos);
            err["message"] = json!(msg);
        }
        Report { command: command.into(), result: Value::Null, error: err, trail: Vec::new() }
    }

    pub fn usage(command: &str, msg: &str) -> Self {
        let err = json!({ "name": "UsageError", "message": msg });
        Report { command: command.into(), result: Value::Null, error: err, trail: Vec::new() }
    }

    pub fn all_ok(&self) -> bool {
        self.error.is_null() && self.trail.iter().all(|t| t.ok)
    }

    pub fn emit(&self, pretty: bool) {
        if !pretty {
            println!("{}", serde_json::to_string(self).expect("reports serialize"));
            return;
        }
        println!("{}", self.command);
        if !self.error.is_null() {
            let pos = self.error.get("position").map(|p| format!(" at {p}")).unwrap_or_default();
            println!("  error {}{pos}: {}", self.error["name"].as_str().unwrap_or("?"), self.error["message"].as_str().unwrap_or(""));
        }
        render(&self.result, 1);
        for t in &self.trail {
            println!("  [{}] {}", if t.ok { "ok" } else { "FAILED" }, t.check);
        }
    }
}

fn render(v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                match val {
                    Value::Object(_) | Value::Array(_) if !is_flat(val) => {
                        println!("{pad}{k}:");
                        render(val, depth + 1);
                    }
                    _ => println!("{pad}{k}: {}", scalar(val)),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                if is_flat(item) {
                    println!("{pad}- {}", scalar(item));
                } else {
                    println!("{pad}-");
                    render(item, depth + 1);
                }
            }
        }
        Value::Null => {}
        other => println!("{pad}{}", scalar(other)),
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|i| !i.is_object() && !i.is_array()),
        Value::Object(_) => false,
        _ => true,
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}
