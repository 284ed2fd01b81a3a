use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

/// Structured result of one command.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Map<String, Value>,
    pub checks: Vec<Check>,
    pub timing_seconds: f64,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        RunReport { command: command.into(), inputs, outputs: Map::new(), checks: Vec::new(), timing_seconds: 0.0 }
    }

    pub fn output(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        let v = serde_json::to_value(value).expect("serialisable output");
        self.outputs.insert(key.into(), v);
        self
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed });
        self
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.outputs {
            let shown = match v {
                Value::String(s) if s.contains('\n') => format!("\n{}", s.trim_end()),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
        for c in &self.checks {
            out.push_str(&format!("[{}] {}\n", if c.passed { "pass" } else { "FAIL" }, c.name));
        }
        out
    }
}
