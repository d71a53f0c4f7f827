//! Verification reports: named checks with optional witnesses, rendered
//! as schema-stable JSON or aligned text.
//!
//! JSON output is deterministic byte for byte for a fixed seed and
//! inputs; wall-clock timings therefore only appear in the text
//! rendering.

use serde::{Deserialize, Serialize};

use crate::graded::Degree;

/// Location and value of a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub degree: Degree,
    /// offending basis vector (possibly a tensor label)
    pub basis: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed: true,
            witness: None,
        }
    }

    pub fn fail(
        name: impl Into<String>,
        degree: Degree,
        basis: impl Into<String>,
        value: impl Into<String>,
    ) -> Self {
        Check {
            name: name.into(),
            passed: false,
            witness: Some(Witness {
                degree,
                basis: basis.into(),
                value: value.into(),
            }),
        }
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}: {}", self.name);
        self
    }
}

/// A full report for one command or verification run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// extra structured payload (tables, dimensions, coproduct rows)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<serde_json::Value>,
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            schema: 1,
            command: command.into(),
            seed: None,
            checks: Vec::new(),
            passed: true,
            data: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.push(c);
        }
    }

    pub fn set_data(&mut self, data: serde_json::Value) {
        self.data = Some(data);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Aligned text rendering; `elapsed` is appended when given.
    pub fn to_text(&self, elapsed: Option<std::time::Duration>) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.command));
        if let Some(seed) = self.seed {
            out.push_str(&format!("seed: {seed}\n"));
        }
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(0);
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{:width$}  {status}\n", check.name));
            if let Some(w) = &check.witness {
                out.push_str(&format!(
                    "{:width$}  witness: degree {} basis {} value {}\n",
                    "", w.degree, w.basis, w.value
                ));
            }
        }
        if let Some(data) = &self.data {
            out.push_str(&render_data_text(data));
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.passed { "PASS" } else { "FAIL" }
        ));
        if let Some(e) = elapsed {
            out.push_str(&format!("elapsed: {:.3}s\n", e.as_secs_f64()));
        }
        out
    }
}

fn render_data_text(data: &serde_json::Value) -> String {
    use serde_json::Value;
    fn walk(value: &Value, indent: usize, out: &mut String) {
        let pad = "  ".repeat(indent);
        match value {
            Value::Object(map) => {
                for (k, v) in map {
                    match v {
                        Value::Object(_) | Value::Array(_) => {
                            out.push_str(&format!("{pad}{k}:\n"));
                            walk(v, indent + 1, out);
                        }
                        _ => out.push_str(&format!("{pad}{k}: {v}\n")),
                    }
                }
            }
            Value::Array(items) => {
                for item in items {
                    match item {
                        Value::Object(_) | Value::Array(_) => walk(item, indent, out),
                        _ => out.push_str(&format!("{pad}- {item}\n")),
                    }
                }
            }
            other => out.push_str(&format!("{pad}{other}\n")),
        }
    }
    let mut out = String::new();
    walk(data, 0, &mut out);
    out
}
