// SPDX-License-Identifier: Apache-2.0

//! The single structured document each invocation produces, and its
//! plain-text rendering.

use serde_json::{Map, Number, Value};

/// One verification: `lhs` against `rhs`.
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub lhs: Value,
    pub rhs: Value,
    pub residual: Value,
}

impl Check {
    pub fn exact(name: impl Into<String>, lhs: impl Into<Value>, rhs: impl Into<Value>) -> Self {
        let (lhs, rhs) = (lhs.into(), rhs.into());
        Check { name: name.into(), pass: lhs == rhs, residual: real(if lhs == rhs { 0.0 } else { 1.0 }), lhs, rhs }
    }

    pub fn real(name: impl Into<String>, lhs: f64, rhs: f64, residual: f64, pass: bool) -> Self {
        Check { name: name.into(), pass, lhs: real(lhs), rhs: real(rhs), residual: real(residual) }
    }
}

pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report { command: command.into(), inputs: Map::new(), results: Value::Object(Map::new()), checks: Vec::new() }
    }

    pub fn input(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.inputs.insert(key.into(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        if let Value::Object(m) = &mut self.results {
            m.insert(key.into(), value.into());
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        let checks = self
            .checks
            .iter()
            .map(|c| {
                let mut m = Map::new();
                m.insert("name".into(), c.name.clone().into());
                m.insert("pass".into(), c.pass.into());
                m.insert("lhs".into(), c.lhs.clone());
                m.insert("rhs".into(), c.rhs.clone());
                m.insert("residual".into(), c.residual.clone());
                Value::Object(m)
            })
            .collect();
        let mut m = Map::new();
        m.insert("command".into(), self.command.clone().into());
        m.insert("inputs".into(), Value::Object(self.inputs.clone()));
        m.insert("results".into(), self.results.clone());
        m.insert("checks".into(), Value::Array(checks));
        Value::Object(m)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.results {
            Value::Object(m) => {
                for (k, v) in m {
                    out.push_str(&format!("{k}: {}\n", plain(v)));
                }
            }
            v => out.push_str(&format!("{}\n", plain(v))),
        }
        for c in &self.checks {
            out.push_str(&format!(
                "[{}] {}: lhs={} rhs={} residual={}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                plain(&c.lhs),
                plain(&c.rhs),
                plain(&c.residual)
            ));
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(plain).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

/// A real with 12 significant digits, kept verbatim in the JSON text.
pub fn real(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let text = if v == 0.0 {
        "0.0".to_string()
    } else {
        let exp = v.abs().log10().floor() as i32;
        if (-5..15).contains(&exp) {
            format!("{:.*}", (11 - exp).max(0) as usize, v)
        } else {
            format!("{:.11e}", v)
        }
    };
    Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
}

/// An exact integer of any size.
pub fn integer(v: impl std::fmt::Display) -> Value {
    Value::Number(v.to_string().parse::<Number>().expect("integer is a JSON number"))
}
