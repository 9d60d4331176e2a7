use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::AppError;

/// One pass/fail check with the value it was decided on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub measured: f64,
    /// Human-readable acceptance rule, e.g. `<= 0.0031` or `in [0.249, 0.25]`.
    pub tolerance: String,
}

impl Check {
    pub fn at_most(name: &str, measured: f64, bound: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: measured <= bound,
            measured,
            tolerance: format!("<= {bound}"),
        }
    }

    pub fn within(name: &str, measured: f64, lo: f64, hi: f64) -> Self {
        Self {
            name: name.to_string(),
            pass: (lo..=hi).contains(&measured),
            measured,
            tolerance: format!("in [{lo}, {hi}]"),
        }
    }

    pub fn holds(name: &str, pass: bool, measured: f64, rule: &str) -> Self {
        Self {
            name: name.to_string(),
            pass,
            measured,
            tolerance: rule.to_string(),
        }
    }
}

/// What a command did: its inputs, the files it wrote and its checks.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            ..Self::default()
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<(), AppError> {
    fs::write(path, to_json(value)).map_err(|e| AppError::io(path, e))
}
