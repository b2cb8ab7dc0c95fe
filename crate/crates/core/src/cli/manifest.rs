use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

/// One verdict with the numbers behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub section: Option<String>,
    pub name: String,
    pub pass: bool,
    pub metrics: BTreeMap<String, Value>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check { section: None, name: name.into(), pass: true, metrics: BTreeMap::new() }
    }

    pub fn section(mut self, section: &str) -> Self {
        self.section = Some(section.to_string());
        self
    }

    /// Non-finite floats serialize as `null`.
    pub fn metric<V: Serialize>(mut self, key: &str, value: V) -> Self {
        self.metrics.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    pub fn summary_line(&self) -> String {
        let mut s = format!("{} ", if self.pass { "PASS" } else { "FAIL" });
        if let Some(sec) = &self.section {
            s.push_str(sec);
            s.push('.');
        }
        s.push_str(&self.name);
        for (k, v) in &self.metrics {
            let shown = match v {
                Value::Number(n) => n.as_f64().map(super::fmt_sig).unwrap_or_else(|| n.to_string()),
                other => other.to_string(),
            };
            s.push_str(&format!(" {k}={shown}"));
        }
        s
    }
}

/// What a run did and found. Without `--timing` it is a pure function of
/// the resolved configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub config: Value,
    pub checks: Vec<Check>,
    /// Files written next to the manifest.
    pub outputs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunManifest {
    /// Unset options are left out of the config echo.
    pub fn new<C: Serialize>(command: &str, config: &C) -> Self {
        let mut config = serde_json::to_value(config).unwrap_or(Value::Null);
        if let Value::Object(m) = &mut config {
            m.retain(|_, v| !v.is_null());
        }
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            checks: Vec::new(),
            outputs: Vec::new(),
            wall_time_s: None,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn output(&mut self, name: &str) {
        self.outputs.push(name.to_string());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_line_lists_metrics_in_key_order() {
        let c = Check::new("kraft").section("a").metric("z", 0.5).metric("exact", true).pass(false);
        assert_eq!(c.summary_line(), "FAIL a.kraft exact=true z=0.5");
    }

    #[test]
    fn config_echo_drops_unset_options() {
        let m = RunManifest::new("zipf", &serde_json::json!({"alpha": 2.0, "n": null}));
        assert_eq!(m.config, serde_json::json!({"alpha": 2.0}));
        assert!(m.passed());
    }
}
