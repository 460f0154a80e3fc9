use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub metric: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Check {
    /// Pass iff `metric <= tolerance`.
    pub fn at_most(name: impl Into<String>, metric: f64, tolerance: f64) -> Self {
        let status = if metric <= tolerance { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, metric: finite(metric), tolerance: Some(tolerance) }
    }

    /// Pass iff `metric >= floor`.
    pub fn at_least(name: impl Into<String>, metric: f64, floor: f64) -> Self {
        let status = if metric >= floor { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, metric: finite(metric), tolerance: Some(floor) }
    }

    pub fn flag(name: impl Into<String>, ok: bool, metric: Option<f64>) -> Self {
        let status = if ok { Status::Pass } else { Status::Fail };
        Self { name: name.into(), status, metric: metric.and_then(finite), tolerance: None }
    }

    pub fn skip(name: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Skip, metric: None, tolerance: None }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` overrides the clock.
    pub timestamp: u64,
    pub seed: u64,
    /// Command-specific payload.
    pub results: serde_json::Value,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            command: command.into(),
            parameters: BTreeMap::new(),
            checks: Vec::new(),
            timestamp: timestamp(),
            seed,
            results: serde_json::Value::Null,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.into(), value.to_string());
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn checks_csv(&self) -> String {
        let mut out = String::from("name,status,metric,tolerance\n");
        let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_default();
        for c in &self.checks {
            let status = serde_json::to_value(c.status).expect("status serializes");
            let name = c.name.replace('"', "\"\"");
            out.push_str(&format!(
                "\"{name}\",{},{},{}\n",
                status.as_str().unwrap_or_default(),
                opt(c.metric),
                opt(c.tolerance)
            ));
        }
        out
    }
}

fn timestamp() -> u64 {
    if let Some(epoch) = std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.trim().parse().ok()) {
        return epoch;
    }
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_and_csv() {
        let mut r = RunReport::new("x", 1);
        r.checks.push(Check::at_most("a", 0.5, 1.0));
        r.checks.push(Check::skip("b"));
        assert_eq!(r.exit_code(), 0);
        r.checks.push(Check::at_most("c", f64::NAN, 1.0));
        assert_eq!(r.exit_code(), 1);
        let csv = r.checks_csv();
        assert!(csv.contains("\"a\",pass,5e-1,1e0"));
        assert!(csv.contains("\"b\",skip,,"));
        assert!(csv.contains("\"c\",fail,,1e0"));
        let back: RunReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}
