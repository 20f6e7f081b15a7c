//! JSON run summary with the fixed key set
//! `{config, criteria, slopes, elapsed_seconds, version}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CriterionResult {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunSummary {
    pub config: BTreeMap<String, String>,
    pub criteria: Vec<CriterionResult>,
    pub slopes: BTreeMap<String, f64>,
    pub elapsed_seconds: f64,
    pub version: String,
}

impl RunSummary {
    pub fn new(config: BTreeMap<String, String>) -> Self {
        Self {
            config,
            criteria: Vec::new(),
            slopes: BTreeMap::new(),
            elapsed_seconds: 0.0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn push(&mut self, name: &str, pass: bool, value: f64, threshold: f64) {
        self.criteria.push(CriterionResult {
            name: name.to_string(),
            pass,
            value,
            threshold,
        });
    }

    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_roundtrips_losslessly() {
        let mut cfg = BTreeMap::new();
        cfg.insert("seed".to_string(), "7".to_string());
        let mut s = RunSummary::new(cfg);
        s.push("ward", true, 3.25e-13, 1e-10);
        s.push("slope", false, -0.21, -0.2833);
        s.slopes.insert("locallaw".into(), -0.972_345_1);
        s.elapsed_seconds = 12.5;
        let text = s.to_json().unwrap();
        let back: RunSummary = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(!back.all_pass());
    }
}
