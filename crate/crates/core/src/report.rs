//! Machine-readable reports emitted by the command-line verbs.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Outcome of one verb. Objects inside `verdicts` and `disagreements` are
/// plain JSON values whose keys serialize in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub verb: String,
    /// SHA-256 of each input file, keyed by its role.
    pub inputs: BTreeMap<String, String>,
    pub verdicts: Value,
    pub disagreements: Vec<Value>,
    /// Structural problems found (for validation verbs).
    pub violations: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl RunReport {
    pub fn new(verb: impl Into<String>) -> Self {
        RunReport {
            verb: verb.into(),
            inputs: BTreeMap::new(),
            verdicts: Value::Object(Default::default()),
            disagreements: Vec::new(),
            violations: Vec::new(),
            timing_ms: None,
        }
    }

    /// Records an input by the digest of its contents.
    pub fn input(&mut self, role: &str, contents: &[u8]) {
        self.inputs.insert(role.to_string(), digest(contents));
    }

    pub fn verdict(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("serializable");
        if let Value::Object(map) = &mut self.verdicts {
            map.insert(key.to_string(), v);
        }
    }

    pub fn disagreement(&mut self, value: impl Serialize) {
        self.disagreements
            .push(serde_json::to_value(value).expect("serializable"));
    }

    /// No violations and no disagreements.
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.disagreements.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

pub fn digest(contents: &[u8]) -> String {
    Sha256::digest(contents)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
