use serde::Serialize;
use serde_json::Value;

use crate::input::InputDigest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// What a command found: structured details plus any replayable counterexamples.
#[derive(Debug, Default)]
pub struct Findings {
    pub details: serde_json::Map<String, Value>,
    pub counterexamples: Vec<Value>,
}

impl Findings {
    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        self.details
            .insert(key.to_string(), serde_json::to_value(value).expect("report values serialize"));
    }

    pub fn fail(&mut self, value: impl Serialize) {
        self.counterexamples
            .push(serde_json::to_value(value).expect("report values serialize"));
    }

    pub fn verdict(&self) -> Verdict {
        if self.counterexamples.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub verdict: Verdict,
    pub details: serde_json::Map<String, Value>,
    pub counterexamples: Vec<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Report {
    pub fn new(command: &str, inputs: Vec<InputDigest>, findings: Findings, seed: Option<u64>) -> Self {
        Report {
            command: command.to_string(),
            inputs,
            verdict: findings.verdict(),
            details: findings.details,
            counterexamples: findings.counterexamples,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}
