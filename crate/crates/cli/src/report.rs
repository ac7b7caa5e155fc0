use serde_json::{json, Map, Value};

/// What a command concluded. Each verdict maps to one exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The checked property held on everything enumerated.
    Verified,
    /// Nothing at the requested target on the enumerated sample.
    NoWitness,
    /// A witness or violation was found and is attached.
    Witness,
    Violation,
    Invalid,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Verified | Verdict::NoWitness => 0,
            Verdict::Witness | Verdict::Violation | Verdict::Invalid => 1,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::NoWitness => "no-witness",
            Verdict::Witness => "witness",
            Verdict::Violation => "violation",
            Verdict::Invalid => "invalid",
        }
    }
}

/// The JSON document printed on standard output. It holds no timestamps or
/// timings, so reruns with the same inputs print the same bytes.
pub struct RunReport {
    pub command: String,
    pub parameters: Map<String, Value>,
    pub verdict: Verdict,
    pub payload: Value,
    pub stats: Map<String, Value>,
}

impl RunReport {
    pub fn new(command: &str, verdict: Verdict, payload: Value) -> Self {
        RunReport { command: command.to_string(), parameters: Map::new(), verdict, payload, stats: Map::new() }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn stat(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.stats.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "parameters": self.parameters,
            "verdict": self.verdict.label(),
            "exit_code": self.verdict.exit_code(),
            "payload": self.payload,
            "stats": self.stats,
        })
    }
}

pub fn error_report(command: &str, message: &str) -> Value {
    json!({ "command": command, "verdict": "error", "exit_code": 2, "error": message })
}
