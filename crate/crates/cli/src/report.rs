use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use toric_mori::Error;

/// Exit code and message for a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    pub fn math(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::RayOutOfRange { .. }
            | Error::ExtremalRayOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::ShapeMismatch(_)
            | Error::DivisorLength { .. }
            | Error::SameDivisor
            | Error::Overflow => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Everything a command prints. JSON object keys are sorted, so equal inputs
/// give byte-identical output.
#[derive(Debug, Default)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub diagnostics: Vec<String>,
    pub lines: Vec<String>,
}

impl Report {
    pub fn new(command: Vec<String>) -> Self {
        Report {
            command,
            result: Value::Null,
            ..Default::default()
        }
    }

    pub fn digest(&mut self, path: &Path) {
        if let Ok(bytes) = std::fs::read(path) {
            let hash = Sha256::digest(&bytes);
            self.inputs.insert(path.display().to_string(), hex::encode(hash));
        }
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.diagnostics.push(s.into());
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "command": self.command,
            "inputs": self.inputs,
            "result": self.result,
            "diagnostics": self.diagnostics,
        });
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        for d in &self.diagnostics {
            out.push_str("note: ");
            out.push_str(d);
            out.push('\n');
        }
        out
    }
}
