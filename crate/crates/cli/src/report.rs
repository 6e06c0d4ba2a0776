//! Report envelope, provenance hash and exit codes.

use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const EXIT_OK: u8 = 0;
pub const EXIT_NEGATIVE: u8 = 10;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INTERNAL: u8 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: String, message: String },
    #[error("internal: {0}")]
    Internal(String),
}

impl CliError {
    pub fn usage(flag: &str, message: impl Into<String>) -> Self {
        CliError::Usage { flag: flag.to_string(), message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage { .. } => EXIT_USAGE,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

/// Collects what determines a report: command, parameters and raw input bytes.
pub struct Provenance {
    command: String,
    parts: Vec<(String, Vec<u8>)>,
}

impl Provenance {
    pub fn new(command: &str) -> Self {
        Provenance { command: command.to_string(), parts: Vec::new() }
    }

    pub fn param(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.parts.push((name.to_string(), value.to_string().into_bytes()));
        self
    }

    pub fn input(&mut self, flag: &str, bytes: &[u8]) -> &mut Self {
        self.parts.push((flag.to_string(), bytes.to_vec()));
        self
    }

    /// SHA-256 over the command and each named part, length-prefixed.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        let mut feed = |b: &[u8]| {
            h.update((b.len() as u64).to_le_bytes());
            h.update(b);
        };
        feed(self.command.as_bytes());
        let mut parts = self.parts.clone();
        parts.sort();
        for (name, bytes) in &parts {
            feed(name.as_bytes());
            feed(bytes);
        }
        hex::encode(h.finalize())
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    input_sha256: String,
    result: Value,
}

pub struct Outcome {
    pub code: u8,
    pub text: String,
}

impl Outcome {
    /// Canonical JSON: keys sorted at every level, two-space indentation.
    pub fn new(prov: &Provenance, result: &impl Serialize, code: u8) -> Result<Outcome, CliError> {
        let result = serde_json::to_value(result).map_err(|e| CliError::Internal(e.to_string()))?;
        let env = Envelope {
            tool: "sailsym",
            version: env!("CARGO_PKG_VERSION"),
            command: &prov.command,
            input_sha256: prov.hash(),
            result,
        };
        let value = serde_json::to_value(&env).map_err(|e| CliError::Internal(e.to_string()))?;
        let mut text = serde_json::to_string_pretty(&value).map_err(|e| CliError::Internal(e.to_string()))?;
        text.push('\n');
        Ok(Outcome { code, text })
    }

    pub fn emit(self, out: Option<&Path>) -> Result<u8, CliError> {
        match out {
            Some(p) => std::fs::write(p, &self.text)
                .map_err(|e| CliError::usage("--out", format!("cannot write {}: {e}", p.display())))?,
            None => print!("{}", self.text),
        }
        Ok(self.code)
    }
}
