//! The `report/v1` document every command emits.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const REPORT_SCHEMA: &str = "report/v1";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub version: &'static str,
    /// Seconds since the Unix epoch; the only field that varies between
    /// identical runs.
    pub timestamp: u64,
    pub seed: u64,
    /// SHA-256 over the command, its arguments and the input file bytes.
    pub inputs_digest: String,
    pub tolerances: BTreeMap<String, f64>,
    pub results: Value,
}

impl Report {
    pub fn new(
        command: &str,
        seed: u64,
        inputs: &Inputs,
        tolerances: &[(&str, f64)],
        results: impl Serialize,
    ) -> Self {
        Self {
            schema: REPORT_SCHEMA,
            command: command.into(),
            version: env!("CARGO_PKG_VERSION"),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            seed,
            inputs_digest: inputs.digest(),
            tolerances: tolerances
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
            results: serde_json::to_value(results).expect("results serialize"),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Everything a command read, in order.
#[derive(Debug, Default)]
pub struct Inputs(Vec<(String, Vec<u8>)>);

impl Inputs {
    pub fn new(command: &str) -> Self {
        Self(vec![("command".into(), command.as_bytes().to_vec())])
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.0.push((key.into(), value.to_string().into_bytes()));
        self
    }

    pub fn bytes(mut self, key: &str, value: &[u8]) -> Self {
        self.0.push((key.into(), value.to_vec()));
        self
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.0 {
            h.update((k.len() as u64).to_le_bytes());
            h.update(k.as_bytes());
            h.update((v.len() as u64).to_le_bytes());
            h.update(v);
        }
        hex::encode(h.finalize())
    }
}
