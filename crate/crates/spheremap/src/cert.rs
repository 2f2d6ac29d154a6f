//! Verification certificates: a hash of the checked object plus the checks and how to rerun them.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::io::{to_json_pretty, write_atomic};
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Invariant {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    /// `sha256:` of the compact JSON encoding of the object.
    pub object_hash: String,
    pub invariants: Vec<Invariant>,
    pub provenance: Vec<String>,
    pub seed: u64,
    pub facts: BTreeMap<String, Value>,
    /// Arguments that regenerate this certificate.
    pub command: Vec<String>,
}

pub fn object_hash<T: Serialize>(object: &T) -> String {
    let bytes = serde_json::to_vec(object).expect("documents serialize");
    format!("sha256:{}", hex::encode(Sha256::digest(&bytes)))
}

impl Certificate {
    pub fn new<T: Serialize>(kind: &str, object: &T, seed: u64, command: Vec<String>) -> Self {
        Certificate {
            kind: kind.to_string(),
            object_hash: object_hash(object),
            invariants: Vec::new(),
            provenance: Vec::new(),
            seed,
            facts: BTreeMap::new(),
            command,
        }
    }

    pub fn check(mut self, name: &str, pass: bool) -> Self {
        self.invariants.push(Invariant { name: name.to_string(), pass });
        self
    }

    pub fn fact(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.facts.insert(key.to_string(), value.into());
        self
    }

    pub fn provenance(mut self, rules: impl IntoIterator<Item = String>) -> Self {
        self.provenance.extend(rules);
        self
    }

    pub fn pass(&self) -> bool {
        self.invariants.iter().all(|i| i.pass)
    }
}

pub fn emit_certificate(cert: &Certificate, path: &Path) -> Result<(), CliError> {
    write_atomic(path, to_json_pretty(cert).as_bytes())
}
