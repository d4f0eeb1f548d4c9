//! JSON run reports emitted by the command-line front end.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Arbitrary-precision integers go into JSON as decimal strings.
pub fn big_as_string<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_str_radix(10))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// The top-level object every command prints. `pass` is false whenever a
/// verdict is VIOLATED, an audit step fails or a precondition is not met.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub pass: bool,
    pub wall_time_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// A structured error payload: `{"error": {"kind": ..., "message": ...}}`.
pub fn error_value(kind: &str, message: impl ToString) -> Value {
    serde_json::json!({ "error": { "kind": kind, "message": message.to_string() } })
}
