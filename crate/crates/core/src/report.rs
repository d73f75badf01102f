//! Machine-readable run reports and the serde helpers that keep every
//! rational value in exact string form.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::exactmath::{format_rational, Rational, UniPoly};
use crate::instances::WitnessTriple;

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn ser_rationals<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

/// Polynomial as its coefficient list, lowest degree first.
pub fn ser_poly<S: Serializer>(p: &UniPoly, s: S) -> Result<S::Ok, S::Error> {
    ser_rationals(p.coeffs(), s)
}

pub fn ser_polys<S: Serializer>(ps: &[UniPoly], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(
        ps.iter()
            .map(|p| p.coeffs().iter().map(format_rational).collect::<Vec<_>>()),
    )
}

impl Serialize for WitnessTriple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let enc = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        let mut st = s.serialize_struct("WitnessTriple", 3)?;
        st.serialize_field("x", &enc(&self.x))?;
        st.serialize_field("y", &enc(&self.y))?;
        st.serialize_field("z", &enc(&self.z))?;
        st.end()
    }
}

/// Hex SHA-256 of arbitrary bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Single JSON document describing one CLI invocation. It carries no wall-clock
/// data, so identical inputs, seed and version serialize byte-identically.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `(path, sha256)` for every input file read.
    pub inputs: Vec<InputDigest>,
    pub result: serde_json::Value,
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl RunReport {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION"),
            seed,
            inputs: Vec::new(),
            result: serde_json::Value::Null,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
