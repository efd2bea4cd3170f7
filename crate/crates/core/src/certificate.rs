//! Machine-checkable certificates in canonical JSON.
//!
//! Canonical form: object keys sorted lexicographically, no insignificant
//! whitespace, UTF-8, and every numeral encoded as a decimal string. The
//! bytes are a pure function of the certificate, so two runs on the same
//! inputs agree byte for byte once `created_at` and `elapsed_ms` are left out.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bertrand::{LadderChain, LadderVerdict, LadderViolation};
use crate::error::{Error, Result};
use crate::extras::{DensityEstimate, RuthAaronPair};
use crate::primes::SopfMode;
use crate::report::{Method, RangeCertificate, Statement};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertResult {
    pub status: Verdict,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub schema_version: String,
    pub statement: Statement,
    pub parameters: BTreeMap<String, String>,
    pub result: CertResult,
    pub method: Method,
    pub tool_version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub created_at: Option<String>,
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

impl Certificate {
    fn new(
        statement: Statement,
        parameters: BTreeMap<String, String>,
        status: Verdict,
        payload: Value,
        method: Method,
    ) -> Certificate {
        Certificate {
            schema_version: SCHEMA_VERSION.to_string(),
            statement,
            parameters,
            result: CertResult { status, payload },
            method,
            tool_version: crate::TOOL_VERSION.to_string(),
            created_at: None,
        }
    }

    /// Certificate for a range run. `include_elapsed` adds wall-clock time to
    /// the payload, which makes the bytes run-dependent.
    pub fn from_range(rc: &RangeCertificate, include_elapsed: bool) -> Certificate {
        let mut payload = json!({
            "all_pass": rc.all_pass,
            "checked": rc.checked.to_string(),
            "anomalies": to_value(&rc.anomalies),
            "failures": to_value(&rc.failures),
        });
        if include_elapsed {
            payload["elapsed_ms"] = Value::String(rc.elapsed.as_millis().to_string());
        }
        let mut c = Certificate::new(
            rc.statement,
            params([("from", rc.n_lo.to_string()), ("to", rc.n_hi.to_string())]),
            verdict(rc.holds()),
            payload,
            rc.method,
        );
        c.tool_version = rc.tool_version.clone();
        c
    }

    pub fn from_ladder(chain: &LadderChain, verdict_: &LadderVerdict) -> Certificate {
        let payload = json!({
            "chain": to_value(chain)["primes"],
            "valid": verdict_.is_valid(),
            "scanned_to": verdict_.scanned_to.to_string(),
            "violation": verdict_.violation.as_ref().map(violation_value),
        });
        Certificate::new(
            Statement::Ladder,
            params([("coverage_target", chain.coverage_target.to_string())]),
            verdict(verdict_.is_valid()),
            payload,
            Method::Exact,
        )
    }

    pub fn from_ruth_aaron(limit: u64, mode: SopfMode, pairs: &[RuthAaronPair]) -> Certificate {
        let list: Vec<Value> = pairs
            .iter()
            .map(|p| json!({"n": p.n.to_string(), "sum": p.sum.to_string()}))
            .collect();
        Certificate::new(
            Statement::RuthAaron,
            params([("limit", limit.to_string()), ("mode", mode.to_string())]),
            Verdict::Pass,
            json!({"count": pairs.len().to_string(), "pairs": list}),
            Method::Exact,
        )
    }

    pub fn from_density(est: &DensityEstimate) -> Certificate {
        let (num, den) = est.density();
        Certificate::new(
            Statement::AbundantDensity,
            params([("limit", est.limit.to_string())]),
            verdict(est.count > 0),
            json!({
                "count": est.count.to_string(),
                "density": {"numerator": num.to_string(), "denominator": den.to_string()},
            }),
            Method::Exact,
        )
    }

    pub fn with_timestamp(mut self, created_at: impl Into<String>) -> Certificate {
        self.created_at = Some(created_at.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.result.status == Verdict::Pass
    }

    /// Canonical JSON bytes.
    pub fn emit(&self) -> Vec<u8> {
        // serde_json's Map is a BTreeMap here, so going through Value sorts keys
        serde_json::to_vec(&to_value(self)).expect("certificate serializes")
    }

    /// Writes the canonical bytes followed by a newline.
    pub fn emit_to<W: std::io::Write>(&self, mut sink: W) -> std::io::Result<usize> {
        let bytes = self.emit();
        sink.write_all(&bytes)?;
        sink.write_all(b"\n")?;
        Ok(bytes.len() + 1)
    }

    /// Parses a certificate, accepting a single trailing newline. Rejects
    /// JSON numbers anywhere and any input that is not in canonical form.
    pub fn parse(bytes: &[u8]) -> Result<Certificate> {
        let body = bytes.strip_suffix(b"\n").unwrap_or(bytes);
        let value: Value =
            serde_json::from_slice(body).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        if let Some(path) = find_number(&value, "$") {
            return Err(Error::Parse(format!("numeral at {path} is not a decimal string")));
        }
        let cert: Certificate = serde_json::from_value(value)
            .map_err(|e| Error::Parse(format!("not a certificate: {e}")))?;
        if cert.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {:?}",
                cert.schema_version
            )));
        }
        if cert.emit() != body {
            return Err(Error::Parse("certificate is not in canonical form".into()));
        }
        Ok(cert)
    }

    /// The certificate with run-dependent fields removed.
    pub fn without_timing(&self) -> Certificate {
        let mut c = self.clone();
        c.created_at = None;
        if let Value::Object(map) = &mut c.result.payload {
            map.remove("elapsed_ms");
        }
        c
    }
}

fn violation_value(v: &LadderViolation) -> Value {
    match v {
        LadderViolation::Empty => json!({"kind": "empty"}),
        LadderViolation::DoesNotStartAtTwo { first } => {
            json!({"kind": "does_not_start_at_two", "value": first.to_string()})
        }
        LadderViolation::NotPrime { index, value } => {
            json!({"kind": "not_prime", "index": index.to_string(), "value": value.to_string()})
        }
        LadderViolation::Doubling { index, prev, value } => json!({
            "kind": "doubling",
            "index": index.to_string(),
            "prev": prev.to_string(),
            "value": value.to_string(),
        }),
        LadderViolation::TooShort { top, target } => {
            json!({"kind": "too_short", "top": top.to_string(), "target": target.to_string()})
        }
        LadderViolation::Uncovered { n } => json!({"kind": "uncovered", "n": n.to_string()}),
    }
}

fn find_number(v: &Value, path: &str) -> Option<String> {
    match v {
        Value::Number(_) => Some(path.to_string()),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .find_map(|(i, x)| find_number(x, &format!("{path}[{i}]"))),
        Value::Object(map) => map
            .iter()
            .find_map(|(k, x)| find_number(x, &format!("{path}.{k}"))),
        _ => None,
    }
}
