//! Outcome records shared by the range verifiers.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::Error;

/// Every statement a certificate can speak about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Statement {
    #[serde(rename = "chebyshev_bound")]
    ChebyshevBound,
    #[serde(rename = "pb_le_2n")]
    PbLe2n,
    #[serde(rename = "b_le_1")]
    BLe1,
    #[serde(rename = "b_eq_0")]
    BEq0,
    #[serde(rename = "lower_bound")]
    LowerBound,
    #[serde(rename = "final_inequality")]
    FinalInequality,
    #[serde(rename = "bertrand_range")]
    BertrandRange,
    #[serde(rename = "ladder")]
    Ladder,
    #[serde(rename = "two_primes_mod4")]
    TwoPrimesMod4,
    #[serde(rename = "ruth_aaron")]
    RuthAaron,
    #[serde(rename = "abundant_density")]
    AbundantDensity,
}

impl Statement {
    pub fn as_str(self) -> &'static str {
        match self {
            Statement::ChebyshevBound => "chebyshev_bound",
            Statement::PbLe2n => "pb_le_2n",
            Statement::BLe1 => "b_le_1",
            Statement::BEq0 => "b_eq_0",
            Statement::LowerBound => "lower_bound",
            Statement::FinalInequality => "final_inequality",
            Statement::BertrandRange => "bertrand_range",
            Statement::Ladder => "ladder",
            Statement::TwoPrimesMod4 => "two_primes_mod4",
            Statement::RuthAaron => "ruth_aaron",
            Statement::AbundantDensity => "abundant_density",
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The six per-`n` lemmas checked by [`crate::lemmas::Verifier`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    ChebyshevBound,
    PbLe2n,
    BLe1,
    BEq0,
    LowerBound,
    FinalInequality,
}

impl LemmaId {
    pub const ALL: [LemmaId; 6] = [
        LemmaId::ChebyshevBound,
        LemmaId::PbLe2n,
        LemmaId::BLe1,
        LemmaId::BEq0,
        LemmaId::LowerBound,
        LemmaId::FinalInequality,
    ];

    pub fn statement(self) -> Statement {
        match self {
            LemmaId::ChebyshevBound => Statement::ChebyshevBound,
            LemmaId::PbLe2n => Statement::PbLe2n,
            LemmaId::BLe1 => Statement::BLe1,
            LemmaId::BEq0 => Statement::BEq0,
            LemmaId::LowerBound => Statement::LowerBound,
            LemmaId::FinalInequality => Statement::FinalInequality,
        }
    }

    pub fn from_statement(s: Statement) -> Option<LemmaId> {
        LemmaId::ALL.into_iter().find(|l| l.statement() == s)
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.statement().as_str())
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<LemmaId, Error> {
        let id = match s {
            "chebyshev" | "chebyshev_bound" => LemmaId::ChebyshevBound,
            "pb_le_2n" => LemmaId::PbLe2n,
            "b_le_1" => LemmaId::BLe1,
            "b_eq_0" => LemmaId::BEq0,
            "lower_bound" => LemmaId::LowerBound,
            "final_inequality" | "crossover" => LemmaId::FinalInequality,
            other => return Err(Error::Parse(format!("unknown lemma id {other:?}"))),
        };
        Ok(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A non-pass at a documented exceptional input.
    Anomaly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    CertifiedRounding,
}

impl Method {
    /// The weaker of two methods.
    pub fn combine(self, other: Method) -> Method {
        self.max(other)
    }
}

/// Explanation of a non-pass: the offending prime, if any, and the computed
/// values as decimal strings.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(with = "decimal::opt_u64_str")]
    pub p: Option<u64>,
    pub values: BTreeMap<String, String>,
}

impl Witness {
    pub fn at_prime(p: u64) -> Witness {
        Witness {
            p: Some(p),
            values: BTreeMap::new(),
        }
    }

    pub fn value(mut self, key: &str, v: impl fmt::Display) -> Witness {
        self.values.insert(key.to_string(), v.to_string());
        self
    }
}

/// Outcome of one statement at one `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub statement: Statement,
    #[serde(with = "decimal::u64_str")]
    pub n: u64,
    pub status: Status,
    pub witness: Option<Witness>,
    pub method: Method,
}

impl LemmaReport {
    pub fn pass(statement: Statement, n: u64, method: Method) -> LemmaReport {
        LemmaReport {
            statement,
            n,
            status: Status::Pass,
            witness: None,
            method,
        }
    }

    pub fn non_pass(
        statement: Statement,
        n: u64,
        status: Status,
        witness: Witness,
        method: Method,
    ) -> LemmaReport {
        debug_assert!(status != Status::Pass);
        LemmaReport {
            statement,
            n,
            status,
            witness: Some(witness),
            method,
        }
    }

    pub fn is_pass(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Aggregate outcome of a statement over `[n_lo, n_hi]`.
///
/// `all_pass` is true iff every `n` passed. Documented exceptions are listed
/// in `anomalies`, genuine failures in `failures`, both sorted by `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeCertificate {
    pub statement: Statement,
    pub n_lo: u64,
    pub n_hi: u64,
    pub checked: u64,
    pub all_pass: bool,
    pub anomalies: Vec<LemmaReport>,
    pub failures: Vec<LemmaReport>,
    pub method: Method,
    pub tool_version: String,
    pub elapsed: Duration,
}

impl RangeCertificate {
    /// Assembles a certificate from non-pass reports in any order.
    pub fn from_reports(
        statement: Statement,
        n_lo: u64,
        n_hi: u64,
        method: Method,
        non_pass: impl IntoIterator<Item = LemmaReport>,
        elapsed: Duration,
    ) -> RangeCertificate {
        let (mut anomalies, mut failures): (Vec<_>, Vec<_>) = non_pass
            .into_iter()
            .filter(|r| !r.is_pass())
            .partition(|r| r.status == Status::Anomaly);
        anomalies.sort_by_key(|r| r.n);
        failures.sort_by_key(|r| r.n);
        RangeCertificate {
            statement,
            n_lo,
            n_hi,
            checked: n_hi - n_lo + 1,
            all_pass: anomalies.is_empty() && failures.is_empty(),
            anomalies,
            failures,
            method,
            tool_version: crate::TOOL_VERSION.to_string(),
            elapsed,
        }
    }

    /// No genuine failure; documented anomalies are allowed.
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}
