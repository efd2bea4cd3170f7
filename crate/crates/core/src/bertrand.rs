//! Direct checks of Bertrand's postulate, the two-primes refinement, and
//! prime ladders.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{Error, Result};
use crate::par;
use crate::primes::{is_prime_trial, PrimeTable};
use crate::report::{LemmaReport, Method, RangeCertificate, Statement, Status, Witness};

/// The ladder printed with Erdős' argument for `n < 4000`.
pub const ERDOS_LADDER: [u64; 14] = [
    2, 3, 5, 7, 13, 23, 43, 83, 163, 317, 631, 1259, 2503, 4001,
];

/// Coverage target of [`ERDOS_LADDER`].
pub const ERDOS_LADDER_TARGET: u64 = 4000;

/// Largest target for which [`verify_ladder`] scans every `n`.
pub const EMPIRICAL_SCAN_MAX: u64 = 10_000_000;

/// Which interval the postulate is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BertrandForm {
    /// A prime in `(n, 2n)` for `n >= 2`.
    #[default]
    Strict,
    /// Bertrand's original `(n, 2n - 2)` for `n > 3`.
    Classic,
}

impl BertrandForm {
    fn min_n(self) -> u64 {
        match self {
            BertrandForm::Strict => 2,
            BertrandForm::Classic => 4,
        }
    }

    /// Exclusive upper end of the interval for `n`.
    fn upper(self, n: u64) -> u64 {
        match self {
            BertrandForm::Strict => 2 * n,
            BertrandForm::Classic => 2 * n - 2,
        }
    }
}

/// Smallest prime in `(n, 2n)`.
pub fn bertrand_prime(n: u64, table: &PrimeTable) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!("Bertrand's postulate needs n >= 2, got {n}")));
    }
    table.require(2 * n - 1)?;
    table
        .primes_in(n, 2 * n)?
        .first()
        .copied()
        .ok_or(Error::PostulateViolation { n })
}

/// Confirms a prime in the form's interval for every `n` in `[lo, hi]`.
///
/// Each chunk walks the consecutive primes once: between primes `q < q'` the
/// smallest prime above `n` is `q'` for all `n` in `[q, q')`, so only the
/// smallest such `n` needs the doubling test.
pub fn verify_bertrand_range(
    lo: u64,
    hi: u64,
    table: &PrimeTable,
    form: BertrandForm,
    jobs: usize,
) -> Result<RangeCertificate> {
    if lo > hi {
        return Err(Error::Domain(format!("empty range [{lo}, {hi}]")));
    }
    if lo < form.min_n() {
        return Err(Error::Domain(format!(
            "this form of the postulate needs n >= {}, got {lo}",
            form.min_n()
        )));
    }
    table.require(form.upper(hi) - 1)?;
    let started = Instant::now();
    let chunk = 1 << 16;
    let failures: Vec<LemmaReport> = par::map_chunks(lo, hi, chunk, jobs, |a, b| {
        scan_chunk(a, b, table, form)
    })
    .into_iter()
    .flatten()
    .collect();
    Ok(RangeCertificate::from_reports(
        Statement::BertrandRange,
        lo,
        hi,
        Method::Exact,
        failures,
        started.elapsed(),
    ))
}

fn scan_chunk(a: u64, b: u64, table: &PrimeTable, form: BertrandForm) -> Vec<LemmaReport> {
    let primes = table.primes();
    let mut idx = primes.partition_point(|&p| p <= a);
    let mut n = a;
    let mut out = Vec::new();
    while n <= b {
        // past the table end every remaining interval is known prime-free
        let q = primes.get(idx).copied().unwrap_or(u64::MAX);
        // every m in [n, min(q - 1, b)] has q as its next prime
        let last = q.saturating_sub(1).min(b);
        if q >= form.upper(n) {
            for m in n..=last {
                if q >= form.upper(m) {
                    out.push(LemmaReport::non_pass(
                        Statement::BertrandRange,
                        m,
                        Status::Fail,
                        match primes.get(idx) {
                            Some(&q) => Witness::default().value("next_prime", q),
                            None => Witness::default(),
                        },
                        Method::Exact,
                    ));
                }
            }
        }
        n = last + 1;
        idx += 1;
    }
    out
}

/// Outcome of the search for primes `p1 = 3 (mod 4)` and `p2 = 1 (mod 4)` in
/// `(n, 2n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwoPrimes {
    /// Smallest prime of each residue class.
    Found { three_mod_4: u64, one_mod_4: u64 },
    /// At least one class is empty. `guaranteed` is whether `n > 7`, i.e.
    /// whether the refinement claims a pair exists.
    Missing {
        guaranteed: bool,
        three_mod_4: Option<u64>,
        one_mod_4: Option<u64>,
    },
}

impl TwoPrimes {
    pub fn is_found(&self) -> bool {
        matches!(self, TwoPrimes::Found { .. })
    }
}

pub fn two_primes_mod4(n: u64, table: &PrimeTable) -> Result<TwoPrimes> {
    if n < 1 {
        return Err(Error::Domain("two_primes_mod4 needs n >= 1".into()));
    }
    table.require(2 * n - 1)?;
    let mut three = None;
    let mut one = None;
    for &p in table.primes_in(n, 2 * n)? {
        match p % 4 {
            3 if three.is_none() => three = Some(p),
            1 if one.is_none() => one = Some(p),
            _ => {}
        }
        if three.is_some() && one.is_some() {
            break;
        }
    }
    Ok(match (three, one) {
        (Some(three_mod_4), Some(one_mod_4)) => TwoPrimes::Found {
            three_mod_4,
            one_mod_4,
        },
        (three_mod_4, one_mod_4) => TwoPrimes::Missing {
            guaranteed: n > 7,
            three_mod_4,
            one_mod_4,
        },
    })
}

/// Checks the refinement on `[lo, hi]`. A missing pair at `n <= 7` is an
/// anomaly (outside the claim); at `n > 7` it is a failure.
pub fn verify_two_primes_range(
    lo: u64,
    hi: u64,
    table: &PrimeTable,
    jobs: usize,
) -> Result<RangeCertificate> {
    if lo > hi || lo < 1 {
        return Err(Error::Domain(format!("bad range [{lo}, {hi}]")));
    }
    table.require(2 * hi - 1)?;
    let started = Instant::now();
    let chunks = par::map_chunks(lo, hi, 4096, jobs, |a, b| -> Result<Vec<LemmaReport>> {
        let mut out = Vec::new();
        for n in a..=b {
            if let TwoPrimes::Missing {
                guaranteed,
                three_mod_4,
                one_mod_4,
            } = two_primes_mod4(n, table)?
            {
                let mut w = Witness::default();
                if let Some(p) = three_mod_4 {
                    w = w.value("three_mod_4", p);
                }
                if let Some(p) = one_mod_4 {
                    w = w.value("one_mod_4", p);
                }
                let status = if guaranteed { Status::Fail } else { Status::Anomaly };
                out.push(LemmaReport::non_pass(
                    Statement::TwoPrimesMod4,
                    n,
                    status,
                    w,
                    Method::Exact,
                ));
            }
        }
        Ok(out)
    });
    let mut reports = Vec::new();
    for c in chunks {
        reports.extend(c?);
    }
    Ok(RangeCertificate::from_reports(
        Statement::TwoPrimesMod4,
        lo,
        hi,
        Method::Exact,
        reports,
        started.elapsed(),
    ))
}

/// Primes `p1 = 2 < p2 < ... < pk` with `p(i+1) < 2 p(i)`, meant to cover
/// every `n` in `[2, coverage_target]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderChain {
    #[serde(with = "decimal::vec_u64_str")]
    pub primes: Vec<u64>,
    #[serde(with = "decimal::u64_str")]
    pub coverage_target: u64,
}

impl LadderChain {
    pub fn erdos() -> LadderChain {
        LadderChain {
            primes: ERDOS_LADDER.to_vec(),
            coverage_target: ERDOS_LADDER_TARGET,
        }
    }
}

/// Ladder from 2 that always steps to the largest prime below twice the
/// current one, stopping once the top exceeds `target`.
pub fn greedy_ladder(target: u64, table: &PrimeTable) -> Result<LadderChain> {
    if target < 2 {
        return Err(Error::Domain(format!("ladder target must be >= 2, got {target}")));
    }
    table.require(2 * target - 1)?;
    let mut primes = vec![2u64];
    let mut last = 2;
    while last <= target {
        last = table
            .prev_prime_before(2 * last)
            .filter(|&p| p > last)
            .ok_or(Error::PostulateViolation { n: last })?;
        primes.push(last);
    }
    Ok(LadderChain {
        primes,
        coverage_target: target,
    })
}

/// First defect found by [`verify_ladder`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LadderViolation {
    Empty,
    DoesNotStartAtTwo { first: u64 },
    NotPrime { index: usize, value: u64 },
    /// `primes[index]` is not strictly between `primes[index-1]` and twice it.
    Doubling { index: usize, prev: u64, value: u64 },
    /// The top of the ladder does not exceed the coverage target.
    TooShort { top: u64, target: u64 },
    /// The empirical scan found `n` with no ladder prime in `(n, 2n)`.
    Uncovered { n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LadderVerdict {
    pub violation: Option<LadderViolation>,
    /// Largest `n` checked by the empirical scan (0 if skipped).
    pub scanned_to: u64,
}

impl LadderVerdict {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks primality of each element, the doubling condition, and coverage
/// of `[2, coverage_target]`: structurally always, and by scanning each `n`
/// when the target is at most [`EMPIRICAL_SCAN_MAX`].
///
/// Elements within the table are looked up; larger ones are tested by trial
/// division.
pub fn verify_ladder(chain: &LadderChain, table: &PrimeTable) -> LadderVerdict {
    let verdict = |violation| LadderVerdict {
        violation: Some(violation),
        scanned_to: 0,
    };
    let primes = &chain.primes;
    let Some(&first) = primes.first() else {
        return verdict(LadderViolation::Empty);
    };
    if first != 2 {
        return verdict(LadderViolation::DoesNotStartAtTwo { first });
    }
    for (index, &value) in primes.iter().enumerate() {
        let prime = if value <= table.limit() {
            table.is_prime(value)
        } else {
            is_prime_trial(value)
        };
        if !prime {
            return verdict(LadderViolation::NotPrime { index, value });
        }
        if index > 0 {
            let prev = primes[index - 1];
            if value <= prev || value as u128 >= 2 * prev as u128 {
                return verdict(LadderViolation::Doubling { index, prev, value });
            }
        }
    }
    let top = *primes.last().unwrap();
    let target = chain.coverage_target;
    if top <= target {
        return verdict(LadderViolation::TooShort { top, target });
    }
    if target > EMPIRICAL_SCAN_MAX {
        return LadderVerdict {
            violation: None,
            scanned_to: 0,
        };
    }
    // for each n, the smallest ladder prime above n must be below 2n
    let mut j = 0;
    for n in 2..=target {
        while primes[j] <= n {
            j += 1;
        }
        if primes[j] as u128 >= 2 * n as u128 {
            return verdict(LadderViolation::Uncovered { n });
        }
    }
    LadderVerdict {
        violation: None,
        scanned_to: target,
    }
}
