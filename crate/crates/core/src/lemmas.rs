//! Per-`n` checkers for the lemmas of the elementary Bertrand proof and the
//! range driver that runs them over intervals.
//!
//! Each checker is exact below a configurable threshold. Above it, the
//! Chebyshev and lower bounds fall back to fixed-point logarithms rounded
//! outward: the large side of the inequality is rounded up and the small
//! side down, so a pass is a proof and a fail only means "not proven at
//! this precision".

use std::sync::OnceLock;
use std::time::Instant;

use crate::bignat::{central_binomial_within, primorial, BigNat};
use crate::certified::{log2_bounds, units, DEFAULT_FRAC_BITS, MAX_FRAC_BITS};
use crate::error::{Error, Result};
use crate::par;
use crate::primes::PrimeTable;
use crate::report::{LemmaId, LemmaReport, Method, RangeCertificate, Statement, Status, Witness};
use crate::valuations::{b_unchecked, ilog_floor};

/// Thresholds and precision for [`Verifier`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    /// Largest `n` for which the Chebyshev bound materializes the primorial.
    pub exact_primorial_max: u64,
    /// Largest `n` for which the lower bound materializes `binom(2n, n)`.
    pub exact_binomial_max: u64,
    /// Fractional bits of the fixed-point logarithms.
    pub frac_bits: u32,
    /// `n` values per work chunk in [`Verifier::check_range`].
    pub chunk: u64,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig {
            exact_primorial_max: 10_000,
            exact_binomial_max: 10_000,
            frac_bits: DEFAULT_FRAC_BITS,
            chunk: 512,
        }
    }
}

/// Largest prime the table must contain to check `lemma` at `n`.
pub fn required_limit(lemma: LemmaId, n: u64) -> u64 {
    match lemma {
        LemmaId::ChebyshevBound => n,
        LemmaId::FinalInequality => 2,
        _ => 2 * n,
    }
}

/// `ceil(sqrt(m))`.
pub fn ceil_sqrt(m: u64) -> u64 {
    let r = m.isqrt();
    if r * r == m {
        r
    } else {
        r + 1
    }
}

/// Integer exponents of the rounded-up crossover inequality
/// `2^(2n) >= 2n * (2n)^ceil(sqrt(2n)) * 4^ceil(2n/3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossoverTerms {
    /// `ceil(sqrt(2n))`
    pub sqrt_exp: u64,
    /// `ceil(2n/3)`
    pub third_exp: u64,
}

impl CrossoverTerms {
    pub fn new(n: u64) -> CrossoverTerms {
        CrossoverTerms {
            sqrt_exp: ceil_sqrt(2 * n),
            third_exp: (2 * n).div_ceil(3),
        }
    }

    /// `2n - 2 ceil(2n/3)`: the power of two left after cancelling `4^ceil(2n/3)`.
    pub fn spare_bits(&self, n: u64) -> i128 {
        2 * n as i128 - 2 * self.third_exp as i128
    }
}

/// Decides the rounded-up crossover inequality by exact big-integer
/// comparison: `2^(2n - 2 ceil(2n/3)) >= (2n)^(1 + ceil(sqrt(2n)))`.
pub fn final_inequality_exact(n: u64) -> bool {
    let t = CrossoverTerms::new(n);
    let spare = t.spare_bits(n);
    if spare < 0 {
        return false;
    }
    BigNat::pow2(spare as u64) >= BigNat::from(2 * n).pow(1 + t.sqrt_exp)
}

/// Lemma checker bound to a prime table.
pub struct Verifier<'t> {
    table: &'t PrimeTable,
    config: VerifyConfig,
    // prefix sums of upper log2 bounds over the tabled primes
    log_hi_prefix: OnceLock<Vec<u128>>,
    // lower log2 bound of each tabled prime
    log_lo: OnceLock<Vec<u128>>,
}

impl<'t> Verifier<'t> {
    pub fn new(table: &'t PrimeTable) -> Verifier<'t> {
        Verifier::with_config(table, VerifyConfig::default())
    }

    pub fn with_config(table: &'t PrimeTable, config: VerifyConfig) -> Verifier<'t> {
        assert!(config.frac_bits <= MAX_FRAC_BITS, "frac_bits above {MAX_FRAC_BITS}");
        assert!(config.chunk > 0);
        Verifier {
            table,
            config,
            log_hi_prefix: OnceLock::new(),
            log_lo: OnceLock::new(),
        }
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    pub fn table(&self) -> &'t PrimeTable {
        self.table
    }

    fn log_hi_prefix(&self) -> &[u128] {
        self.log_hi_prefix.get_or_init(|| {
            let k = self.config.frac_bits;
            let mut acc = 0u128;
            let mut out = Vec::with_capacity(self.table.primes().len() + 1);
            out.push(0);
            for &p in self.table.primes() {
                acc += log2_bounds(p, k).hi;
                out.push(acc);
            }
            out
        })
    }

    fn log_lo(&self) -> &[u128] {
        self.log_lo.get_or_init(|| {
            let k = self.config.frac_bits;
            self.table
                .primes()
                .iter()
                .map(|&p| log2_bounds(p, k).lo)
                .collect()
        })
    }

    fn need(&self, lemma: LemmaId, n: u64) -> Result<()> {
        self.table.require(required_limit(lemma, n))
    }

    /// Dispatches to the checker for `lemma`.
    pub fn check(&self, lemma: LemmaId, n: u64) -> Result<LemmaReport> {
        match lemma {
            LemmaId::ChebyshevBound => self.check_chebyshev(n),
            LemmaId::PbLe2n => self.check_pb_le_2n(n),
            LemmaId::BLe1 => self.check_b_le_1(n),
            LemmaId::BEq0 => self.check_b_eq_0(n),
            LemmaId::LowerBound => self.check_lower_bound(n),
            LemmaId::FinalInequality => self.check_final_inequality(n),
        }
    }

    /// Chebyshev bound: `prod_{p <= n} p <= 4^n`.
    pub fn check_chebyshev(&self, n: u64) -> Result<LemmaReport> {
        let method = if n <= self.config.exact_primorial_max {
            Method::Exact
        } else {
            Method::CertifiedRounding
        };
        self.check_chebyshev_by(n, method)
    }

    pub fn check_chebyshev_by(&self, n: u64, method: Method) -> Result<LemmaReport> {
        if n < 2 {
            return Err(Error::Domain(format!("Chebyshev bound needs n >= 2, got {n}")));
        }
        self.need(LemmaId::ChebyshevBound, n)?;
        Ok(match method {
            Method::Exact => chebyshev_exact(n, &primorial(n, self.table)?),
            Method::CertifiedRounding => {
                let sum_hi = self.log_hi_prefix()[self.table.count_le(n)];
                let bound = units(2 * n, self.config.frac_bits);
                if sum_hi <= bound {
                    LemmaReport::pass(Statement::ChebyshevBound, n, method)
                } else {
                    LemmaReport::non_pass(
                        Statement::ChebyshevBound,
                        n,
                        Status::Fail,
                        Witness::default()
                            .value("log2_primorial_hi_units", sum_hi)
                            .value("log2_bound_units", bound)
                            .value("frac_bits", self.config.frac_bits),
                        method,
                    )
                }
            }
        })
    }

    /// Valuation bound: `p^b(n,p) <= 2n` for every prime `p <= 2n`.
    pub fn check_pb_le_2n(&self, n: u64) -> Result<LemmaReport> {
        if n < 1 {
            return Err(Error::Domain("pb_le_2n needs n >= 1".into()));
        }
        self.need(LemmaId::PbLe2n, n)?;
        let two_n = 2 * n;
        for &p in self.table.primes_le(two_n) {
            let b = b_unchecked(n, p);
            if b > ilog_floor(two_n, p) {
                let shown = BigNat::from(p).pow(b);
                return Ok(LemmaReport::non_pass(
                    Statement::PbLe2n,
                    n,
                    Status::Fail,
                    Witness::at_prime(p).value("b", b).value("p_pow_b", shown),
                    Method::Exact,
                ));
            }
        }
        Ok(LemmaReport::pass(Statement::PbLe2n, n, Method::Exact))
    }

    /// Large primes: `b(n,p) <= 1` for every prime `p` with `p^2 > 2n`, `p <= 2n`.
    pub fn check_b_le_1(&self, n: u64) -> Result<LemmaReport> {
        if n < 1 {
            return Err(Error::Domain("b_le_1 needs n >= 1".into()));
        }
        self.need(LemmaId::BLe1, n)?;
        let two_n = 2 * n;
        let first = self.table.count_le((two_n).isqrt());
        for &p in &self.table.primes_le(two_n)[first..] {
            let b = b_unchecked(n, p);
            if b > 1 {
                return Ok(LemmaReport::non_pass(
                    Statement::BLe1,
                    n,
                    Status::Fail,
                    Witness::at_prime(p).value("b", b),
                    Method::Exact,
                ));
            }
        }
        Ok(LemmaReport::pass(Statement::BLe1, n, Method::Exact))
    }

    /// Middle third: `b(n,p) = 0` for every prime `p` with `2n/3 < p <= n`.
    ///
    /// Holds for `n >= 3`. At `n = 2` the prime 2 divides `binom(4,2) = 6`
    /// once; that case is reported as an anomaly rather than a failure.
    pub fn check_b_eq_0(&self, n: u64) -> Result<LemmaReport> {
        if n < 1 {
            return Err(Error::Domain("b_eq_0 needs n >= 1".into()));
        }
        self.need(LemmaId::BEq0, n)?;
        let two_n = 2 * n;
        // first prime p with 3p > 2n
        let start = self.table.count_le(two_n / 3);
        for &p in &self.table.primes_le(n)[start.min(self.table.count_le(n))..] {
            let b = b_unchecked(n, p);
            if b != 0 {
                let status = if n == 2 { Status::Anomaly } else { Status::Fail };
                return Ok(LemmaReport::non_pass(
                    Statement::BEq0,
                    n,
                    status,
                    Witness::at_prime(p).value("b", b),
                    Method::Exact,
                ));
            }
        }
        Ok(LemmaReport::pass(Statement::BEq0, n, Method::Exact))
    }

    /// Lower bound: `2n binom(2n, n) > 2^(2n)`. Fails at `n = 1`, where both
    /// sides equal 4.
    pub fn check_lower_bound(&self, n: u64) -> Result<LemmaReport> {
        let method = if n <= self.config.exact_binomial_max {
            Method::Exact
        } else {
            Method::CertifiedRounding
        };
        self.check_lower_bound_by(n, method)
    }

    pub fn check_lower_bound_by(&self, n: u64, method: Method) -> Result<LemmaReport> {
        if n < 1 {
            return Err(Error::Domain("lower_bound needs n >= 1".into()));
        }
        self.need(LemmaId::LowerBound, n)?;
        Ok(match method {
            Method::Exact => {
                let c = central_binomial_within(n, n.max(self.config.exact_binomial_max))?;
                lower_bound_exact(n, &c)
            }
            Method::CertifiedRounding => {
                let k = self.config.frac_bits;
                let lo = self.log_lo();
                let primes = self.table.primes_le(2 * n);
                let mut sum_lo = log2_bounds(2 * n, k).lo;
                for (i, &p) in primes.iter().enumerate() {
                    sum_lo += b_unchecked(n, p) as u128 * lo[i];
                }
                let bound = units(2 * n, k);
                if sum_lo > bound {
                    LemmaReport::pass(Statement::LowerBound, n, method)
                } else {
                    LemmaReport::non_pass(
                        Statement::LowerBound,
                        n,
                        Status::Fail,
                        Witness::default()
                            .value("log2_lhs_lo_units", sum_lo)
                            .value("log2_rhs_units", bound)
                            .value("frac_bits", k),
                        method,
                    )
                }
            }
        })
    }

    /// The crossover inequality
    /// `2^(2n) >= 2n * (2n)^sqrt(2n) * 4^(2n/3)`, certified through the
    /// rounded-up right-hand side `2n * (2n)^ceil(sqrt(2n)) * 4^ceil(2n/3)`
    /// with `log2(2n)` bounded from above.
    pub fn check_final_inequality(&self, n: u64) -> Result<LemmaReport> {
        if n < 2 {
            return Err(Error::Domain(format!("crossover inequality needs n >= 2, got {n}")));
        }
        let k = self.config.frac_bits;
        let t = CrossoverTerms::new(n);
        let spare = t.spare_bits(n);
        let rhs = (1 + t.sqrt_exp) as u128 * log2_bounds(2 * n, k).hi;
        let method = Method::CertifiedRounding;
        if spare >= 0 && rhs <= units(spare as u64, k) {
            return Ok(LemmaReport::pass(Statement::FinalInequality, n, method));
        }
        Ok(LemmaReport::non_pass(
            Statement::FinalInequality,
            n,
            Status::Fail,
            Witness::default()
                .value("ceil_sqrt_2n", t.sqrt_exp)
                .value("ceil_2n_over_3", t.third_exp)
                .value("spare_bits", spare)
                .value("log2_rhs_hi_units", rhs)
                .value("frac_bits", k),
            method,
        ))
    }

    /// Runs `lemma` over every `n` in `[n_lo, n_hi]` on `jobs` workers.
    /// The result does not depend on `jobs` apart from `elapsed`.
    pub fn check_range(
        &self,
        lemma: LemmaId,
        n_lo: u64,
        n_hi: u64,
        jobs: usize,
    ) -> Result<RangeCertificate> {
        if n_lo > n_hi {
            return Err(Error::Domain(format!("empty range [{n_lo}, {n_hi}]")));
        }
        let min_n = match lemma {
            LemmaId::ChebyshevBound | LemmaId::FinalInequality => 2,
            _ => 1,
        };
        if n_lo < min_n {
            return Err(Error::Domain(format!("{lemma} needs n >= {min_n}, got {n_lo}")));
        }
        self.need(lemma, n_hi)?;
        let started = Instant::now();

        let chunks = par::map_chunks(n_lo, n_hi, self.config.chunk, jobs, |a, b| {
            self.check_chunk(lemma, a, b)
        });
        let mut method = Method::Exact;
        let mut non_pass = Vec::new();
        for chunk in chunks {
            let (m, reports) = chunk?;
            method = method.combine(m);
            non_pass.extend(reports);
        }
        Ok(RangeCertificate::from_reports(
            lemma.statement(),
            n_lo,
            n_hi,
            method,
            non_pass,
            started.elapsed(),
        ))
    }

    fn check_chunk(&self, lemma: LemmaId, a: u64, b: u64) -> Result<(Method, Vec<LemmaReport>)> {
        let mut method = Method::Exact;
        let mut out = Vec::new();
        let mut keep = |r: LemmaReport| {
            method = method.combine(r.method);
            if !r.is_pass() {
                out.push(r);
            }
        };
        match lemma {
            // exact parts carry the primorial / binomial from n to n + 1
            LemmaId::ChebyshevBound => {
                let exact_hi = b.min(self.config.exact_primorial_max);
                if a <= exact_hi {
                    let mut prod = primorial(a, self.table)?;
                    for n in a..=exact_hi {
                        if n > a && self.table.is_prime(n) {
                            prod = prod.mul_small(n);
                        }
                        keep(chebyshev_exact(n, &prod));
                    }
                }
                for n in a.max(exact_hi + 1)..=b {
                    keep(self.check_chebyshev(n)?);
                }
            }
            LemmaId::LowerBound => {
                let exact_hi = b.min(self.config.exact_binomial_max);
                if a <= exact_hi {
                    let mut c = central_binomial_within(a, a.max(self.config.exact_binomial_max))?;
                    for n in a..=exact_hi {
                        if n > a {
                            // binom(2n, n) = binom(2n-2, n-1) * 2(2n-1) / n
                            c = c.mul_small(2 * (2 * n - 1)).div_exact_small(n)?;
                        }
                        keep(lower_bound_exact(n, &c));
                    }
                }
                for n in a.max(exact_hi + 1)..=b {
                    keep(self.check_lower_bound(n)?);
                }
            }
            _ => {
                for n in a..=b {
                    keep(self.check(lemma, n)?);
                }
            }
        }
        Ok((method, out))
    }

    /// Smallest `n0` in `[lo, hi]` such that the crossover inequality is
    /// certified for every `n` in `[n0, hi]`; `None` if it fails at `hi`.
    pub fn crossover_sweep(&self, lo: u64, hi: u64, jobs: usize) -> Result<Option<u64>> {
        let cert = self.check_range(LemmaId::FinalInequality, lo, hi, jobs)?;
        Ok(match cert.failures.last() {
            None => Some(lo),
            Some(r) if r.n == hi => None,
            Some(r) => Some(r.n + 1),
        })
    }
}

fn chebyshev_exact(n: u64, primorial: &BigNat) -> LemmaReport {
    let bound = BigNat::pow2(2 * n);
    if *primorial <= bound {
        LemmaReport::pass(Statement::ChebyshevBound, n, Method::Exact)
    } else {
        LemmaReport::non_pass(
            Statement::ChebyshevBound,
            n,
            Status::Fail,
            Witness::default()
                .value("primorial", primorial)
                .value("four_pow_n", bound),
            Method::Exact,
        )
    }
}

fn lower_bound_exact(n: u64, binom: &BigNat) -> LemmaReport {
    let lhs = binom.mul_small(2 * n);
    let rhs = BigNat::pow2(2 * n);
    if lhs > rhs {
        LemmaReport::pass(Statement::LowerBound, n, Method::Exact)
    } else {
        LemmaReport::non_pass(
            Statement::LowerBound,
            n,
            Status::Fail,
            Witness::default()
                .value("two_n_binom", lhs)
                .value("four_pow_n", rhs),
            Method::Exact,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_build;

    fn table() -> PrimeTable {
        sieve_build(25_000).unwrap()
    }

    #[test]
    fn chebyshev_examples() {
        let t = table();
        let v = Verifier::new(&t);
        for n in [2, 10, 10_000] {
            let r = v.check_chebyshev(n).unwrap();
            assert_eq!((r.status, r.method), (Status::Pass, Method::Exact), "n={n}");
        }
        assert_eq!(v.check_chebyshev(10_001).unwrap().method, Method::CertifiedRounding);
        assert!(v.check_chebyshev(1).is_err());
        assert!(matches!(v.check_chebyshev(25_001), Err(Error::Coverage { .. })));
    }

    #[test]
    fn valuation_bound_examples() {
        let t = table();
        let v = Verifier::new(&t);
        for n in [1, 5, 1000] {
            assert!(v.check_pb_le_2n(n).unwrap().is_pass());
        }
        for n in [2, 5, 1000] {
            assert!(v.check_b_le_1(n).unwrap().is_pass());
        }
    }

    #[test]
    fn middle_third_anomaly_at_two() {
        let t = table();
        let v = Verifier::new(&t);
        let r = v.check_b_eq_0(2).unwrap();
        assert_eq!(r.status, Status::Anomaly);
        let w = r.witness.unwrap();
        assert_eq!(w.p, Some(2));
        assert_eq!(w.values["b"], "1");
        assert!(v.check_b_eq_0(10).unwrap().is_pass());
        assert!(v.check_b_eq_0(4).unwrap().is_pass());
        assert!(v.check_b_eq_0(3).unwrap().is_pass());
        assert!(v.check_b_eq_0(1).unwrap().is_pass());
    }

    #[test]
    fn lower_bound_examples() {
        let t = table();
        let v = Verifier::new(&t);
        let r = v.check_lower_bound(1).unwrap();
        assert_eq!(r.status, Status::Fail);
        let w = r.witness.unwrap();
        assert_eq!((w.values["two_n_binom"].as_str(), w.values["four_pow_n"].as_str()), ("4", "4"));
        assert!(v.check_lower_bound(2).unwrap().is_pass());
        assert!(v.check_lower_bound(100).unwrap().is_pass());
        let r = v.check_lower_bound_by(1, Method::CertifiedRounding).unwrap();
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn crossover_examples() {
        let t = table();
        let v = Verifier::new(&t);
        assert!(v.check_final_inequality(4000).unwrap().is_pass());
        let r = v.check_final_inequality(2).unwrap();
        assert_eq!((r.status, r.method), (Status::Fail, Method::CertifiedRounding));
        assert!(v.check_final_inequality(1).is_err());
    }

    #[test]
    fn range_examples() {
        let t = table();
        let v = Verifier::new(&t);
        let c = v.check_range(LemmaId::BEq0, 2, 100, 4).unwrap();
        assert!(!c.all_pass);
        assert!(c.holds());
        assert_eq!(c.anomalies.len(), 1);
        assert_eq!(c.anomalies[0].n, 2);
        assert!(v.check_range(LemmaId::LowerBound, 2, 2, 1).unwrap().all_pass);
        assert!(v.check_range(LemmaId::LowerBound, 3, 2, 1).is_err());
        assert!(v.check_range(LemmaId::ChebyshevBound, 1, 2, 1).is_err());
    }

    #[test]
    fn chunked_range_matches_per_n() {
        let t = table();
        let cfg = VerifyConfig {
            exact_primorial_max: 700,
            exact_binomial_max: 700,
            chunk: 37,
            ..VerifyConfig::default()
        };
        let v = Verifier::with_config(&t, cfg);
        for lemma in LemmaId::ALL {
            let lo = if lemma == LemmaId::LowerBound { 1 } else { 2 };
            let cert = v.check_range(lemma, lo, 1200, 3).unwrap();
            let per_n: Vec<_> = (lo..=1200)
                .map(|n| v.check(lemma, n).unwrap())
                .filter(|r| !r.is_pass())
                .collect();
            let mut got: Vec<_> = cert.anomalies.iter().chain(&cert.failures).cloned().collect();
            got.sort_by_key(|r| r.n);
            assert_eq!(got, per_n, "{lemma}");
        }
    }

    #[test]
    fn ceil_sqrt_values() {
        assert_eq!(ceil_sqrt(0), 0);
        assert_eq!(ceil_sqrt(1), 1);
        assert_eq!(ceil_sqrt(8000), 90);
        assert_eq!(ceil_sqrt(8100), 90);
        assert_eq!(ceil_sqrt(8101), 91);
    }
}
