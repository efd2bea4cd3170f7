//! Prime generation, primality queries and factorization.
//!
//! [`PrimeTable`] is produced by a segmented, odd-only sieve of Eratosthenes.
//! Bit `i` of the membership bitset stands for the odd number `2i + 1`; the
//! table is immutable once built and can be shared freely between workers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bignat::BigNat;
use crate::error::{Error, Result};

/// Odd entries processed per sieve segment.
pub const SEGMENT_ENTRIES: usize = 1 << 18;

/// Largest limit accepted by [`sieve_build`] unless a budget is given.
pub const DEFAULT_MAX_LIMIT: u64 = 1_000_000_000;

/// All primes up to an inclusive limit.
#[derive(Clone)]
pub struct PrimeTable {
    limit: u64,
    odd_bits: Vec<u64>,
    primes: Vec<u64>,
}

impl fmt::Debug for PrimeTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PrimeTable")
            .field("limit", &self.limit)
            .field("count", &self.primes.len())
            .finish()
    }
}

/// Builds the table of primes `<= limit` with the default memory budget.
pub fn sieve_build(limit: u64) -> Result<PrimeTable> {
    sieve_build_with_budget(limit, DEFAULT_MAX_LIMIT)
}

pub fn sieve_build_with_budget(limit: u64, max_limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::Domain(format!("sieve limit must be >= 2, got {limit}")));
    }
    if limit > max_limit {
        return Err(Error::Resource(format!(
            "sieve limit {limit} exceeds budget {max_limit}"
        )));
    }

    // odd numbers 1, 3, ..., <= limit
    let odd_count = limit.div_ceil(2) as usize;
    let mut odd_bits = vec![!0u64; odd_count.div_ceil(64)];
    let tail = odd_count % 64;
    if tail != 0 {
        *odd_bits.last_mut().unwrap() = (1u64 << tail) - 1;
    }
    // 1 is not prime
    odd_bits[0] &= !1;

    let base = small_odd_primes(limit.isqrt());
    // next odd index to strike for each base prime
    let mut next: Vec<usize> = base.iter().map(|&p| ((p * p) / 2) as usize).collect();

    let mut seg_lo = 0usize;
    while seg_lo < odd_count {
        let seg_hi = (seg_lo + SEGMENT_ENTRIES).min(odd_count);
        for (&p, cursor) in base.iter().zip(next.iter_mut()) {
            let step = p as usize;
            let mut i = *cursor;
            while i < seg_hi {
                odd_bits[i >> 6] &= !(1u64 << (i & 63));
                i += step;
            }
            *cursor = i;
        }
        seg_lo = seg_hi;
    }

    let mut primes = Vec::with_capacity(prime_count_estimate(limit));
    primes.push(2);
    for (w, &word) in odd_bits.iter().enumerate() {
        let mut bits = word;
        while bits != 0 {
            let i = w * 64 + bits.trailing_zeros() as usize;
            primes.push(2 * i as u64 + 1);
            bits &= bits - 1;
        }
    }

    Ok(PrimeTable {
        limit,
        odd_bits,
        primes,
    })
}

fn small_odd_primes(limit: u64) -> Vec<u64> {
    if limit < 3 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for k in (3..=n).step_by(2) {
        if !composite[k] {
            out.push(k as u64);
            let mut m = k * k;
            while m <= n {
                composite[m] = true;
                m += 2 * k;
            }
        }
    }
    out
}

fn prime_count_estimate(limit: u64) -> usize {
    if limit < 100 {
        return 32;
    }
    let x = limit as f64;
    (1.26 * x / x.ln()) as usize
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primes `<= limit`, strictly increasing.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Membership query. Values above the limit are reported as not prime;
    /// use [`PrimeTable::require`] first when that distinction matters.
    pub fn is_prime(&self, k: u64) -> bool {
        if k > self.limit || k < 2 {
            return false;
        }
        if k.is_multiple_of(2) {
            return k == 2;
        }
        let i = (k / 2) as usize;
        self.odd_bits[i >> 6] >> (i & 63) & 1 == 1
    }

    /// Fails with a coverage error unless the table reaches `needed`.
    pub fn require(&self, needed: u64) -> Result<()> {
        if needed > self.limit {
            Err(Error::Coverage {
                needed,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }

    /// Number of primes `<= x` (x clamped to the table limit).
    pub fn count_le(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// Primes `<= x`.
    pub fn primes_le(&self, x: u64) -> &[u64] {
        &self.primes[..self.count_le(x)]
    }

    /// Primes in the open interval `(lo, hi)`. Requires `hi <= limit + 1`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<&[u64]> {
        self.require(hi.saturating_sub(1))?;
        if hi <= lo.saturating_add(1) {
            return Ok(&[]);
        }
        let a = self.primes.partition_point(|&p| p <= lo);
        let b = self.primes.partition_point(|&p| p < hi);
        Ok(&self.primes[a..b])
    }

    /// Smallest tabled prime strictly greater than `x`.
    pub fn next_prime_after(&self, x: u64) -> Option<u64> {
        let i = self.primes.partition_point(|&p| p <= x);
        self.primes.get(i).copied()
    }

    /// Largest tabled prime strictly less than `x`.
    pub fn prev_prime_before(&self, x: u64) -> Option<u64> {
        let i = self.primes.partition_point(|&p| p < x);
        i.checked_sub(1).map(|j| self.primes[j])
    }

    /// Trial division by tabled primes; requires `limit^2 >= n`.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n < 2 {
            return Err(Error::Domain(format!("factorize needs n >= 2, got {n}")));
        }
        let lim2 = (self.limit as u128) * (self.limit as u128);
        if (n as u128) > lim2 {
            return Err(Error::Coverage {
                needed: n.isqrt() + 1,
                limit: self.limit,
            });
        }
        let mut m = n;
        let mut factors = Vec::new();
        for &p in &self.primes {
            if p * p > m {
                break;
            }
            if m.is_multiple_of(p) {
                let mut e = 0;
                while m.is_multiple_of(p) {
                    m /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
        }
        if m > 1 {
            factors.push((m, 1));
        }
        Ok(Factorization { factors })
    }

    /// Sum of prime factors of `n >= 2`.
    pub fn sopf(&self, n: u64, mode: SopfMode) -> Result<u64> {
        let f = self.factorize(n)?;
        Ok(match mode {
            SopfMode::WithMultiplicity => f.factors.iter().map(|&(p, e)| p * e as u64).sum(),
            SopfMode::Distinct => f.factors.iter().map(|&(p, _)| p).sum(),
        })
    }

    /// Sum of all positive divisors of `n >= 1`.
    pub fn sigma(&self, n: u64) -> Result<u128> {
        if n == 0 {
            return Err(Error::Domain("sigma(0) is undefined".into()));
        }
        if n == 1 {
            return Ok(1);
        }
        Ok(self.factorize(n)?.sigma())
    }
}

/// Deterministic trial-division primality test.
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) || n.is_multiple_of(3) {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Which prime-factor sum to use for Ruth–Aaron style comparisons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SopfMode {
    WithMultiplicity,
    Distinct,
}

impl fmt::Display for SopfMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SopfMode::WithMultiplicity => "with_multiplicity",
            SopfMode::Distinct => "distinct",
        })
    }
}

/// Prime-power factorization, primes ascending and distinct, exponents >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds from raw pairs, dropping zero exponents and merging duplicates.
    pub fn from_pairs(mut pairs: Vec<(u64, u32)>) -> Factorization {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable_by_key(|&(p, _)| p);
        let mut factors: Vec<(u64, u32)> = Vec::with_capacity(pairs.len());
        for (p, e) in pairs {
            match factors.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => factors.push((p, e)),
            }
        }
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// The represented integer, exactly.
    pub fn value(&self) -> BigNat {
        BigNat::product(self.factors.iter().map(|&(p, e)| BigNat::from(p).pow(e as u64)))
    }

    /// Divisor sum via the multiplicative formula. Fits u128 for any u64 input.
    pub fn sigma(&self) -> u128 {
        self.factors
            .iter()
            .map(|&(p, e)| {
                let p = p as u128;
                let mut term = 1u128;
                let mut pk = 1u128;
                for _ in 0..e {
                    pk *= p;
                    term += pk;
                }
                term
            })
            .product()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, &(p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_tables() {
        assert_eq!(sieve_build(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(
            sieve_build(30).unwrap().primes(),
            &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
        );
        assert_eq!(sieve_build(2).unwrap().primes(), &[2]);
        assert_eq!(sieve_build(3).unwrap().primes(), &[2, 3]);
    }

    #[test]
    fn sieve_rejects_bad_limits() {
        assert!(matches!(sieve_build(1), Err(Error::Domain(_))));
        assert!(matches!(
            sieve_build_with_budget(1000, 999),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn segment_boundaries_are_seamless() {
        // a limit spanning several segments
        let limit = 3 * 2 * SEGMENT_ENTRIES as u64 + 17;
        let t = sieve_build(limit).unwrap();
        for k in (2 * SEGMENT_ENTRIES as u64 - 200)..(2 * SEGMENT_ENTRIES as u64 + 200) {
            assert_eq!(t.is_prime(k), is_prime_trial(k), "k = {k}");
        }
        assert_eq!(*t.primes().last().unwrap(), t.prev_prime_before(limit + 1).unwrap());
    }

    #[test]
    fn open_interval_queries() {
        let t = sieve_build(100).unwrap();
        assert_eq!(t.primes_in(3, 6).unwrap(), &[5]);
        assert_eq!(t.primes_in(13, 26).unwrap(), &[17, 19, 23]);
        assert_eq!(t.primes_in(8, 16).unwrap(), &[11, 13]);
        assert_eq!(t.primes_in(5, 5).unwrap(), &[] as &[u64]);
        assert_eq!(t.primes_in(96, 101).unwrap(), &[97]);
        assert!(matches!(t.primes_in(50, 102), Err(Error::Coverage { .. })));
    }

    #[test]
    fn factorize_examples() {
        let t = sieve_build(100).unwrap();
        assert_eq!(t.factorize(252).unwrap().factors(), &[(2, 2), (3, 2), (7, 1)]);
        assert_eq!(
            t.factorize(714).unwrap().factors(),
            &[(2, 1), (3, 1), (7, 1), (17, 1)]
        );
        assert_eq!(t.factorize(7).unwrap().factors(), &[(7, 1)]);
        // 9973 is prime and above the table limit but within limit^2
        assert_eq!(t.factorize(9973).unwrap().factors(), &[(9973, 1)]);
        assert!(matches!(t.factorize(10_001), Err(Error::Coverage { .. })));
        assert!(matches!(t.factorize(1), Err(Error::Domain(_))));
    }

    #[test]
    fn sopf_examples() {
        let t = sieve_build(100).unwrap();
        assert_eq!(t.sopf(714, SopfMode::WithMultiplicity).unwrap(), 29);
        assert_eq!(t.sopf(8, SopfMode::WithMultiplicity).unwrap(), 6);
        assert_eq!(t.sopf(8, SopfMode::Distinct).unwrap(), 2);
        assert_eq!(t.sopf(7, SopfMode::WithMultiplicity).unwrap(), 7);
        assert_eq!(t.sopf(7, SopfMode::Distinct).unwrap(), 7);
    }

    #[test]
    fn sigma_examples() {
        let t = sieve_build(100).unwrap();
        assert_eq!(t.sigma(12).unwrap(), 28);
        assert_eq!(t.sigma(1).unwrap(), 1);
        assert_eq!(t.sigma(945).unwrap(), 1920);
        assert!(t.sigma(0).is_err());
    }

    #[test]
    fn factorization_display_and_merge() {
        let f = Factorization::from_pairs(vec![(3, 1), (2, 1), (3, 1), (5, 0), (2, 2)]);
        assert_eq!(f.factors(), &[(2, 3), (3, 2)]);
        assert_eq!(f.to_string(), "2^3·3^2");
        assert_eq!(f.value().to_string(), "72");
        assert_eq!(f.exponent_of(5), 0);
    }
}
