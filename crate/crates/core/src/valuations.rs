//! Legendre valuations and the prime-range decomposition of `binom(2n, n)`.
//!
//! `b(n, p)` denotes the exponent of `p` in `binom(2n, n)`. It is computed
//! digit-free from Legendre's formula as `sum_i floor(2n/p^i) - 2 floor(n/p^i)`,
//! where every summand is 0 or 1 and the sum stops at the first `p^i > 2n`.

use serde::{Deserialize, Serialize};

use crate::bignat::BigNat;
use crate::error::{Error, Result};
use crate::primes::{is_prime_trial, Factorization, PrimeTable};

fn ensure_prime(p: u64) -> Result<()> {
    if is_prime_trial(p) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{p} is not prime")))
    }
}

/// Exponent of the prime `p` in `n!`.
pub fn legendre_valuation(n: u64, p: u64) -> Result<u64> {
    ensure_prime(p)?;
    Ok(legendre_unchecked(n, p))
}

pub(crate) fn legendre_unchecked(n: u64, p: u64) -> u64 {
    let mut total = 0;
    let mut m = n / p;
    while m > 0 {
        total += m;
        m /= p;
    }
    total
}

/// Exponent `b(n, p)` of the prime `p` in `binom(2n, n)`.
pub fn central_binom_valuation(n: u64, p: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Domain("central_binom_valuation needs n >= 1".into()));
    }
    ensure_prime(p)?;
    Ok(b_unchecked(n, p))
}

/// `b(n, p)` without the primality check; callers pass tabled primes.
#[inline]
pub(crate) fn b_unchecked(n: u64, p: u64) -> u64 {
    binom_valuation_terms(n, p).sum()
}

/// The Legendre summands `floor(2n/p^i) - 2 floor(n/p^i)` for `i = 1, 2, ...`
/// while `p^i <= 2n`.
pub fn binom_valuation_terms(n: u64, p: u64) -> impl Iterator<Item = u64> {
    let two_n = 2 * n;
    let mut pk = Some(p);
    std::iter::from_fn(move || {
        let q = pk.filter(|&q| q <= two_n)?;
        pk = q.checked_mul(p);
        let term = two_n / q - 2 * (n / q);
        debug_assert!(term <= 1, "summand {term} at n={n}, p^i={q}");
        Some(term)
    })
}

/// Largest `e` with `p^e <= x`, for `p >= 2`, `x >= 1`.
pub(crate) fn ilog_floor(x: u64, p: u64) -> u64 {
    let mut e = 0;
    let mut pk: u64 = 1;
    while let Some(next) = pk.checked_mul(p) {
        if next > x {
            break;
        }
        pk = next;
        e += 1;
    }
    e
}

/// `n`, `p` together with `a(n, p) = v_p(n!)` and `b(n, p) = v_p(binom(2n, n))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationRecord {
    pub n: u64,
    pub p: u64,
    pub a_n: u64,
    pub b: u64,
}

impl ValuationRecord {
    pub fn new(n: u64, p: u64) -> Result<ValuationRecord> {
        if n == 0 {
            return Err(Error::Domain("valuation record needs n >= 1".into()));
        }
        ensure_prime(p)?;
        Ok(ValuationRecord {
            n,
            p,
            a_n: legendre_unchecked(n, p),
            b: b_unchecked(n, p),
        })
    }

    /// `b = a(2n) - 2 a(n)` and `p^b <= 2n`.
    pub fn holds(&self) -> bool {
        let a_2n = legendre_unchecked(2 * self.n, self.p);
        a_2n >= 2 * self.a_n
            && self.b == a_2n - 2 * self.a_n
            && self.b <= ilog_floor(2 * self.n, self.p)
    }
}

/// Which of the four prime ranges a prime `p < 2n` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeRange {
    /// `p <= sqrt(2n)`
    Small,
    /// `sqrt(2n) < p <= 2n/3`
    Middle,
    /// `2n/3 < p <= n`
    UpperThird,
    /// `n < p < 2n`
    Top,
}

impl PrimeRange {
    pub const ALL: [PrimeRange; 4] = [
        PrimeRange::Small,
        PrimeRange::Middle,
        PrimeRange::UpperThird,
        PrimeRange::Top,
    ];

    /// Classification by exact integer comparisons; `None` when `p >= 2n`.
    pub fn classify(n: u64, p: u64) -> Option<PrimeRange> {
        let two_n = 2 * n;
        if p >= two_n {
            None
        } else if (p as u128) * (p as u128) <= two_n as u128 {
            Some(PrimeRange::Small)
        } else if 3 * p <= two_n {
            Some(PrimeRange::Middle)
        } else if p <= n {
            Some(PrimeRange::UpperThird)
        } else {
            Some(PrimeRange::Top)
        }
    }
}

/// Primes of one range together with the partial product `prod p^b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangePart {
    pub range: PrimeRange,
    pub primes: Vec<u64>,
    pub product: Factorization,
}

/// The four-range split of the primes below `2n` and their contributions to
/// `binom(2n, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeDecomposition {
    pub n: u64,
    pub parts: [RangePart; 4],
}

impl RangeDecomposition {
    pub fn part(&self, range: PrimeRange) -> &RangePart {
        &self.parts[range as usize]
    }

    /// Product of all four partial products.
    pub fn reconstruct(&self) -> BigNat {
        BigNat::product(self.parts.iter().map(|part| part.product.value()))
    }
}

/// Splits the primes below `2n` into the four ranges. Requires `n >= 5`, the
/// first `n` with `sqrt(2n) <= 2n/3`.
pub fn decompose(n: u64, table: &PrimeTable) -> Result<RangeDecomposition> {
    if n < 5 {
        return Err(Error::Domain(format!(
            "decompose needs n >= 5 so the ranges are ordered, got {n}"
        )));
    }
    table.require(2 * n)?;
    let mut primes: [Vec<u64>; 4] = Default::default();
    let mut pairs: [Vec<(u64, u32)>; 4] = Default::default();
    for &p in table.primes_in(1, 2 * n)? {
        let range = PrimeRange::classify(n, p).expect("p < 2n");
        let slot = range as usize;
        primes[slot].push(p);
        let b = b_unchecked(n, p);
        if b > 0 {
            pairs[slot].push((p, b as u32));
        }
    }
    let parts = PrimeRange::ALL.map(|range| RangePart {
        range,
        primes: std::mem::take(&mut primes[range as usize]),
        product: Factorization::from_pairs(std::mem::take(&mut pairs[range as usize])),
    });
    Ok(RangeDecomposition { n, parts })
}
