//! Ruth–Aaron pairs and abundant-number counts.

use serde::{Deserialize, Serialize};

use crate::decimal;
use crate::error::{Error, Result};
use crate::par;
use crate::primes::{PrimeTable, SopfMode};

/// `n` and `n + 1` with equal sums of prime factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuthAaronPair {
    #[serde(with = "decimal::u64_str")]
    pub n: u64,
    #[serde(with = "decimal::u64_str")]
    pub sum: u64,
    pub mode: SopfMode,
}

/// All pairs `(n, n + 1)` with `2 <= n <= limit`, ascending.
pub fn ruth_aaron_pairs(
    limit: u64,
    mode: SopfMode,
    table: &PrimeTable,
    jobs: usize,
) -> Result<Vec<RuthAaronPair>> {
    table.require(limit + 1)?;
    if limit < 2 {
        return Ok(Vec::new());
    }
    let chunks = par::map_chunks(2, limit, 1 << 14, jobs, |a, b| -> Result<Vec<RuthAaronPair>> {
        let mut out = Vec::new();
        let mut prev = table.sopf(a, mode)?;
        for n in a..=b {
            let next = table.sopf(n + 1, mode)?;
            if prev == next {
                out.push(RuthAaronPair { n, sum: prev, mode });
            }
            prev = next;
        }
        Ok(out)
    });
    let mut pairs = Vec::new();
    for c in chunks {
        pairs.extend(c?);
    }
    Ok(pairs)
}

/// `sigma(n) > 2n`. Perfect numbers are not abundant.
pub fn is_abundant(n: u64, table: &PrimeTable) -> Result<bool> {
    Ok(table.sigma(n)? > 2 * n as u128)
}

/// Number of abundant `n <= limit`; the density is the exact ratio
/// `count / limit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityEstimate {
    #[serde(with = "decimal::u64_str")]
    pub limit: u64,
    #[serde(with = "decimal::u64_str")]
    pub count: u64,
}

impl DensityEstimate {
    /// `(count, limit)` reduced to lowest terms.
    pub fn density(&self) -> (u64, u64) {
        let g = gcd(self.count, self.limit);
        if g == 0 {
            return (0, 1);
        }
        (self.count / g, self.limit / g)
    }

    /// `count / limit` truncated to `digits` decimal places.
    pub fn to_decimal(&self, digits: usize) -> String {
        let (num, den) = (self.count as u128, self.limit.max(1) as u128);
        let int = num / den;
        let mut rem = num % den;
        let mut s = int.to_string();
        if digits > 0 {
            s.push('.');
            for _ in 0..digits {
                rem *= 10;
                s.push(char::from(b'0' + (rem / den) as u8));
                rem %= den;
            }
        }
        s
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn require_factorable(limit: u64, table: &PrimeTable) -> Result<()> {
    let t = table.limit() as u128;
    if (limit as u128) > t * t {
        return Err(Error::Coverage {
            needed: limit.isqrt() + 1,
            limit: table.limit(),
        });
    }
    Ok(())
}

/// Exact count of abundant numbers in `[1, limit]`.
pub fn abundant_density(limit: u64, table: &PrimeTable, jobs: usize) -> Result<DensityEstimate> {
    Ok(*abundant_sweep(limit, &[], table, jobs)?
        .last()
        .expect("sweep always ends at limit"))
}

/// Counts at each checkpoint `<= limit` (ascending) followed by `limit`
/// itself.
pub fn abundant_sweep(
    limit: u64,
    checkpoints: &[u64],
    table: &PrimeTable,
    jobs: usize,
) -> Result<Vec<DensityEstimate>> {
    if limit < 1 {
        return Err(Error::Domain("abundant density needs limit >= 1".into()));
    }
    require_factorable(limit, table)?;
    let mut marks: Vec<u64> = checkpoints.iter().copied().filter(|&c| c >= 1 && c < limit).collect();
    marks.sort_unstable();
    marks.dedup();
    marks.push(limit);

    // abundant n per chunk, in order
    let chunks = par::map_chunks(1, limit, 1 << 14, jobs, |a, b| -> Result<Vec<u64>> {
        let mut hits = Vec::new();
        for n in a..=b {
            if is_abundant(n, table)? {
                hits.push(n);
            }
        }
        Ok(hits)
    });
    let mut abundant = Vec::new();
    for c in chunks {
        abundant.extend(c?);
    }
    Ok(marks
        .into_iter()
        .map(|limit| DensityEstimate {
            limit,
            count: abundant.partition_point(|&n| n <= limit) as u64,
        })
        .collect())
}
