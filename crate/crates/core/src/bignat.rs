//! Exact natural-number arithmetic.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// Largest `n` for which [`central_binomial`] materializes `binom(2n, n)`.
pub const DEFAULT_MAX_BINOMIAL_N: u64 = 200_000;

/// Arbitrary-precision natural number.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigNat(BigUint);

impl BigNat {
    pub fn zero() -> BigNat {
        BigNat(BigUint::zero())
    }

    pub fn one() -> BigNat {
        BigNat(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// `self^exp`; `x^0 = 1` for every `x`, including zero.
    pub fn pow(&self, exp: u64) -> BigNat {
        let mut result = BigUint::one();
        let mut base = self.0.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result *= &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        BigNat(result)
    }

    /// `2^k`.
    pub fn pow2(k: u64) -> BigNat {
        BigNat(BigUint::one() << k)
    }

    /// Product of the items, multiplied pairwise as a balanced tree.
    pub fn product<I: IntoIterator<Item = BigNat>>(items: I) -> BigNat {
        let mut level: Vec<BigUint> = items.into_iter().map(|b| b.0).collect();
        if level.is_empty() {
            return BigNat::one();
        }
        while level.len() > 1 {
            let mut next = Vec::with_capacity(level.len().div_ceil(2));
            let mut it = level.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(a * b),
                    None => next.push(a),
                }
            }
            level = next;
        }
        BigNat(level.pop().unwrap())
    }

    pub fn mul_small(&self, k: u64) -> BigNat {
        BigNat(&self.0 * k)
    }

    /// Exact division by a small divisor; errors when it does not divide.
    pub fn div_exact_small(&self, k: u64) -> Result<BigNat> {
        if k == 0 {
            return Err(Error::Domain("division by zero".into()));
        }
        let q = &self.0 / k;
        if &q * k != self.0 {
            return Err(Error::Domain(format!("{k} does not divide {self}")));
        }
        Ok(BigNat(q))
    }

    /// Number of significant bits (0 for zero).
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// Largest `e` with `p^e | self`, for `self > 0` and `p >= 2`.
    pub fn valuation(&self, p: u64) -> u64 {
        assert!(p >= 2 && !self.is_zero());
        let mut m = self.0.clone();
        let mut e = 0;
        loop {
            let q = &m / p;
            if &q * p != m {
                return e;
            }
            m = q;
            e += 1;
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for BigNat {
    fn from(v: u64) -> BigNat {
        BigNat(BigUint::from(v))
    }
}

impl From<BigUint> for BigNat {
    fn from(v: BigUint) -> BigNat {
        BigNat(v)
    }
}

impl Mul for BigNat {
    type Output = BigNat;

    fn mul(self, rhs: BigNat) -> BigNat {
        BigNat(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a BigNat> for &'a BigNat {
    type Output = BigNat;

    fn mul(self, rhs: &BigNat) -> BigNat {
        BigNat(&self.0 * &rhs.0)
    }
}

impl fmt::Display for BigNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for BigNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigNat({})", self.0)
    }
}

impl FromStr for BigNat {
    type Err = Error;

    /// Canonical decimal only: ASCII digits, no sign, no leading zeros.
    fn from_str(s: &str) -> Result<BigNat> {
        let canonical = !s.is_empty()
            && s.bytes().all(|b| b.is_ascii_digit())
            && (s == "0" || !s.starts_with('0'));
        if !canonical {
            return Err(Error::Parse(format!("not a canonical decimal natural: {s:?}")));
        }
        BigUint::from_str(s)
            .map(BigNat)
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Product of all primes `<= n`.
pub fn primorial(n: u64, table: &PrimeTable) -> Result<BigNat> {
    if n < 2 {
        return Err(Error::Domain(format!("primorial needs n >= 2, got {n}")));
    }
    table.require(n)?;
    Ok(BigNat::product(
        table.primes_le(n).iter().map(|&p| BigNat::from(p)),
    ))
}

/// `binom(2n, n)` with the default size budget.
pub fn central_binomial(n: u64) -> Result<BigNat> {
    central_binomial_within(n, DEFAULT_MAX_BINOMIAL_N)
}

/// `binom(2n, n)` by the recurrence `C(n+k, k) = C(n+k-1, k-1) * (n+k) / k`.
/// Every intermediate is itself a binomial coefficient, so each division is
/// exact.
pub fn central_binomial_within(n: u64, max_n: u64) -> Result<BigNat> {
    if n == 0 {
        return Err(Error::Domain("central_binomial needs n >= 1".into()));
    }
    if n > max_n {
        return Err(Error::Resource(format!(
            "binom(2n, n) for n = {n} exceeds materialization budget n <= {max_n}"
        )));
    }
    let mut c = BigUint::one();
    for k in 1..=n {
        c *= n + k;
        c /= k;
    }
    Ok(BigNat(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::sieve_build;
    use proptest::prelude::*;

    #[test]
    fn primorial_examples() {
        let t = sieve_build(100).unwrap();
        assert_eq!(primorial(10, &t).unwrap(), BigNat::from(210));
        assert_eq!(primorial(2, &t).unwrap(), BigNat::from(2));
        assert_eq!(primorial(11, &t).unwrap(), BigNat::from(2310));
        assert!(matches!(primorial(101, &t), Err(Error::Coverage { .. })));
    }

    #[test]
    fn primorial_is_squarefree() {
        let t = sieve_build(200).unwrap();
        let p = primorial(200, &t).unwrap();
        for &q in t.primes() {
            assert_eq!(p.valuation(q), 1);
        }
    }

    #[test]
    fn pow_examples() {
        assert_eq!(BigNat::from(4).pow(10), BigNat::from(1_048_576));
        assert_eq!(BigNat::from(12345).pow(0), BigNat::one());
        assert_eq!(BigNat::zero().pow(0), BigNat::one());
        assert_eq!(BigNat::from(2).pow(4), BigNat::from(16));
        assert_eq!(BigNat::from(2).pow(200), BigNat::pow2(200));
    }

    #[test]
    fn central_binomial_examples() {
        assert_eq!(central_binomial(1).unwrap(), BigNat::from(2));
        assert_eq!(central_binomial(2).unwrap(), BigNat::from(6));
        assert_eq!(central_binomial(5).unwrap(), BigNat::from(252));
        assert_eq!(central_binomial(10).unwrap(), BigNat::from(184_756));
        assert!(matches!(central_binomial_within(11, 10), Err(Error::Resource(_))));
        assert!(central_binomial(0).is_err());
    }

    #[test]
    fn central_binomial_matches_factorial_quotient() {
        for n in 1..=60u64 {
            let fact = |m: u64| BigNat::product((1..=m).map(BigNat::from));
            let expected = fact(2 * n).as_biguint() / (fact(n) * fact(n)).as_biguint();
            assert_eq!(central_binomial(n).unwrap(), BigNat::from(expected));
        }
    }

    #[test]
    fn decimal_parsing_rejects_noncanonical() {
        for bad in ["", "-1", "+1", "01", "1 ", "1e3", "0x10"] {
            assert!(bad.parse::<BigNat>().is_err(), "{bad:?}");
        }
        assert_eq!("0".parse::<BigNat>().unwrap(), BigNat::zero());
    }

    #[test]
    fn exact_division() {
        let x = BigNat::from(252);
        assert_eq!(x.div_exact_small(7).unwrap(), BigNat::from(36));
        assert!(x.div_exact_small(5).is_err());
        assert!(x.div_exact_small(0).is_err());
    }

    proptest! {
        #[test]
        fn decimal_round_trip(limbs in proptest::collection::vec(any::<u32>(), 0..12)) {
            let x = BigNat::from(BigUint::new(limbs));
            let back: BigNat = x.to_string().parse().unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn order_matches_u128(a in any::<u64>(), b in any::<u64>()) {
            let (x, y) = (BigNat::from(a).mul_small(3), BigNat::from(b).mul_small(3));
            prop_assert_eq!(x.cmp(&y), (a as u128 * 3).cmp(&(b as u128 * 3)));
        }

        #[test]
        fn pow_of_pow(x in 0u64..50, a in 0u64..12, b in 0u64..12) {
            let base = BigNat::from(x);
            prop_assert_eq!(base.pow(a).pow(b), base.pow(a * b));
        }
    }
}
