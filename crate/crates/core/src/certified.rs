//! Outward-rounded base-2 logarithms in fixed point.
//!
//! A value is held as an integer count of units of `2^-frac_bits`. For an
//! integer `m >= 1`, [`log2_bounds`] returns `lo <= log2(m) * 2^frac_bits <= hi`
//! using only integer arithmetic: the mantissa `m / 2^e` is squared
//! repeatedly in 62-bit fixed point, once with every rounding taken down and
//! once with every rounding taken up, extracting one bit of the logarithm
//! per squaring.

/// Fractional bits of the mantissa during squaring; `w^2` must fit in u128.
const MANTISSA_BITS: u32 = 62;

/// Largest supported number of fractional logarithm bits.
pub const MAX_FRAC_BITS: u32 = 60;

/// Default logarithm precision, about `2.3e-10`.
pub const DEFAULT_FRAC_BITS: u32 = 32;

/// Lower and upper bound of `log2(m)` in units of `2^-frac_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Log2Bounds {
    pub lo: u128,
    pub hi: u128,
}

/// Certified bounds on `log2(m)` for `m >= 1`.
pub fn log2_bounds(m: u64, frac_bits: u32) -> Log2Bounds {
    assert!(m >= 1, "log2 of zero");
    assert!(frac_bits <= MAX_FRAC_BITS);
    let e = 63 - m.leading_zeros();
    let int_part = (e as u128) << frac_bits;
    let one: u128 = 1 << MANTISSA_BITS;
    let two = one << 1;

    // m < 2^64, e <= 63; normalise the mantissa to [1, 2) with 62 fractional
    // bits. For e = 63 the lowest bit is dropped, so the two walks start from
    // a floor and a ceiling respectively.
    let (mut w_lo, mut w_hi) = if e <= MANTISSA_BITS {
        let w = (m as u128) << (MANTISSA_BITS - e);
        (w, w)
    } else {
        let w = (m as u128) >> 1;
        (w, w + (m as u128 & 1))
    };

    let mut bits_lo: u128 = 0;
    let mut bits_hi: u128 = 0;
    for _ in 0..frac_bits {
        bits_lo <<= 1;
        bits_hi <<= 1;

        w_lo = (w_lo * w_lo) >> MANTISSA_BITS;
        if w_lo >= two {
            bits_lo |= 1;
            w_lo >>= 1;
        }

        let sq = w_hi * w_hi;
        w_hi = (sq >> MANTISSA_BITS) + u128::from(sq & (one - 1) != 0);
        if w_hi >= two {
            bits_hi |= 1;
            w_hi = (w_hi >> 1) + (w_hi & 1);
        }
    }
    // the residual mantissa contributes log2(w) in [0, 1] further units
    let tail = u128::from(w_hi != one);
    Log2Bounds {
        lo: int_part + bits_lo,
        hi: int_part + bits_hi + tail,
    }
}

/// `x * 2^frac_bits` as fixed-point units.
pub fn units(x: u64, frac_bits: u32) -> u128 {
    (x as u128) << frac_bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn powers_of_two_are_exact() {
        for k in 0..64u32 {
            let b = log2_bounds(1u64 << k, 40);
            assert_eq!(b.lo, (k as u128) << 40);
            assert_eq!(b.hi, (k as u128) << 40);
        }
    }

    #[test]
    fn bounds_are_tight() {
        for m in [3u64, 5, 7, 10, 1000, 4001, 999_983, u64::MAX] {
            let b = log2_bounds(m, 32);
            assert!(b.lo < b.hi);
            assert!(b.hi - b.lo <= 4, "m = {m}: width {}", b.hi - b.lo);
        }
    }

    proptest! {
        // m^(2^j) against 2^k: exact integer check of the bounds at j bits
        #[test]
        fn bounds_bracket_exact_log(m in 2u64..5000, j in 1u32..9) {
            let b = log2_bounds(m, j);
            let lhs = num_bigint::BigUint::from(m).pow(1u32 << j);
            let lo_pow = num_bigint::BigUint::from(1u8) << (b.lo as u64);
            let hi_pow = num_bigint::BigUint::from(1u8) << (b.hi as u64);
            prop_assert!(lo_pow <= lhs);
            prop_assert!(lhs <= hi_pow);
        }

        #[test]
        fn bounds_bracket_float_log(m in 1u64..u64::MAX) {
            let b = log2_bounds(m, 40);
            let scale = (1u64 << 40) as f64;
            let f = (m as f64).log2() * scale;
            // f64 is only a sanity reference here; allow its own error
            let slack = f.abs() * 1e-15 + 2.0;
            prop_assert!((b.lo as f64) <= f + slack);
            prop_assert!((b.hi as f64) >= f - slack);
            prop_assert!(b.hi - b.lo <= 4);
        }
    }
}
