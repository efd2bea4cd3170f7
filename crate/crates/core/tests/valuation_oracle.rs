use erdoslab::bignat::central_binomial;
use erdoslab::valuations::{binom_valuation_terms, PrimeRange};
use erdoslab::{central_binom_valuation, decompose, legendre_valuation, sieve_build, BigNat};
use num_bigint::BigUint;
use rand::{rngs::StdRng, Rng, SeedableRng};

/// `v_p(m)` by repeated division of the materialized integer.
fn valuation_by_division(m: &BigUint, p: u64) -> u64 {
    let mut m = m.clone();
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

#[test]
fn legendre_matches_factorial_division() {
    let mut fact = BigUint::from(1u32);
    for n in 1..=200u64 {
        fact *= n;
        for p in [2u64, 3, 5, 7, 11, 13, 97, 199] {
            assert_eq!(legendre_valuation(n, p).unwrap(), valuation_by_division(&fact, p));
        }
    }
}

#[test]
fn binom_valuation_matches_materialized_binomial() {
    let t = sieve_build(600).unwrap();
    for n in 1..=300u64 {
        let c = central_binomial(n).unwrap();
        for &p in t.primes_le(2 * n) {
            assert_eq!(
                central_binom_valuation(n, p).unwrap(),
                valuation_by_division(c.as_biguint(), p),
                "n = {n}, p = {p}"
            );
        }
        // the prime-power product is binom(2n, n)
        let product = BigNat::product(
            t.primes_le(2 * n)
                .iter()
                .map(|&p| BigNat::from(p).pow(central_binom_valuation(n, p).unwrap())),
        );
        assert_eq!(product, c);
    }
}

#[test]
fn decomposition_reconstructs_binomial() {
    let t = sieve_build(600).unwrap();
    for n in 5..=300u64 {
        assert_eq!(decompose(n, &t).unwrap().reconstruct(), central_binomial(n).unwrap());
    }
}

#[test]
fn upper_third_product_is_one() {
    let t = sieve_build(20_000).unwrap();
    for n in 5..=10_000u64 {
        let d = decompose(n, &t).unwrap();
        assert!(d.part(PrimeRange::UpperThird).product.is_empty(), "n = {n}");
    }
}

#[test]
fn summands_stay_in_zero_one() {
    let t = sieve_build(20_000).unwrap();
    for n in 1..=10_000u64 {
        for &p in t.primes_le(2 * n) {
            assert!(binom_valuation_terms(n, p).all(|s| s <= 1));
        }
    }
}

#[test]
fn pb_le_2n_random_n_up_to_one_million() {
    let t = sieve_build(2_000_000).unwrap();
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for _ in 0..40 {
        let n: u64 = rng.gen_range(1..=1_000_000);
        for &p in t.primes_le(2 * n) {
            let b = central_binom_valuation(n, p).unwrap() as u32;
            // exponent comparison in u128, never a big power
            let pb = (p as u128).checked_pow(b).expect("p^b fits since p^b <= 2n");
            assert!(pb <= 2 * n as u128, "n = {n}, p = {p}, b = {b}");
        }
    }
}

#[test]
fn large_and_middle_primes_exhaustive() {
    let t = sieve_build(20_000).unwrap();
    for n in 1..=10_000u64 {
        for &p in t.primes_le(2 * n) {
            let b = central_binom_valuation(n, p).unwrap();
            if p * p > 2 * n {
                assert!(b <= 1, "b_le_1 at n = {n}, p = {p}");
            }
            if 3 * p > 2 * n && p <= n && n >= 3 {
                assert_eq!(b, 0, "b_eq_0 at n = {n}, p = {p}");
            }
        }
    }
    assert_eq!(central_binom_valuation(2, 2).unwrap(), 1);
}
