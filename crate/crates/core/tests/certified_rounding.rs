use erdoslab::lemmas::{ceil_sqrt, final_inequality_exact};
use erdoslab::{sieve_build, LemmaId, Method, Status, Verifier};
use num_bigint::BigUint;
use rand::{rngs::StdRng, Rng, SeedableRng};

/// Independent decision of `2^(2n) >= 2n (2n)^ceil(sqrt(2n)) 4^ceil(2n/3)`
/// on the full integers, without cancelling anything.
fn crossover_oracle(n: u64) -> bool {
    let two_n = BigUint::from(2 * n);
    let s = ceil_sqrt(2 * n) as u32;
    let c = (2 * n).div_ceil(3) as u32;
    let lhs = BigUint::from(1u8) << (2 * n);
    let rhs = &two_n * two_n.pow(s) * BigUint::from(4u8).pow(c);
    lhs >= rhs
}

#[test]
fn certified_passes_are_sound() {
    let t = sieve_build(10).unwrap();
    let v = Verifier::new(&t);
    let mut rng = StdRng::seed_from_u64(0x5eed_0005);
    let mut checked = 0;
    while checked < 50 {
        let n: u64 = rng.gen_range(2..=100_000);
        if v.check_final_inequality(n).unwrap().is_pass() {
            assert!(crossover_oracle(n), "n = {n}");
            checked += 1;
        }
    }
}

#[test]
fn certified_and_exact_crossover_agree() {
    let t = sieve_build(10).unwrap();
    let v = Verifier::new(&t);
    for n in 2..=6000u64 {
        let certified = v.check_final_inequality(n).unwrap().is_pass();
        assert_eq!(certified, crossover_oracle(n), "n = {n}");
        assert_eq!(final_inequality_exact(n), crossover_oracle(n), "n = {n}");
    }
}

#[test]
fn crossover_stays_certified_after_first_long_run() {
    let t = sieve_build(10).unwrap();
    let v = Verifier::new(&t);
    let passes: Vec<bool> = (2..=20_000u64)
        .map(|n| v.check_final_inequality(n).unwrap().is_pass())
        .collect();
    let start = passes
        .windows(101)
        .position(|w| w.iter().all(|&p| p))
        .expect("a run of 101 passes exists");
    assert!(passes[start..].iter().all(|&p| p), "fail after run starting at n = {}", start + 2);
}

#[test]
fn exact_and_rounded_agree_for_lemmas_1_and_5() {
    let t = sieve_build(4000).unwrap();
    let v = Verifier::new(&t);
    for n in 2..=2000u64 {
        let exact = v.check_chebyshev_by(n, Method::Exact).unwrap();
        let rounded = v.check_chebyshev_by(n, Method::CertifiedRounding).unwrap();
        assert_eq!(exact.status, rounded.status, "chebyshev at n = {n}");
        let exact = v.check_lower_bound_by(n, Method::Exact).unwrap();
        let rounded = v.check_lower_bound_by(n, Method::CertifiedRounding).unwrap();
        assert_eq!(exact.status, rounded.status, "lower_bound at n = {n}");
    }
    assert_eq!(v.check_lower_bound_by(1, Method::CertifiedRounding).unwrap().status, Status::Fail);
}

#[test]
fn certified_ranges_above_threshold() {
    let t = sieve_build(300_000).unwrap();
    let v = Verifier::new(&t);
    let c = v.check_range(LemmaId::ChebyshevBound, 9_000, 150_000, 4).unwrap();
    assert!(c.all_pass);
    assert_eq!(c.method, Method::CertifiedRounding);
    let c = v.check_range(LemmaId::LowerBound, 9_990, 10_400, 4).unwrap();
    assert!(c.all_pass);
    assert_eq!(c.method, Method::CertifiedRounding);
}

#[test]
fn range_output_independent_of_jobs() {
    let t = sieve_build(20_000).unwrap();
    let v = Verifier::new(&t);
    for lemma in LemmaId::ALL {
        let lo = if lemma == LemmaId::LowerBound { 1 } else { 2 };
        let mut base = v.check_range(lemma, lo, 3000, 1).unwrap();
        base.elapsed = Default::default();
        for jobs in [4, 16] {
            let mut other = v.check_range(lemma, lo, 3000, jobs).unwrap();
            other.elapsed = Default::default();
            assert_eq!(other, base, "{lemma} with {jobs} jobs");
        }
    }
}
