use erdoslab::{abundant_density, ruth_aaron_pairs, sieve_build, SopfMode};
use erdoslab::extras::abundant_sweep;

fn sopf_sieve(limit: usize, mode: SopfMode) -> Vec<u64> {
    let mut s = vec![0u64; limit + 1];
    for p in 2..=limit {
        if (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
            continue;
        }
        let mut q = p;
        loop {
            for m in (q..=limit).step_by(q) {
                s[m] += p as u64;
            }
            if mode == SopfMode::Distinct {
                break;
            }
            match q.checked_mul(p) {
                Some(next) if next <= limit => q = next,
                _ => break,
            }
        }
    }
    s
}

#[test]
fn pairs_match_sopf_sieve_in_both_modes() {
    let t = sieve_build(20_001).unwrap();
    for mode in [SopfMode::WithMultiplicity, SopfMode::Distinct] {
        let s = sopf_sieve(20_001, mode);
        let expected: Vec<u64> = (2..=20_000).filter(|&n| s[n] == s[n + 1]).map(|n| n as u64).collect();
        let got = ruth_aaron_pairs(20_000, mode, &t, 3).unwrap();
        assert_eq!(got.iter().map(|p| p.n).collect::<Vec<_>>(), expected, "{mode}");
        for p in &got {
            assert_eq!(t.sopf(p.n, mode).unwrap(), p.sum);
            assert_eq!(t.sopf(p.n + 1, mode).unwrap(), p.sum);
        }
    }
}

#[test]
fn abundant_counts_match_divisor_sieve() {
    let limit = 50_000usize;
    let mut sigma = vec![0u64; limit + 1];
    for d in 1..=limit {
        for m in (d..=limit).step_by(d) {
            sigma[m] += d as u64;
        }
    }
    let t = sieve_build(300).unwrap();
    let marks = [1u64, 20, 945, 10_000, 50_000];
    let sweep = abundant_sweep(50_000, &marks, &t, 4).unwrap();
    for est in sweep {
        let brute = (1..=est.limit as usize).filter(|&n| sigma[n] > 2 * n as u64).count() as u64;
        assert_eq!(est.count, brute, "limit {}", est.limit);
    }
    assert_eq!(abundant_density(10_000, &t, 2).unwrap().count, 2488);
}
