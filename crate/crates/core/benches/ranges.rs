use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use erdoslab::{
    abundant_density, sieve_build, verify_bertrand_range, BertrandForm, LemmaId, Verifier,
};

fn jobs_to_compare() -> Vec<usize> {
    let all = erdoslab::par::default_jobs();
    if all > 1 {
        vec![1, all]
    } else {
        vec![1]
    }
}

fn lemma_ranges(c: &mut Criterion) {
    let table = sieve_build(20_000).unwrap();
    let verifier = Verifier::new(&table);
    let mut group = c.benchmark_group("lemma_range_2_to_10000");
    group.sample_size(10);
    for lemma in [LemmaId::PbLe2n, LemmaId::LowerBound, LemmaId::ChebyshevBound] {
        for jobs in jobs_to_compare() {
            group.bench_with_input(BenchmarkId::new(lemma.to_string(), jobs), &jobs, |b, &jobs| {
                b.iter(|| verifier.check_range(lemma, 2, 10_000, jobs).unwrap())
            });
        }
    }
    group.finish();
}

fn bertrand_scan(c: &mut Criterion) {
    let table = sieve_build(2_000_000).unwrap();
    let mut group = c.benchmark_group("bertrand_2_to_1e6");
    for jobs in jobs_to_compare() {
        group.bench_with_input(BenchmarkId::from_parameter(jobs), &jobs, |b, &jobs| {
            b.iter(|| verify_bertrand_range(2, 1_000_000, &table, BertrandForm::Strict, jobs).unwrap())
        });
    }
    group.finish();
}

fn abundant(c: &mut Criterion) {
    let table = sieve_build(1000).unwrap();
    let mut group = c.benchmark_group("abundant_1e5");
    group.sample_size(10);
    for jobs in jobs_to_compare() {
        group.bench_with_input(BenchmarkId::from_parameter(jobs), &jobs, |b, &jobs| {
            b.iter(|| abundant_density(100_000, &table, jobs).unwrap())
        });
    }
    group.finish();
}

fn sieve(c: &mut Criterion) {
    c.bench_function("sieve_1e7", |b| b.iter(|| sieve_build(10_000_000).unwrap()));
}

criterion_group!(benches, lemma_ranges, bertrand_scan, abundant, sieve);
criterion_main!(benches);
