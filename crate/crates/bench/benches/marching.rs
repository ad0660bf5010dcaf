//! Recurrence marching versus direct series evaluation, and the cost of
//! fitting recurrences from data.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use condpoisson::fixtures::{a_association, association_system, isomerization_system};
use condpoisson::rational::parse_rational;
use condpoisson::recurrence::march;
use condpoisson::{guess, BigRational};

fn rates(ss: &[&str]) -> Vec<BigRational> {
    ss.iter().map(|s| parse_rational(s).unwrap()).collect()
}

fn bench_march(c: &mut Criterion) {
    let mut group = c.benchmark_group("march");
    let iso = isomerization_system();
    let lam2 = rates(&["3/2", "2/3"]);
    for b in [50u32, 200, 1000] {
        group.bench_with_input(BenchmarkId::new("sum_constraint", b), &b, |bch, &b| {
            bch.iter(|| march(&iso, &lam2, black_box(&[b])).unwrap())
        });
    }
    let assoc = association_system();
    let lam3 = rates(&["2/3", "5/7", "3"]);
    for b in [10u32, 25, 50] {
        group.bench_with_input(BenchmarkId::new("pair_capture", b), &b, |bch, &b| {
            bch.iter(|| march(&assoc, &lam3, black_box(&[b, b])).unwrap())
        });
    }
    group.finish();
}

fn bench_guess(c: &mut Criterion) {
    let mut group = c.benchmark_group("guess");
    group.sample_size(10);
    let a = a_association();
    let lam = rates(&["1", "1", "1"]);
    group.bench_function("pair_capture_order2", |b| {
        b.iter(|| guess::minimal_fit(&a, &lam, black_box(1), 3, 3).unwrap().unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_march, bench_guess);
criterion_main!(benches);
