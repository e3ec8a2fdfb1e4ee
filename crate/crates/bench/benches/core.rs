use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use krull_bench::{circle, hilbert, pyramid};
use krull_core::cone::{cone_membership, strong_atoms_affine};
use krull_core::factorization::check_ufm_hfm_bounded;
use krull_core::zeta::HeapEnumerator;
use krull_core::{KrullPresentation, Scale};
use std::hint::black_box;

fn heap_enumeration(c: &mut Criterion) {
    let pres = KrullPresentation::naturals(100_000).unwrap();
    let s2 = Scale::power(&pres, 2.0).unwrap();
    let mut group = c.benchmark_group("heap");
    for terms in [1_000usize, 10_000, 100_000] {
        group.bench_with_input(BenchmarkId::from_parameter(terms), &terms, |b, &n| {
            b.iter(|| HeapEnumerator::new(&s2).take(n).map(|t| 1.0 / t.value).sum::<f64>())
        });
    }
    group.finish();
}

fn cone(c: &mut Criterion) {
    let gens = pyramid();
    c.bench_function("cone membership pyramid", |b| {
        b.iter(|| cone_membership(black_box(&gens), black_box(&[3, -1, 5])).unwrap())
    });
    let ring = circle(10);
    c.bench_function("strong atoms circle n<=10", |b| b.iter(|| strong_atoms_affine(black_box(&ring)).unwrap()));
}

fn hilbert_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("hilbert ufm/hfm scan");
    group.sample_size(10);
    for bound in [1_000u64, 10_000] {
        let spec = hilbert(bound);
        group.bench_with_input(BenchmarkId::from_parameter(bound), &bound, |b, &n| {
            b.iter(|| check_ufm_hfm_bounded(&spec, n).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, heap_enumeration, cone, hilbert_scan);
criterion_main!(benches);
