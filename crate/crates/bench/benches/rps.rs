use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use rps_core::{combinatorics, entropy, pes, verifier, Frame, LogBase, OptimizerConfig};

fn bench_normalizers(c: &mut Criterion) {
    let mut group = c.benchmark_group("rps_normalizer");
    for n in [10usize, 20, 100] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| combinatorics::rps_normalizer(black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn bench_table(c: &mut Criterion) {
    c.bench_function("table_1_to_10", |b| {
        b.iter(|| {
            for n in 1..=10 {
                black_box(entropy::max_shannon_entropy(n, LogBase::BINARY).unwrap());
                black_box(entropy::max_deng_entropy(n, LogBase::BINARY).unwrap());
                black_box(entropy::max_rps_entropy(n, LogBase::BINARY).unwrap());
            }
        })
    });
}

fn bench_enumerate(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate");
    for n in [4usize, 6, 8] {
        let frame = Frame::generated(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &frame, |b, frame| {
            b.iter(|| pes::enumerate(frame, true).count())
        });
    }
    group.finish();
}

fn bench_entropy(c: &mut Criterion) {
    let frame = Frame::generated(6).unwrap();
    let pmf = entropy::max_rps_pmf(&frame).unwrap();
    c.bench_function("rps_entropy_n6", |b| {
        b.iter(|| entropy::rps_entropy(black_box(&pmf), LogBase::BINARY).value)
    });
}

fn bench_verifier(c: &mut Criterion) {
    let mut group = c.benchmark_group("maximize_rps_entropy");
    group.sample_size(10);
    for n in [2usize, 3, 4] {
        let frame = Frame::generated(n).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &frame, |b, frame| {
            b.iter(|| verifier::maximize_rps_entropy(frame, &OptimizerConfig::default()).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_normalizers,
    bench_table,
    bench_enumerate,
    bench_entropy,
    bench_verifier
);
criterion_main!(benches);
