use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use svxnfa::{
    build_witness, change_basis, char_poly, check_sv, determinize, minimize, random_gl, solve_sv,
};

fn witness(c: &mut Criterion) {
    let mut g = c.benchmark_group("witness");
    for n in [8, 10, 12] {
        let m = build_witness(n, None).unwrap();
        g.bench_with_input(BenchmarkId::new("determinize", n), &m, |b, m| {
            b.iter(|| determinize(black_box(m)))
        });
        let d = determinize(&m).unwrap();
        g.bench_with_input(BenchmarkId::new("minimize", n), &d, |b, d| {
            b.iter(|| minimize(black_box(d)))
        });
        g.bench_with_input(BenchmarkId::new("check_sv", n), &m, |b, m| {
            b.iter(|| check_sv(black_box(m)))
        });
        g.bench_with_input(BenchmarkId::new("solve_sv", n), &m, |b, m| {
            b.iter(|| solve_sv(black_box(m)))
        });
    }
    g.finish();
}

fn linear_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("linalg");
    for n in [16, 64, 128] {
        let a = random_gl(n, 1).unwrap();
        g.bench_with_input(BenchmarkId::new("inverse", n), &a, |b, a| {
            b.iter(|| black_box(a).inverse())
        });
        g.bench_with_input(BenchmarkId::new("char_poly", n), &a, |b, a| {
            b.iter(|| char_poly(black_box(a)))
        });
    }
    let m = build_witness(10, None).unwrap();
    let a = random_gl(10, 3).unwrap();
    g.bench_function("change_basis/10", |b| {
        b.iter(|| change_basis(black_box(&m), black_box(&a)))
    });
    g.finish();
}

criterion_group!(benches, witness, linear_algebra);
criterion_main!(benches);
