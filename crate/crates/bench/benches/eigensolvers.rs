use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rmtsense_core::{eigenvalues_general, eigenvalues_hermitian, gen_ginibre, sample_covariance};

fn bench_general_eig(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenvalues_general");
    g.sample_size(10);
    for &n in &[64usize, 128, 256] {
        let x = gen_ginibre(n, n, 7).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| eigenvalues_general(black_box(x.mat())).unwrap())
        });
    }
    g.finish();
}

fn bench_hermitian_eig(c: &mut Criterion) {
    let mut g = c.benchmark_group("eigenvalues_hermitian");
    g.sample_size(20);
    for &p in &[100usize, 200] {
        let x = gen_ginibre(p, 2 * p, 9).unwrap();
        let s = sample_covariance(&x).unwrap();
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| {
            b.iter(|| eigenvalues_hermitian(black_box(&s)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, bench_general_eig, bench_hermitian_eig);
criterion_main!(benches);
