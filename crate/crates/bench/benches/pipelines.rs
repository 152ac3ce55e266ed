use criterion::{black_box, criterion_group, criterion_main, Criterion};
use rand_chacha::rand_core::SeedableRng;
use rmtsense_core::{
    acquire, product_chain, sve_transform, AcquisitionMode, ChainOptions, SourceSpec,
};

fn bench_sve(c: &mut Criterion) {
    let e = acquire(
        &SourceSpec::white_noise(),
        AcquisitionMode::TimeEvolving,
        256,
        512,
        1,
        3,
    )
    .unwrap();
    let snap = &e.snapshots()[0];
    let mut g = c.benchmark_group("sve_transform");
    g.sample_size(20);
    g.bench_function("256x512", |b| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        b.iter(|| sve_transform(black_box(snap), &mut rng).unwrap())
    });
    g.finish();
}

fn bench_product_chain(c: &mut Criterion) {
    let e = acquire(
        &SourceSpec::white_noise(),
        AcquisitionMode::TimeEvolving,
        128,
        256,
        5,
        3,
    )
    .unwrap();
    let mut g = c.benchmark_group("product_chain");
    g.sample_size(10);
    g.bench_function("128x256_L5", |b| {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        b.iter(|| product_chain(black_box(&e), ChainOptions::default(), &mut rng).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_sve, bench_product_chain);
criterion_main!(benches);
