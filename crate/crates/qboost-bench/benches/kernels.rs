use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use qboost::coupling::cg::exact_columns;
use qboost::coupling::classical::cg_classical_limit;
use qboost::{build_generator, cg_decompose, check_spinor_identities, verify_relations, GeneratorId};
use qboost_bench::{block, pair, sample_q, PRECISION};

fn spinor(c: &mut Criterion) {
    let p = sample_q();
    c.bench_function("spinor_identities", |b| b.iter(|| check_spinor_identities(black_box(&p)).unwrap()));
}

fn representation(c: &mut Criterion) {
    let p = sample_q();
    let mut g = c.benchmark_group("representation");
    for tl in [1, 4, 8] {
        g.bench_with_input(BenchmarkId::new("build_vz", tl), &tl, |b, &tl| b.iter(|| build_generator(GeneratorId::Vz, block(tl), &p).unwrap()));
        g.bench_with_input(BenchmarkId::new("verify_relations", tl), &tl, |b, &tl| b.iter(|| verify_relations(block(tl), &p).unwrap()));
    }
    g.finish();
}

fn coupling(c: &mut Criterion) {
    let p = sample_q();
    let mut g = c.benchmark_group("coupling");
    g.sample_size(20);
    for (a, b) in [(1, 1), (1, 2), (3, 3)] {
        let id = format!("{}x{}", a, b);
        g.bench_with_input(BenchmarkId::new("cg_decompose", &id), &(a, b), |bch, &(a, b)| bch.iter(|| cg_decompose(pair(a, b), &p, PRECISION).unwrap()));
        g.bench_with_input(BenchmarkId::new("exact_columns", &id), &(a, b), |bch, &(a, b)| bch.iter(|| exact_columns(pair(a, b), &p).unwrap()));
    }
    g.bench_function("classical_limit_1x1", |b| b.iter(|| cg_classical_limit(pair(2, 2), PRECISION).unwrap()));
    g.finish();
}

criterion_group!(benches, spinor, representation, coupling);
criterion_main!(benches);
