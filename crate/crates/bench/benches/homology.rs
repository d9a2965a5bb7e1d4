use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};
use qhom_bench::engine;
use qhom_core::cocycle::MochizukiCocycle;
use qhom_core::ops::induced_map;
use qhom_core::snf::IntReduction;
use qhom_core::{ChainMapSpec, FiniteRack, MapName, Theory};

fn homology(c: &mut Criterion) {
    let mut g = c.benchmark_group("homology");
    g.sample_size(10);
    g.bench_function("R3 rack H_3", |b| b.iter(|| engine(3, Theory::Rack).summary(black_box(3))));
    g.bench_function("R5 rack H_3", |b| b.iter(|| engine(5, Theory::Rack).summary(black_box(3))));
    g.bench_function("R3 rack H_6", |b| b.iter(|| engine(3, Theory::Rack).summary(black_box(6))));
    g.bench_function("R3 quandle H_9", |b| b.iter(|| engine(3, Theory::Quandle).summary(black_box(9))));
    g.bench_function("R7 quandle H_3", |b| b.iter(|| engine(7, Theory::Quandle).summary(black_box(3))));
    g.finish();
}

fn reduction(c: &mut Criterion) {
    let e = engine(3, Theory::Rack);
    let d = e.boundary_matrix(7);
    let mut g = c.benchmark_group("reduction");
    g.sample_size(10);
    g.bench_function("IntReduction R3 rack ∂_7", |b| b.iter(|| IntReduction::new(black_box(&d))));
    g.bench_function("certify R3 rack ∂_7", |b| {
        let red = IntReduction::new(&d);
        b.iter(|| red.certify(black_box(&d)).unwrap())
    });
    g.bench_function("mod-3 homology R3 rack H_6", |b| b.iter(|| engine(3, Theory::Rack).homology_mod(black_box(6), 3).unwrap()));
    g.finish();
}

fn operations(c: &mut Criterion) {
    let rack = Arc::new(FiniteRack::dihedral(5).unwrap());
    let mut g = c.benchmark_group("operations");
    g.sample_size(10);
    g.bench_function("verify hprime:0 on R5 n=4", |b| {
        b.iter(|| {
            let f = ChainMapSpec::named(&MapName::HPrime(0), &rack, Theory::Rack).unwrap();
            f.verify(black_box(4)).unwrap()
        })
    });
    let src = engine(3, Theory::Quandle);
    src.summary(3);
    src.summary(5);
    let r3 = Arc::new(FiniteRack::dihedral(3).unwrap());
    g.bench_function("induced hs:1 on H_3^Q(R3)", |b| {
        b.iter(|| {
            let f = ChainMapSpec::named(&MapName::Hs(1), &r3, Theory::Quandle).unwrap();
            induced_map(&f, black_box(3), &src, &src).unwrap()
        })
    });
    g.bench_function("cocycle check p=7", |b| {
        let theta = MochizukiCocycle::new(7).unwrap();
        b.iter(|| black_box(theta.coboundary_witness()))
    });
    g.finish();
}

criterion_group!(benches, homology, reduction, operations);
criterion_main!(benches);
