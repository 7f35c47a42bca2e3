use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qtree_bench::params;
use qtree_core::multihahn::{full_basis, gram_matrix};
use qtree_core::{connection_by_path, eval_grid, CoefLabeling, PlanarTree};

fn evaluation(c: &mut Criterion) {
    let p = params(4);
    let t = PlanarTree::parse("((1 2)(3 4))").unwrap();
    let lab = CoefLabeling(vec![1, 1, 1]);
    c.bench_function("eval_grid h4 N6", |b| {
        b.iter(|| eval_grid(black_box(&t), &lab, &p, 6).unwrap())
    });
}

fn gram(c: &mut Criterion) {
    let p = params(4);
    let t = PlanarTree::parse("(1 ((2 3) 4))").unwrap();
    let elems = full_basis(&t, &p, 4).unwrap();
    c.bench_function("gram_matrix h4 N4", |b| {
        b.iter(|| gram_matrix(black_box(&elems), &p).unwrap())
    });
}

fn connection(c: &mut Criterion) {
    let p = params(5);
    let rc = PlanarTree::right_comb(5).unwrap();
    let lc = PlanarTree::left_comb(5).unwrap();
    c.bench_function("connection_by_path combs h5 n3", |b| {
        b.iter(|| connection_by_path(black_box(&rc), &lc, 3, &p).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = evaluation, gram, connection
}
criterion_main!(benches);
