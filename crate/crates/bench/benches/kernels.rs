use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use quatlift::hnf::hnf;
use quatlift::{ClassModule, ClassTower, QuadForm};

fn hnf_bench(c: &mut Criterion) {
    let gens: Vec<Vec<i128>> = (0..16)
        .map(|k: i128| (0..4).map(|j| (k * 37 + j * 11 + k * j * 5) % 97 - 48).collect())
        .collect();
    c.bench_function("hnf 16 generators rank 4", |b| b.iter(|| hnf(black_box(&gens), 4).unwrap()));
}

fn enumeration_bench(c: &mut Criterion) {
    let q = QuadForm::new(vec![vec![2, 1, 0, 0], vec![1, 4, 1, 0], vec![0, 1, 8, 3], vec![0, 0, 3, 14]]);
    c.bench_function("theta series rank 4 to 500", |b| b.iter(|| black_box(&q).theta(500).unwrap()));
    let t = QuadForm::new(vec![vec![4, 2, 1], vec![2, 30, 7], vec![1, 7, 58]]);
    c.bench_function("theta series rank 3 to 5000", |b| b.iter(|| black_box(&t).theta(5000).unwrap()));
}

fn brandt_bench(c: &mut Criterion) {
    let ct = ClassTower::new(11).unwrap();
    let mut g = c.benchmark_group("brandt");
    g.sample_size(10);
    g.bench_function("M(Õ) p=11, B_1..B_40", |b| {
        b.iter(|| {
            let m = ClassModule::new(ct.tilde.clone()).unwrap();
            m.brandt_matrices(40).unwrap()
        })
    });
    g.bench_function("class tower p=7", |b| b.iter(|| ClassTower::new(black_box(7)).unwrap()));
    g.finish();
}

criterion_group!(benches, hnf_bench, enumeration_bench, brandt_bench);
criterion_main!(benches);
