//! Criterion benchmarks for the hot kernels: product expansion, lattice
//! enumeration, residue screening, dissection-matrix assembly, and a full
//! small mining run.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qklein::klein::{product_series, ExponentVector};
use qklein::lattice::enumerate;
use qklein::linalg::{build_basis, build_up_matrix};
use qklein::miner::{mine, screen, MinerConfig};
use qklein::modseries::product_coeffs_mod;

fn ev(p: u64, a: &[i64]) -> ExponentVector {
    ExponentVector::from_slice(p, a).unwrap()
}

fn bench_product_series(c: &mut Criterion) {
    let v = ev(13, &[6, 1, 0, 0, 0, 0, -4]);
    c.bench_function("product_series_13_to_400", |b| {
        b.iter(|| product_series(black_box(&v), 400).unwrap())
    });
}

fn bench_mod_coeffs(c: &mut Criterion) {
    let v = ev(19, &[6, 1, 0, 0, 0, 0, 0, 0, 0, -4]);
    c.bench_function("mod_coeffs_19_to_2000", |b| {
        b.iter(|| product_coeffs_mod(black_box(&v), 2000, 19))
    });
}

fn bench_enumerate(c: &mut Criterion) {
    c.bench_function("enumerate_11_8", |b| b.iter(|| enumerate(11, 8).unwrap()));
    c.bench_function("enumerate_13_6", |b| b.iter(|| enumerate(13, 6).unwrap()));
}

fn bench_screen(c: &mut Criterion) {
    let points = enumerate(11, 6).unwrap();
    c.bench_function("screen_11_6_all", |b| {
        b.iter(|| points.iter().filter(|v| screen(v, 2)).count())
    });
}

fn bench_up_matrix(c: &mut Criterion) {
    c.bench_function("up_matrix_11_3", |b| {
        b.iter(|| {
            let basis = build_basis(11, 3).unwrap();
            build_up_matrix(&basis).unwrap()
        })
    });
}

fn bench_mine(c: &mut Criterion) {
    let cfg = MinerConfig::for_prime(5);
    c.bench_function("mine_5_8", |b| b.iter(|| mine(5, 8, &cfg).unwrap()));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = bench_product_series, bench_mod_coeffs, bench_enumerate, bench_screen,
              bench_up_matrix, bench_mine
}
criterion_main!(kernels);
