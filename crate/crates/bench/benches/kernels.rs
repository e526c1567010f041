//! Benchmarks for the hot kernels: Bessel evaluation branches, the
//! arithmetic sieves, and one full identity verification per family of
//! convergence behavior.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;

use besselsum::arith::rk_table;
use besselsum::identities::{popov_identity_residual, theta_transform_residual};
use besselsum::special::{bessel_i_scaled, bessel_j, exp_weighted_bessel_i};

fn bessel_branches(c: &mut Criterion) {
    c.bench_function("bessel_j series (x=5)", |b| {
        b.iter(|| bessel_j(black_box(1.5), black_box(5.0)).unwrap())
    });
    c.bench_function("bessel_j asymptotic (x=40)", |b| {
        b.iter(|| bessel_j(black_box(1.5), black_box(40.0)).unwrap())
    });
    c.bench_function("bessel_i_scaled complex (w=8+3i)", |b| {
        b.iter(|| bessel_i_scaled(black_box(0.0), black_box(Complex64::new(8.0, 3.0))).unwrap())
    });
    c.bench_function("exp-weighted I kernel", |b| {
        b.iter(|| {
            exp_weighted_bessel_i(
                black_box(0.0),
                black_box(37.0),
                black_box(0.7),
                black_box(Complex64::new(0.8, -0.3)),
            )
            .unwrap()
        })
    });
}

fn arithmetic_tables(c: &mut Criterion) {
    c.bench_function("rk_table k=4 n=100000", |b| {
        b.iter(|| rk_table(black_box(4), black_box(100_000)).unwrap())
    });
}

fn identity_points(c: &mut Criterion) {
    c.bench_function("popov point k=3 z=0.7 t=1+0.5i", |b| {
        b.iter(|| {
            popov_identity_residual(black_box(3), black_box(0.7), Complex64::new(1.0, 0.5)).unwrap()
        })
    });
    c.bench_function("theta point k=4 y=1+i", |b| {
        b.iter(|| theta_transform_residual(black_box(4), Complex64::new(1.0, 1.0)).unwrap())
    });
}

criterion_group!(benches, bessel_branches, arithmetic_tables, identity_points);
criterion_main!(benches);
