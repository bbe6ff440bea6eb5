use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mproj_core::c0::sample_projection_members;
use mproj_core::chebyshev::{remez, DEFAULT_GRID, DEFAULT_REMEZ_TOL};
use mproj_core::coderivative::{evaluate_along, membership_consistency, witnesses_l1, Dual, GraphPoint, L1Target};
use mproj_core::l1ball::brute_force_oracle;
use mproj_core::{CStarFunctional, EvConstSeq, FiniteSeq, GeoTailSeq};

fn bench_remez(c: &mut Criterion) {
    let mut g = c.benchmark_group("remez");
    g.bench_function("cubic n=2", |b| b.iter(|| remez(&|t: f64| t * t * t - t, black_box(2), DEFAULT_REMEZ_TOL, DEFAULT_GRID)));
    g.bench_function("exp n=4", |b| b.iter(|| remez(&f64::exp, black_box(4), DEFAULT_REMEZ_TOL, DEFAULT_GRID)));
    g.bench_function("abs n=3", |b| b.iter(|| remez(&|t: f64| (t - 0.3).abs(), black_box(3), DEFAULT_REMEZ_TOL, DEFAULT_GRID)));
    g.finish();
}

fn bench_oracle(c: &mut Criterion) {
    let x = FiniteSeq::from_dense(&[0.5, 0.3, 0.2]).unwrap();
    c.bench_function("l1 oracle dim 3 h=1e-2", |b| b.iter(|| brute_force_oracle(black_box(&x), 0.6, 3, 1e-2)));
}

fn bench_c0(c: &mut Criterion) {
    let x = EvConstSeq::new(vec![0.1, -0.7, 2.0, 0.4], -0.3).unwrap();
    c.bench_function("c0 sample 32 members", |b| b.iter(|| sample_projection_members(black_box(&x), 32, 7)));
}

fn bench_coderivative(c: &mut Criterion) {
    let x = GeoTailSeq::new(vec![0.7, 0.2, 0.4], 0.5).unwrap();
    let point = GraphPoint::l1_ball(x.clone(), 0.8).unwrap();
    let psi = EvConstSeq::new(vec![-0.5, 2.0], -1.0).unwrap();
    let paths = witnesses_l1(&x, 0.8, &psi, L1Target::ThetaStar).unwrap();
    let (xs, ys) = (Dual::L1(psi), Dual::L1(EvConstSeq::zero()));
    c.bench_function("l1 witness paths", |b| {
        b.iter(|| paths.iter().map(|p| evaluate_along(p, &xs, &ys, &point).unwrap().extrapolated).sum::<f64>())
    });
    let point = GraphPoint::c_to_c0(EvConstSeq::new(vec![1.0, -2.0], 0.5).unwrap());
    let (xs, ys) = (Dual::C(CStarFunctional::zero()), Dual::C(CStarFunctional::limit_only(3.0)));
    c.bench_function("c consistency battery 64", |b| b.iter(|| membership_consistency(&point, &xs, &ys, 64, 1, 1e-9)));
}

criterion_group!(benches, bench_remez, bench_oracle, bench_c0, bench_coderivative);
criterion_main!(benches);
