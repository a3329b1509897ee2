use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use widthlab::calculus::width_report;
use widthlab::chebyshev::{chebyshev, ChebyshevOptions};
use widthlab::constructions::{random_cw_body_2d, reuleaux_polygon, tetra_ball_body};
use widthlab::experiments::gram_rank;
use widthlab::{DirectionGrid, Similarity};

fn support(c: &mut Criterion) {
    let mut group = c.benchmark_group("support_sample");
    let grid = DirectionGrid::new(2, 4096).unwrap();
    for sides in [3, 7, 15] {
        let body = reuleaux_polygon(1.0, sides, &Similarity::identity(2)).unwrap();
        group.bench_with_input(BenchmarkId::new("reuleaux_polygon", sides), &body, |b, body| {
            b.iter(|| body.sample_support(black_box(&grid)).unwrap())
        });
    }
    let mixture = random_cw_body_2d(1, 1.0, 4).unwrap();
    group.bench_function("mixture_4", |b| b.iter(|| mixture.sample_support(black_box(&grid)).unwrap()));
    let grid3 = DirectionGrid::new(3, 20000).unwrap();
    let tetra = tetra_ball_body(1.0).unwrap();
    group.bench_function("tetra_20000", |b| b.iter(|| width_report(&tetra, black_box(&grid3)).unwrap()));
    group.finish();
}

fn chebyshev_lp(c: &mut Criterion) {
    let opts = ChebyshevOptions::default();
    let mut group = c.benchmark_group("chebyshev");
    for n in [1024, 4096] {
        let grid = DirectionGrid::new(2, n).unwrap();
        let body = random_cw_body_2d(2, 1.0, 3).unwrap();
        group.bench_with_input(BenchmarkId::new("mixture", n), &grid, |b, grid| {
            b.iter(|| chebyshev(&body, grid, &opts).unwrap())
        });
    }
    group.finish();
}

fn gram(c: &mut Criterion) {
    let grid = DirectionGrid::new(2, 8192).unwrap();
    c.bench_function("gram_rank_16", |b| b.iter(|| gram_rank(black_box(16), 1.0, &grid).unwrap()));
}

criterion_group!(benches, support, chebyshev_lp, gram);
criterion_main!(benches);
