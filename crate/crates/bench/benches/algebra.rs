use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use realbun_bench::{dense_square, scrambled_involution};
use realbun_core::{adapted_basis, cross_check, cup1_height, rankr_presentation, series_of};

fn linear_algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("f2");
    for n in [32usize, 128, 512] {
        let m = dense_square(n, 1);
        group.bench_with_input(BenchmarkId::new("rank", n), &m, |b, m| b.iter(|| black_box(m).rank()));
    }
    for g in [8usize, 64] {
        let s = scrambled_involution(g, g / 2, 2);
        group.bench_with_input(BenchmarkId::new("adapted_basis", g), &s, |b, s| {
            b.iter(|| adapted_basis(black_box(s)).unwrap())
        });
    }
    group.finish();
}

fn series(c: &mut Criterion) {
    let mut group = c.benchmark_group("series");
    let large = rankr_presentation(4, 6, 8).unwrap();
    group.bench_function("series_of_4_6_8_cap40", |b| b.iter(|| series_of(black_box(&large), 40).unwrap()));
    let small = rankr_presentation(2, 3, 4).unwrap();
    group.bench_function("series_of_2_3_4_cap512", |b| b.iter(|| series_of(black_box(&small), 512).unwrap()));
    group.bench_function("cross_check_4_6_8", |b| b.iter(|| cross_check(4, 6, 8, 40).unwrap()));
    group.finish();
}

fn steenrod(c: &mut Criterion) {
    let mut group = c.benchmark_group("steenrod");
    for r in [16u32, 64] {
        group.bench_with_input(BenchmarkId::new("cup1_heights", r), &r, |b, &r| {
            b.iter(|| (2..=r).step_by(2).map(|k| cup1_height(k, r).unwrap()).sum::<u32>())
        });
    }
    group.finish();
}

criterion_group!(benches, linear_algebra, series, steenrod);
criterion_main!(benches);
