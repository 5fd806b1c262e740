use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use naimark_core::dilation::dilate;
use naimark_core::frames::classify;
use naimark_core::gen::{generate, GenKind, GenSpec};
use naimark_core::verify::verify_dilation;
use naimark_core::{DilationMode, Tolerances};
use std::hint::black_box;

const SHAPES: [(usize, usize); 3] = [(4, 8), (8, 16), (16, 32)];

fn bench_classify(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("classify");
    for (d, n) in SHAPES {
        let sys = generate(&GenSpec::new(GenKind::Random, d, n, 1)).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{d}x{n}")),
            &sys,
            |b, sys| b.iter(|| classify(black_box(sys), &tol)),
        );
    }
    group.finish();
}

fn bench_dilate(c: &mut Criterion) {
    let tol = Tolerances::default();
    for mode in DilationMode::ALL {
        let mut group = c.benchmark_group(format!("dilate/{mode}"));
        for (d, n) in SHAPES {
            let kind = if mode == DilationMode::Tight {
                GenKind::RandomTight
            } else {
                GenKind::Random
            };
            let sys = generate(&GenSpec::new(kind, d, n, 1)).unwrap();
            group.bench_with_input(
                BenchmarkId::from_parameter(format!("{d}x{n}")),
                &sys,
                |b, sys| b.iter(|| dilate(black_box(sys), mode, &tol).unwrap()),
            );
        }
        group.finish();
    }
}

fn bench_verify(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("verify/bessel");
    for (d, n) in SHAPES {
        let spec = GenSpec::new(GenKind::RankDeficient, d, n, 1);
        let sys = generate(&spec).unwrap();
        let dil = dilate(&sys, DilationMode::Bessel, &tol).unwrap();
        group.bench_with_input(
            BenchmarkId::from_parameter(format!("{d}x{n}")),
            &(sys, dil),
            |b, (sys, dil)| {
                b.iter(|| verify_dilation(black_box(sys), black_box(dil), &tol).unwrap())
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_classify, bench_dilate, bench_verify);
criterion_main!(benches);
