use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use secvar_core::{secant_dimension, ComputeConfig, Method, VarietySpec};

fn secant(c: &mut Criterion) {
    let cases = [
        ("p1xp1_88_s27", vec![1, 1], vec![8, 8], 27),
        ("p1cubed_222_s7", vec![1, 1, 1], vec![2, 2, 2], 7),
        ("p3xp3_41_s21", vec![3, 3], vec![4, 1], 21),
        ("p1p1p2p5_2111_s11", vec![1, 1, 2, 5], vec![2, 1, 1, 1], 11),
    ];
    let mut group = c.benchmark_group("secant_dimension");
    group.sample_size(10);
    for (name, factors, degree, s) in cases {
        let spec = VarietySpec::from_parts(&factors, &degree).unwrap();
        for method in [Method::Direct, Method::Reduced] {
            let cfg = ComputeConfig {
                method,
                trials: 1,
                ..ComputeConfig::with_seed(1)
            };
            group.bench_function(format!("{name}/{method}"), |b| {
                b.iter(|| secant_dimension(black_box(&spec), s, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, secant);
criterion_main!(benches);
