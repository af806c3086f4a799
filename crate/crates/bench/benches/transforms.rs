use criterion::{black_box, criterion_group, criterion_main, Criterion};
use ctht_core::characters::phi_real;
use ctht_core::families::by_name;
use ctht_core::spectral::{forward_on_nodes, forward_transform, modulus_of_continuity, round_trip, QuadratureSpec};
use ctht_core::JacobiParams;

fn characters(c: &mut Criterion) {
    let q = JacobiParams::new(1.0, 0.0).unwrap();
    let mut g = c.benchmark_group("phi_real");
    for (name, lambda, t) in [("small_t", 3.0, 0.2), ("large_t", 3.0, 4.0), ("high_freq", 80.0, 1.5), ("near_zero", 1e-6, 2.0)] {
        g.bench_function(name, |b| b.iter(|| phi_real(&q, black_box(lambda), black_box(t)).unwrap()));
    }
    g.finish();
}

fn transforms(c: &mut Criterion) {
    let q = JacobiParams::new(0.5, 0.5).unwrap();
    let quad = QuadratureSpec::default();
    let f = by_name("cosine_bump").unwrap().sample(quad.output_spacing).unwrap();
    // first calls fill the engine's character tables; the loops below time warm use
    forward_on_nodes(&f, &q, &quad).unwrap();
    round_trip(&f, &q, &quad).unwrap();
    let lambdas: Vec<f64> = (1..=32).map(|i| 0.5 * i as f64).collect();

    let mut g = c.benchmark_group("transform");
    g.bench_function("forward_on_nodes", |b| b.iter(|| forward_on_nodes(black_box(&f), &q, &quad).unwrap()));
    g.bench_function("forward_off_nodes_32", |b| b.iter(|| forward_transform(black_box(&f), &q, &lambdas, &quad).unwrap()));
    g.bench_function("round_trip", |b| b.iter(|| round_trip(black_box(&f), &q, &quad).unwrap()));
    g.sample_size(20);
    g.bench_function("modulus_p1_5", |b| {
        b.iter(|| modulus_of_continuity(black_box(&f), 0.1, 1.5, &q, &quad).unwrap())
    });
    g.finish();
}

criterion_group!(benches, characters, transforms);
criterion_main!(benches);
