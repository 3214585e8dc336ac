use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mgh_core::circuits::gates::{cphase, swap};
use mgh_core::hierarchy::{fit_rotation, min_level};
use mgh_core::random::random_matchgate_circuit;
use mgh_core::{circuit_to_operator, classify, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn levels(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut g = c.benchmark_group("min_level");
    g.bench_function("swap", |b| b.iter(|| min_level(&swap(), 4, &tol).unwrap()));
    let t = cphase(std::f64::consts::FRAC_PI_4);
    g.bench_function("cphase_pi_4", |b| b.iter(|| min_level(&t, 6, &tol).unwrap()));
    g.finish();

    c.bench_function("classify_swap", |b| b.iter(|| classify(&swap(), 4, &tol).unwrap()));
}

fn rotations(c: &mut Criterion) {
    let mut g = c.benchmark_group("fit_rotation");
    for n in [3, 4, 5] {
        let u = circuit_to_operator(&random_matchgate_circuit(n, 20, &mut ChaCha8Rng::seed_from_u64(1)));
        g.bench_with_input(BenchmarkId::from_parameter(n), &u, |b, u| b.iter(|| fit_rotation(u)));
    }
    g.finish();
}

criterion_group!(benches, levels, rotations);
criterion_main!(benches);
