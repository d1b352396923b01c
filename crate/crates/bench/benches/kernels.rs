use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hjts::geometry::{kahler_matrix, PotentialId};
use hjts::harness::{run_suite, sample_domain, Suite, SuiteConfig, DEFAULT_KINDS};
use hjts::linalg::{hermitian_eigen, svd, takagi};
use hjts::{psi, spectral_decompose, CMatrix, DualityRoute, JtsKind, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn random_matrix(rng: &mut ChaCha20Rng, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

fn linalg(c: &mut Criterion) {
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let mut group = c.benchmark_group("linalg");
    for n in [4, 8, 16] {
        let a = random_matrix(&mut rng, n);
        let h = &a + &a.adjoint();
        let s = &a + &a.transpose();
        group.bench_with_input(BenchmarkId::new("svd", n), &a, |b, a| b.iter(|| svd(black_box(a))));
        group.bench_with_input(BenchmarkId::new("hermitian_eigen", n), &h, |b, h| {
            b.iter(|| hermitian_eigen(black_box(h)))
        });
        group.bench_with_input(BenchmarkId::new("takagi", n), &s, |b, s| b.iter(|| takagi(black_box(s))));
    }
    group.finish();
}

fn duality(c: &mut Criterion) {
    let mut group = c.benchmark_group("duality");
    for k in DEFAULT_KINDS {
        let kind: JtsKind = k.parse().unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let z = sample_domain(&kind, &mut rng, 0.95).unwrap();
        group.bench_with_input(BenchmarkId::new("spectral_decompose", k), &z, |b, z| {
            b.iter(|| spectral_decompose(black_box(z)))
        });
        for route in DualityRoute::ALL {
            let id = format!("{k}/{route:?}");
            group.bench_with_input(BenchmarkId::new("psi", id), &z, |b, z| b.iter(|| psi(black_box(z), route)));
        }
    }
    group.finish();
}

fn geometry(c: &mut Criterion) {
    let mut group = c.benchmark_group("geometry");
    group.sample_size(20);
    for k in ["I:1,1", "I:2,2", "IV:4"] {
        let kind: JtsKind = k.parse().unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        let z = sample_domain(&kind, &mut rng, 0.95).unwrap();
        group.bench_with_input(BenchmarkId::new("kahler_hyperbolic", k), &z, |b, z| {
            b.iter(|| kahler_matrix(PotentialId::Hyperbolic, black_box(z), 1e-3))
        });
    }
    group.finish();
}

fn harness(c: &mut Criterion) {
    let mut group = c.benchmark_group("harness");
    group.sample_size(10);
    let cfg = SuiteConfig { points: 10, suites: vec![Suite::Symplectic], threads: Some(0), ..SuiteConfig::default() };
    group.bench_function("symplectic_10_points_default_kinds", |b| b.iter(|| run_suite(black_box(&cfg))));
    group.finish();
}

criterion_group!(benches, linalg, duality, geometry, harness);
criterion_main!(benches);
