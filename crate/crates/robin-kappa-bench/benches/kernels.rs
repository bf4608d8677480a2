use criterion::{criterion_group, criterion_main, Criterion};
use robin_kappa::arith::{sigma_kappa, Factorization};
use robin_kappa::constants::{euler_gamma, zeta};
use robin_kappa::critical::{enumerate_critical, f_critical_pa, invert_x};
use robin_kappa::hp::{HPReal, Kappa};
use robin_kappa::poly::build_p;
use robin_kappa::sieve::{scan_robin, sieve_sigma_kappa, RangeScanConfig};
use std::hint::black_box;

fn bench_sieve(c: &mut Criterion) {
    let kappa = Kappa::integer(2).unwrap();
    c.bench_function("sieve_sigma2_100k", |b| {
        b.iter(|| {
            let mut acc = 0u64;
            let config = RangeScanConfig::new(1, 100_000, kappa.clone());
            sieve_sigma_kappa(&config, |_, v| {
                acc ^= v.as_exact().unwrap().to_u64_wrapping();
            })
            .unwrap();
            black_box(acc)
        })
    });
}

fn bench_scan(c: &mut Criterion) {
    let kappa = Kappa::integer(2).unwrap();
    c.bench_function("scan_robin_100k", |b| {
        b.iter(|| black_box(scan_robin(100_000, &kappa, 128).unwrap().len()))
    });
}

fn bench_critical(c: &mut Criterion) {
    let kappa = Kappa::integer(2).unwrap();
    c.bench_function("f_critical_eval", |b| {
        b.iter(|| black_box(f_critical_pa(997, 3, &kappa, 128)))
    });
    c.bench_function("invert_x_a2", |b| {
        let eps = f_critical_pa(1_000_003, 1, &kappa, 128);
        let two = HPReal::from_u64(2, 128);
        b.iter(|| black_box(invert_x(&two, &eps, &kappa, 128).unwrap()))
    });
    c.bench_function("enumerate_critical_30", |b| {
        b.iter(|| black_box(enumerate_critical(&kappa, 30, 128).unwrap().len()))
    });
}

fn bench_arith(c: &mut Criterion) {
    let kappa = Kappa::integer(3).unwrap();
    let fac = Factorization::of(963_761_198_400).unwrap(); // highly composite
    c.bench_function("sigma_kappa_hc", |b| {
        b.iter(|| black_box(sigma_kappa(&fac, &kappa, 0)))
    });
}

fn bench_constants(c: &mut Criterion) {
    c.bench_function("zeta_real_256", |b| {
        // fresh kappa defeats the cache so the summation itself is measured
        let mut i = 0u64;
        b.iter(|| {
            i += 1;
            let k = Kappa::real(HPReal::from_f64(2.0 + (i % 97) as f64 * 1e-6, 256)).unwrap();
            black_box(zeta(&k, 256).unwrap())
        })
    });
    c.bench_function("gamma_cached_128", |b| {
        b.iter(|| black_box(euler_gamma(128).unwrap()))
    });
}

fn bench_poly(c: &mut Criterion) {
    c.bench_function("build_p_20", |b| b.iter(|| black_box(build_p(20).unwrap())));
}

criterion_group!(
    benches,
    bench_sieve,
    bench_scan,
    bench_critical,
    bench_arith,
    bench_constants,
    bench_poly
);
criterion_main!(benches);
