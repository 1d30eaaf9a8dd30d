use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use formsums::arith::factorize;
use formsums::fpd::{reduce_full, remove_all_fpd};
use formsums::roots::rho_prime_power;
use formsums::{s_sum, t_sum};
use formsums_bench::{cubic_form, quadratic, quintic_with_fpd, tau, SEMIPRIME};

fn factor(c: &mut Criterion) {
    c.bench_function("factorize/semiprime", |b| b.iter(|| factorize(black_box(SEMIPRIME)).unwrap()));
    c.bench_function("factorize/1e6 range", |b| {
        b.iter(|| (1_000_000u64..1_001_000).map(|n| factorize(n).unwrap().factors().len()).sum::<usize>())
    });
}

fn roots(c: &mut Criterion) {
    let f = quadratic();
    let mut g = c.benchmark_group("rho_prime_power");
    for (p, l) in [(5u64, 8u32), (1_000_003, 2), (2, 20)] {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{p}^{l}")), &(p, l), |b, &(p, l)| {
            b.iter(|| rho_prime_power(&f, p, l).unwrap())
        });
    }
    g.finish();
}

fn sums(c: &mut Criterion) {
    let (h, form, poly) = (tau(), cubic_form(), quadratic());
    let mut g = c.benchmark_group("sums");
    g.sample_size(10);
    g.bench_function("s_sum 200x200", |b| b.iter(|| s_sum(200, 200, &h, &form).unwrap()));
    g.bench_function("t_sum 1e5", |b| b.iter(|| t_sum(100_000, &h, &poly).unwrap()));
    g.finish();
}

fn reduction(c: &mut Criterion) {
    let f = quintic_with_fpd();
    c.bench_function("reduce_full/p=2", |b| b.iter(|| reduce_full(&f, 2).unwrap()));
    c.bench_function("remove_all_fpd", |b| b.iter(|| remove_all_fpd(&f).unwrap()));
}

criterion_group!(kernels, factor, roots, sums, reduction);
criterion_main!(kernels);
