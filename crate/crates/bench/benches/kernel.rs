use criterion::{black_box, criterion_group, criterion_main, Criterion};
use torusgreen::gle::{accessory_point, discriminant_ode};
use torusgreen::green::{census, DEFAULT_GRID};
use torusgreen::{compute_invariants, inverse_wp, Complex64 as C64, TorusPoint};

fn kernel(c: &mut Criterion) {
    c.bench_function("compute_invariants", |bench| bench.iter(|| compute_invariants(black_box(1.3)).unwrap()));
    let l = compute_invariants(1.3).unwrap();
    let z = C64::new(0.17, 0.41);
    c.bench_function("eval", |bench| bench.iter(|| l.eval(black_box(z)).unwrap()));
    let w = l.wp(z).unwrap();
    c.bench_function("inverse_wp", |bench| bench.iter(|| inverse_wp(black_box(w), &l).unwrap()));
}

fn critical_points(c: &mut Criterion) {
    let l = compute_invariants(1.0).unwrap();
    let p = TorusPoint::new(0.21, 0.07, 1.0);
    let mut g = c.benchmark_group("census");
    g.sample_size(20);
    g.bench_function("grid_48", |bench| bench.iter(|| census(black_box(&p), &l, DEFAULT_GRID).unwrap()));
    g.finish();
}

fn discriminants(c: &mut Criterion) {
    let l = compute_invariants(1.0).unwrap();
    let p = TorusPoint::new(0.3, 0.1, 1.0);
    let a = C64::new(0.7, -0.4);
    c.bench_function("discriminant_closed_form", |bench| bench.iter(|| accessory_point(black_box(a), &p, &l, None).unwrap()));
    let mut g = c.benchmark_group("discriminant_ode");
    g.sample_size(20);
    g.bench_function("j1", |bench| bench.iter(|| discriminant_ode(black_box(a), &p, &l, 1).unwrap()));
    g.finish();
}

criterion_group!(benches, kernel, critical_points, discriminants);
criterion_main!(benches);
