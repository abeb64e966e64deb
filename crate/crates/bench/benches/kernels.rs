use std::f64::consts::PI;

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sdrt_core::mesh::{project_lagrange, MeshGeometry, Velocity};
use sdrt_core::operator::{apply_residual, hardcoded_operator, symbol};
use sdrt_core::rt::assemble_stencil;
use sdrt_core::solver::{rk_step, RkKind, TimeIntegrator};
use sdrt_core::stability::eigen_decompose;

fn bench_apply_residual(c: &mut Criterion) {
    let omega = Velocity::from_angle(PI / 8.0).unwrap();
    let op = hardcoded_operator(omega).unwrap();
    let geometry = MeshGeometry::new(64);
    let u = project_lagrange(|x, y| (2.0 * PI * (x + y)).sin(), geometry);
    c.bench_function("apply_residual_64x64", |b| {
        b.iter(|| apply_residual(black_box(&op), black_box(&u)))
    });
}

fn bench_rk_step(c: &mut Criterion) {
    let omega = Velocity::from_angle(PI / 8.0).unwrap();
    let op = hardcoded_operator(omega).unwrap();
    let geometry = MeshGeometry::new(64);
    let u = project_lagrange(|x, y| (2.0 * PI * (x + y)).sin(), geometry);
    let integ = TimeIntegrator::new(RkKind::Rk3, 0.1, op, geometry);
    let dt = integ.dt();
    c.bench_function("rk3_step_64x64", |b| {
        b.iter(|| rk_step(black_box(&integ), black_box(&u), black_box(dt)))
    });
}

fn bench_eigen_decompose(c: &mut Criterion) {
    let omega = Velocity::from_angle(PI / 8.0).unwrap();
    let op = hardcoded_operator(omega).unwrap();
    let sym = symbol(&op, (1.3, 2.1));
    c.bench_function("eigen_decompose_symbol", |b| {
        b.iter(|| eigen_decompose(black_box(&sym)).unwrap())
    });
}

fn bench_assemble_stencil(c: &mut Criterion) {
    let omega = Velocity::from_angle(PI / 8.0).unwrap();
    c.bench_function("assemble_stencil_float", |b| {
        b.iter(|| assemble_stencil(black_box(omega)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_apply_residual,
    bench_rk_step,
    bench_eigen_decompose,
    bench_assemble_stencil
);
criterion_main!(benches);
