use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use nalgebra::DVector;
use vertexq_bench::spin_one_chain;
use vertexq_core::lattice::{apply_chain, l_operator, transfer_matrix};
use vertexq_core::repspace::{build_basis, Quadrature};
use vertexq_core::theta::{ThetaEngine, ThetaParams};
use vertexq_core::C64;

fn theta(c: &mut Criterion) {
    let e = ThetaEngine::new(ThetaParams::default()).unwrap();
    let z = C64::new(0.173, 0.29);
    c.bench_function("theta00", |b| b.iter(|| e.theta(0, 0, black_box(z)).unwrap()));
    c.bench_function("bracket_sym_k2", |b| b.iter(|| e.bracket_sym(black_box(z), C64::new(0.2, 0.0), 2, 0.125).unwrap()));
}

fn gram(c: &mut Criterion) {
    let (m, _) = spin_one_chain();
    let q = Quadrature::new(&m.engine, 2, m.eta(), 64).unwrap();
    c.bench_function("gram_quad64_l1", |b| b.iter(|| q.gram(&m.engine, &m.basis).unwrap()));
    c.bench_function("build_basis_l1", |b| b.iter(|| build_basis(&m.params, &m.engine).unwrap()));
}

fn lattice(c: &mut Criterion) {
    let (m, con) = spin_one_chain();
    let u = C64::new(0.21, -0.03);
    c.bench_function("transfer_matrix_n3_l1", |b| b.iter(|| transfer_matrix(&m, black_box(u)).unwrap()));
    c.bench_function("qr_baxter_n3_l1", |b| b.iter(|| con.qr(&m, black_box(u)).unwrap()));
    let grids = vec![l_operator(&m, u).unwrap(); 3];
    let x = DVector::from_fn(27, |i, _| C64::new(i as f64, 1.0));
    c.bench_function("apply_chain_n3_l1", |b| b.iter(|| apply_chain(&grids, black_box(&x))));
}

criterion_group!(benches, theta, gram, lattice);
criterion_main!(benches);
