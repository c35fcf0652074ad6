//! Chain traces by explicit summation over cyclic auxiliary index chains.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::model;
use crate::lattice::{l_operator, transfer_matrix, Grid};
use crate::qverify::{Construction, Method};

/// `Σ_{c_0..c_{N-1}} ∏_k G[c_k][c_{k-1}][x_k, y_k]` with `c_N = c_0`; site 1 is the
/// fastest lattice digit.
fn chain_entry(grid: &Grid, n: usize, x: usize, y: usize) -> C64 {
    let r = grid.len();
    let d = grid.iter().flatten().flatten().next().unwrap().nrows();
    let digit = |v: usize, k: usize| (v / d.pow(k as u32)) % d;
    let mut total = C64::new(0.0, 0.0);
    for code in 0..r.pow(n as u32) {
        let c: Vec<usize> = (0..n).map(|k| (code / r.pow(k as u32)) % r).collect();
        let mut p = C64::new(1.0, 0.0);
        for k in 0..n {
            let prev = c[(k + n - 1) % n];
            match &grid[c[k]][prev] {
                Some(m) => p *= m[(digit(x, k), digit(y, k))],
                None => {
                    p = C64::new(0.0, 0.0);
                    break;
                }
            }
        }
        total += p;
    }
    total
}

fn compare_all(grid: &Grid, n: usize, dense: &DMatrix<C64>) {
    let scale = dense.norm();
    for x in 0..dense.nrows() {
        for y in 0..dense.ncols() {
            let want = chain_entry(grid, n, x, y);
            assert!((dense[(x, y)] - want).norm() < 1e-12 * scale, "entry ({x},{y}): {} vs {want}", dense[(x, y)]);
        }
    }
}

#[test]
fn baxter_qr_matches_index_summation() {
    let m = model(3, 2, 4);
    let c = Construction::new(m, Method::Baxter).unwrap();
    let u = C64::new(0.17, 0.0);
    compare_all(&c.grid(m, u).unwrap(), 3, &c.qr(m, u).unwrap());
}

#[test]
fn fabricius_qr_matches_index_summation() {
    let m = model(2, 1, 5);
    let c = Construction::new(m, Method::Fabricius).unwrap();
    let u = C64::new(0.17, 0.0);
    compare_all(&c.grid(m, u).unwrap(), 2, &c.qr(m, u).unwrap());
}

#[test]
fn transfer_matrix_matches_index_summation() {
    let m = model(3, 2, 4);
    let u = C64::new(0.23, -0.04);
    compare_all(&l_operator(m, u).unwrap(), 3, &transfer_matrix(m, u).unwrap());
}

#[test]
fn apply_site_matches_kronecker_factor() {
    use crate::lattice::apply_site;
    use nalgebra::DVector;
    let d = 3;
    let a = DMatrix::from_fn(d, d, |i, j| C64::new(i as f64 + 0.3 * j as f64, j as f64 - 0.7));
    let id = DMatrix::<C64>::identity(d, d);
    let x = DVector::from_fn(d * d * d, |i, _| C64::new((i as f64).sin(), (i as f64 * 0.3).cos()));
    // site 2 of three, site 1 fastest: I ⊗ A ⊗ I
    let dense = id.kronecker(&a).kronecker(&id);
    assert!((apply_site(&a, 2, 3, &x) - &dense * &x).norm() < 1e-13 * x.norm());
}
