//! Pieces shared by both Q_R constructions: generic constants, sparsity
//! patterns, the W matrix built from Sklyanin forms, and diagonal conjugation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;

use crate::lattice::Grid;
use crate::model::Model;
use crate::repspace::{rng_for, ThetaVector};

/// Generic constants `τ_{k j''}` on the annulus `0.5 <= |τ| <= 2`, stored as a
/// `(2l+1) × r0` matrix (row `k`, column `j''`).
pub fn tau_constants(model: &Model, r0: usize, stream: u64) -> DMatrix<C64> {
    let mut rng = rng_for(model.params.seed, stream);
    let d = model.dim();
    let mut t = DMatrix::zeros(d, r0);
    for j in 0..r0 {
        for k in 0..d {
            let rad: f64 = rng.random_range(0.5..=2.0);
            let ph: f64 = rng.random_range(0.0..2.0 * PI);
            t[(k, j)] = C64::from_polar(rad, ph);
        }
    }
    t
}

/// Rank-one site map `e_k ↦ τ_{k j} f`.
pub fn rank_one(f: &ThetaVector, taus: &DMatrix<C64>, j: usize) -> DMatrix<C64> {
    f * taus.column(j).transpose()
}

/// Positions of the structural nonzeros.
pub fn pattern(grid: &Grid) -> Vec<Vec<bool>> {
    grid.iter().map(|row| row.iter().map(|e| e.is_some()).collect()).collect()
}

/// `W(j,i|u,v)`: entry `((j''',i'''),(j'',i''))` is
/// `⟨S^{j'''}_{j''}(-ū) e_j, S^{i'''}_{i''}(v) e_i⟩`, rows and columns ordered
/// `j'' * r0 + i''` (0-based).
pub fn w_numeric(model: &Model, left: &Grid, right: &Grid, j: usize, i: usize) -> DMatrix<C64> {
    let r0 = left.len();
    let mut w = DMatrix::zeros(r0 * r0, r0 * r0);
    for j3 in 0..r0 {
        for j2 in 0..r0 {
            let Some(sl) = &left[j3][j2] else { continue };
            let a: DVector<C64> = sl.column(j).into();
            for i3 in 0..r0 {
                for i2 in 0..r0 {
                    let Some(sr) = &right[i3][i2] else { continue };
                    let b: DVector<C64> = sr.column(i).into();
                    w[(j3 * r0 + i3, j2 * r0 + i2)] = model.basis.form(&a, &b);
                }
            }
        }
    }
    w
}

/// `‖diag(y) W diag(y)^{-1} − W'‖ / ‖W'‖`.
pub fn conjugation_residual(y: &[C64], w: &DMatrix<C64>, w_swapped: &DMatrix<C64>) -> f64 {
    let mut c = w.clone();
    for r in 0..c.nrows() {
        for s in 0..c.ncols() {
            c[(r, s)] *= y[r] / y[s];
        }
    }
    (c - w_swapped).norm() / w_swapped.norm().max(f64::MIN_POSITIVE)
}

/// Largest `‖S^i_j‖` over the grid, used to scale per-entry residuals.
pub fn grid_scale(grid: &Grid) -> f64 {
    grid.iter().flatten().flatten().map(|m| m.norm()).fold(0.0, f64::max)
}

/// `U S^i_j(u)` for each entry.
pub fn left_multiply(grid: &Grid, u: &DMatrix<C64>) -> Grid {
    grid.iter().map(|row| row.iter().map(|e| e.as_ref().map(|m| u * m)).collect()).collect()
}

/// Number of entries where `a` and `b` differ by more than `tol` relative to the
/// larger modulus.
pub fn entry_mismatches(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> usize {
    a.iter()
        .zip(b.iter())
        .filter(|(x, y)| (*x - *y).norm() > tol * x.norm().max(y.norm()))
        .count()
}
