//! R-matrix, L-operator, ordered chain traces and the transfer matrix.
//!
//! Tensor order follows `H = V_N ⊗ … ⊗ V_1`: site 1 is the rightmost Kronecker
//! factor, i.e. the fastest-running index of a lattice vector.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Result, VqError};
use crate::linalg::{pauli, rel_diff};
use crate::model::Model;
use crate::repspace::SiteMap;
use crate::theta::{check_denominator, ThetaEngine};

pub type BigOp = DMatrix<C64>;

/// Square array of site maps; `grid[i][j]` is the `(i, j)` auxiliary entry and
/// `None` marks a structural zero.
pub type Grid = Vec<Vec<Option<SiteMap>>>;

#[derive(Debug, Clone)]
pub struct TwoSiteR {
    pub matrix: DMatrix<C64>,
    /// Entrywise disagreement between the Σ-form and the explicit form.
    pub form_gap: f64,
}

/// `R(u) = Σ_a W^R_a(u) σ^a ⊗ σ^a`.
pub fn r_matrix_sigma(eng: &ThetaEngine, u: C64, eta: f64) -> Result<DMatrix<C64>> {
    let s = pauli();
    let mut r = DMatrix::zeros(4, 4);
    for (a, sa) in s.iter().enumerate() {
        r += sa.kronecker(sa) * eng.coeff_wr(a, u, eta)?;
    }
    Ok(r)
}

/// The a, b, c, d parametrization with nome modulus `2it`, `t = i/τ`.
pub fn r_matrix_explicit(eng: &ThetaEngine, u: C64, eta: f64) -> Result<DMatrix<C64>> {
    let i = C64::new(0.0, 1.0);
    let t = i / eng.tau();
    let e2 = eng.with_tau(2.0 * i * t)?;
    let th = |a: u8, b: u8, z: C64| e2.theta(a, b, z);
    let x_eta = 2.0 * i * t * eta;
    let x_u = i * t * u;
    let x_u2 = i * t * (u + 2.0 * eta);
    let den = th(0, 1, C64::new(0.0, 0.0))? * th(0, 1, x_eta)? * th(1, 1, x_eta)?;
    check_denominator("R-matrix constant", den)?;
    let c = 2.0 * (-PI * t * u * (u + 2.0 * eta)).exp() / den;
    let a = c * th(0, 1, x_eta)? * th(0, 1, x_u)? * th(1, 1, x_u2)?;
    let b = c * th(0, 1, x_eta)? * th(1, 1, x_u)? * th(0, 1, x_u2)?;
    let cc = c * th(1, 1, x_eta)? * th(0, 1, x_u)? * th(0, 1, x_u2)?;
    let d = c * th(1, 1, x_eta)? * th(1, 1, x_u)? * th(1, 1, x_u2)?;
    let z = C64::new(0.0, 0.0);
    Ok(DMatrix::from_row_slice(4, 4, &[a, z, z, d, z, b, cc, z, z, cc, b, z, d, z, z, a]))
}

/// Both forms, required to agree to 1e-9 relative.
pub fn r_matrix(eng: &ThetaEngine, u: C64, eta: f64) -> Result<TwoSiteR> {
    let sigma = r_matrix_sigma(eng, u, eta)?;
    let explicit = r_matrix_explicit(eng, u, eta)?;
    let gap = rel_diff(&sigma, &explicit);
    if !(gap < 1e-9) {
        return Err(VqError::Convention { what: "R-matrix", residual: gap });
    }
    Ok(TwoSiteR { matrix: sigma, form_gap: gap })
}

/// `L(u)` as a 2×2 grid of site maps; entry `(0,0)` is `L^-_-`, `(0,1)` is `L^-_+`.
pub fn l_operator(model: &Model, u: C64) -> Result<Grid> {
    let s = pauli();
    let d = model.dim();
    let mut g = vec![vec![DMatrix::zeros(d, d), DMatrix::zeros(d, d)], vec![DMatrix::zeros(d, d), DMatrix::zeros(d, d)]];
    for a in 0..4 {
        let w = model.engine.coeff_wl(a, u, model.eta())?;
        for (i, row) in g.iter_mut().enumerate() {
            for (j, blk) in row.iter_mut().enumerate() {
                let c = s[a][(i, j)];
                if c != C64::new(0.0, 0.0) {
                    *blk += &model.gens[a] * (w * c);
                }
            }
        }
    }
    Ok(g.into_iter().map(|row| row.into_iter().map(Some).collect()).collect())
}

/// `L(u)` as one matrix on `V ⊗ C^2` (site factor on the left).
pub fn l_full(model: &Model, u: C64) -> Result<DMatrix<C64>> {
    let s = pauli();
    let d = model.dim();
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    for (a, sa) in s.iter().enumerate() {
        m += model.gens[a].kronecker(sa) * model.engine.coeff_wl(a, u, model.eta())?;
    }
    Ok(m)
}

/// `Σ_a (G_N ⋯ G_1)^a_a` on `V_N ⊗ ⋯ ⊗ V_1`; `grids[0]` belongs to site 1.
pub fn chain_trace(grids: &[Grid]) -> BigOp {
    assert!(!grids.is_empty(), "chain needs at least one site");
    let r0 = grids[0].len();
    let mut p: Vec<Vec<Option<DMatrix<C64>>>> = grids[0].clone();
    for g in &grids[1..] {
        let mut q: Vec<Vec<Option<DMatrix<C64>>>> = vec![vec![None; r0]; r0];
        for a in 0..r0 {
            for b in 0..r0 {
                let mut acc: Option<DMatrix<C64>> = None;
                for c in 0..r0 {
                    if let (Some(x), Some(y)) = (&g[a][c], &p[c][b]) {
                        let t = x.kronecker(y);
                        acc = Some(match acc {
                            Some(s) => s + t,
                            None => t,
                        });
                    }
                }
                q[a][b] = acc;
            }
        }
        p = q;
    }
    let dim = grids.iter().map(site_dim).product();
    let mut out = DMatrix::zeros(dim, dim);
    for (a, row) in p.iter().enumerate() {
        if let Some(m) = &row[a] {
            out += m;
        }
    }
    out
}

fn site_dim(g: &Grid) -> usize {
    g.iter().flatten().flatten().next().map(|m| m.nrows()).expect("grid has a nonzero entry")
}

/// Apply `m` to tensor factor `site` (1-based, site 1 fastest) of `x`.
pub fn apply_site(m: &SiteMap, site: usize, n: usize, x: &DVector<C64>) -> DVector<C64> {
    let d = m.ncols();
    debug_assert_eq!(x.len(), d.pow(n as u32));
    let stride = d.pow(site as u32 - 1);
    let block = stride * d;
    let mut y = DVector::zeros(x.len());
    for outer in (0..x.len()).step_by(block) {
        for inner in 0..stride {
            for i in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..d {
                    acc += m[(i, j)] * x[outer + j * stride + inner];
                }
                y[outer + i * stride + inner] = acc;
            }
        }
    }
    y
}

/// `chain_trace(grids) * x` without forming the lattice operator.
pub fn apply_chain(grids: &[Grid], x: &DVector<C64>) -> DVector<C64> {
    let n = grids.len();
    let r0 = grids[0].len();
    let mut out = DVector::zeros(x.len());
    for a0 in 0..r0 {
        let mut phi: Vec<Option<DVector<C64>>> = vec![None; r0];
        phi[a0] = Some(x.clone());
        for (k, g) in grids.iter().enumerate() {
            let mut next: Vec<Option<DVector<C64>>> = vec![None; r0];
            for (c, slot) in next.iter_mut().enumerate() {
                for cp in 0..r0 {
                    if let (Some(m), Some(v)) = (&g[c][cp], &phi[cp]) {
                        let t = apply_site(m, k + 1, n, v);
                        *slot = Some(match slot.take() {
                            Some(s) => s + t,
                            None => t,
                        });
                    }
                }
            }
            phi = next;
        }
        if let Some(v) = &phi[a0] {
            out += v;
        }
    }
    out
}

pub fn transfer_matrix(model: &Model, u: C64) -> Result<BigOp> {
    check_budget(model)?;
    let l = l_operator(model, u)?;
    Ok(chain_trace(&vec![l; model.params.n]))
}

pub fn transfer_apply(model: &Model, u: C64, x: &DVector<C64>) -> Result<DVector<C64>> {
    let l = l_operator(model, u)?;
    Ok(apply_chain(&vec![l; model.params.n], x))
}

pub(crate) fn check_budget(model: &Model) -> Result<()> {
    let dim = model.params.lattice_dim();
    if dim > model.params.dense_budget {
        return Err(VqError::Budget { dim, budget: model.params.dense_budget });
    }
    Ok(())
}

/// Eight-vertex transfer matrix `tr_0 R_{0N}(u-η) ⋯ R_{01}(u-η)` from the explicit
/// R-matrix, on `(C^2)^{⊗n}`.
pub fn eight_vertex_transfer(eng: &ThetaEngine, u: C64, eta: f64, n: usize) -> Result<BigOp> {
    let r = r_matrix_explicit(eng, u - eta, eta)?;
    let mut grid: Grid = vec![vec![None, None], vec![None, None]];
    for a in 0..2 {
        for b in 0..2 {
            let mut m = DMatrix::zeros(2, 2);
            for s in 0..2 {
                for t in 0..2 {
                    m[(s, t)] = r[(2 * a + s, 2 * b + t)];
                }
            }
            grid[a][b] = Some(m);
        }
    }
    Ok(chain_trace(&vec![grid; n]))
}
