//! Q_R from a cyclic tridiagonal 2r×2r grid built on pseudo-vacuum vectors of
//! the L-operator twisted by the gauge matrices `M_λ(v)`.
//!
//! Auxiliary indices run over `1..=2r` and are taken mod 2r.

use std::collections::VecDeque;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{Result, VqError};
use crate::lattice::{chain_trace, check_budget, l_operator, BigOp, Grid};
use crate::linalg::rel_diff;
use crate::model::Model;
use crate::repspace::{stream, ThetaVector};
use crate::sgrid::{conjugation_residual, grid_scale, rank_one, tau_constants, w_numeric};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `M_λ(v) = [[-θ00((λ-v)/2), -θ00((λ+v)/2)], [θ01((λ-v)/2), θ01((λ+v)/2)]]` at modulus τ/2.
pub fn gauge_m(model: &Model, lambda: C64, v: C64) -> Result<DMatrix<C64>> {
    let h = &model.half;
    let (a, b) = ((lambda - v) / 2.0, (lambda + v) / 2.0);
    Ok(DMatrix::from_row_slice(
        2,
        2,
        &[-h.theta(0, 0, a)?, -h.theta(0, 0, b)?, h.theta(0, 1, a)?, h.theta(0, 1, b)?],
    ))
}

/// `ω_λ(u;v) = [z; (λ+u-v)/2 + (1-l)η]_{2l}`.
pub fn omega_vector(model: &Model, lambda: C64, u: C64, v: C64) -> Result<ThetaVector> {
    model.sym((lambda + u - v) / 2.0 + (1.0 - model.l()) * model.eta())
}

/// `λ_j = λ_0 + 4jlη`.
pub fn lambda_j(model: &Model, j: i64) -> C64 {
    model.params.lambda0 + 4.0 * j as f64 * model.l() * model.eta()
}

/// Size of the auxiliary space.
pub fn aux_size(model: &Model) -> usize {
    2 * model.params.r
}

/// 1-based index reduced into `1..=2r`.
pub fn wrap(model: &Model, i: i64) -> usize {
    let r2 = aux_size(model) as i64;
    ((i - 1).rem_euclid(r2) + 1) as usize
}

/// `+1` if `upper = lower + 1`, `-1` if `upper = lower - 1` (mod 2r), else `None`.
pub fn step_sign(model: &Model, upper: usize, lower: usize) -> Option<i64> {
    if upper == wrap(model, lower as i64 + 1) {
        Some(1)
    } else if upper == wrap(model, lower as i64 - 1) {
        Some(-1)
    } else {
        None
    }
}

pub fn require_even(model: &Model) -> Result<()> {
    if model.params.n % 2 == 1 {
        return Err(VqError::OddSites(model.params.n));
    }
    Ok(())
}

pub fn fabricius_taus(model: &Model) -> DMatrix<C64> {
    tau_constants(model, aux_size(model), stream::TAU_FABRICIUS)
}

/// `S^{j+1}_j(u) = ω_{λ_j}(u;v) τ_j^T`, `S^{j-1}_j(u) = ω_{-λ_j}(u;-v) τ_j^T`.
pub fn build_s_fab(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<Grid> {
    let r2 = aux_size(model);
    let v = model.params.v;
    let mut grid: Grid = vec![vec![None; r2]; r2];
    for j in 1..=r2 {
        let lam = lambda_j(model, j as i64);
        let up = omega_vector(model, lam, u, v)?;
        let dn = omega_vector(model, -lam, u, -v)?;
        grid[wrap(model, j as i64 + 1) - 1][j - 1] = Some(rank_one(&up, taus, j - 1));
        grid[wrap(model, j as i64 - 1) - 1][j - 1] = Some(rank_one(&dn, taus, j - 1));
    }
    Ok(grid)
}

pub fn qr_fab(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<BigOp> {
    require_even(model)?;
    check_budget(model)?;
    let g = build_s_fab(model, u, taus)?;
    Ok(chain_trace(&vec![g; model.params.n]))
}

/// `M_λ^{-1} L(u) M_{λ'}` as a 2×2 grid.
pub fn twisted_l(model: &Model, u: C64, lambda: C64, lambda_p: C64, v: C64) -> Result<Grid> {
    let l = l_operator(model, u)?;
    let ml = gauge_m(model, lambda, v)?;
    let inv = ml.try_inverse().ok_or(VqError::NearZero { what: "gauge matrix", modulus: 0.0 })?;
    let mr = gauge_m(model, lambda_p, v)?;
    let d = model.dim();
    let mut out: Grid = vec![vec![None, None], vec![None, None]];
    for (a, row) in out.iter_mut().enumerate() {
        for (b, slot) in row.iter_mut().enumerate() {
            let mut acc = DMatrix::zeros(d, d);
            for c in 0..2 {
                for e in 0..2 {
                    acc += l[c][e].as_ref().unwrap() * (inv[(a, c)] * mr[(e, b)]);
                }
            }
            *slot = Some(acc);
        }
    }
    Ok(out)
}

/// Action of the twisted L-operator on pseudo-vacua, for both branches and all
/// `λ_j`: `[γ ω, α ω − 2[u+2lη] ω(u−2η), δ ω − 2[u−2lη][λ]/[λ±4lη] ω(u+2η)]`,
/// each relative to `‖ω‖` times the entry norm.
pub fn action_on_vac_residuals(model: &Model, u: C64) -> Result<[f64; 3]> {
    let le4 = 4.0 * model.l() * model.eta();
    let two_eta = 2.0 * model.eta();
    let v = model.params.v;
    let ca = 2.0 * model.br(u + le4 / 2.0)?;
    let cd = 2.0 * model.br(u - le4 / 2.0)?;
    let mut worst = [0.0f64; 3];
    for j in 1..=aux_size(model) {
        let lam = lambda_j(model, j as i64);
        for sg in [1.0, -1.0] {
            let tw = twisted_l(model, u, lam + sg * le4, lam, v)?;
            let (alpha, gamma, delta) = (tw[0][0].as_ref().unwrap(), tw[1][0].as_ref().unwrap(), tw[1][1].as_ref().unwrap());
            let om = omega_vector(model, sg * lam, u, sg * v)?;
            let on = om.norm();
            let a_want = omega_vector(model, sg * lam, u - two_eta, sg * v)? * ca;
            let d_want = omega_vector(model, sg * lam, u + two_eta, sg * v)? * (cd * model.br(lam)? / model.br(lam + sg * le4)?);
            worst[0] = worst[0].max((gamma * &om).norm() / (gamma.norm() * on));
            worst[1] = worst[1].max((alpha * &om - &a_want).norm() / (alpha.norm() * on));
            worst[2] = worst[2].max((delta * &om - &d_want).norm() / (delta.norm() * on));
        }
    }
    Ok(worst)
}

/// Block residuals of `M̃^{-1}(L ⊗ S)M̃` with `M̃_i = M_{λ_i}(v)`: the vanishing
/// lower-left block, `A = 2[u+2lη]S(u-2η)` and `D = X^{-1}(2[u-2lη]S(u+2η))X`
/// with `X = diag([λ_i])`.
pub fn block_residuals_fab(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<crate::qbaxter::BlockResiduals> {
    let two_eta = 2.0 * model.eta();
    let le2 = 2.0 * model.l() * model.eta();
    let v = model.params.v;
    let s = build_s_fab(model, u, taus)?;
    let s_up = build_s_fab(model, u + two_eta, taus)?;
    let s_dn = build_s_fab(model, u - two_eta, taus)?;
    let ca = 2.0 * model.br(u + le2)?;
    let cd = 2.0 * model.br(u - le2)?;
    let (mut off, mut tot, mut ea, mut na, mut ed, mut nd) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for i in 1..=aux_size(model) {
        for j in 1..=aux_size(model) {
            let Some(m) = &s[i - 1][j - 1] else { continue };
            let (li, lj) = (lambda_j(model, i as i64), lambda_j(model, j as i64));
            let tw = twisted_l(model, u, li, lj, v)?;
            let g = |a: usize, b: usize| tw[a][b].as_ref().unwrap() * m;
            let (a_num, b_num, c_num, d_num) = (g(0, 0), g(0, 1), g(1, 0), g(1, 1));
            let a_cl = s_dn[i - 1][j - 1].as_ref().unwrap() * ca;
            let d_cl = s_up[i - 1][j - 1].as_ref().unwrap() * (cd * model.br(lj)? / model.br(li)?);
            off += c_num.norm_squared();
            tot += a_num.norm_squared() + b_num.norm_squared() + d_num.norm_squared();
            ea += (&a_num - &a_cl).norm_squared();
            na += a_cl.norm_squared();
            ed += (&d_num - &d_cl).norm_squared();
            nd += d_cl.norm_squared();
        }
    }
    Ok(crate::qbaxter::BlockResiduals { off_block: (off / tot).sqrt(), a: (ea / na).sqrt(), d: (ed / nd).sqrt() })
}

/// `‖M_{λ+4rlη} − M_λ‖`, `‖ω_{λ+4rlη} − ω_λ‖`, `‖ω_{λ+2η}(u) − ω_λ(u+2η)‖` and
/// `|[λ+4rlη] − [λ]|`, each relative, worst over `λ_j`.
pub fn period_residuals(model: &Model, u: C64) -> Result<[f64; 4]> {
    let period = 4.0 * model.params.r as f64 * model.l() * model.eta();
    let two_eta = 2.0 * model.eta();
    let v = model.params.v;
    let mut w = [0.0f64; 4];
    for j in 1..=aux_size(model) {
        let lam = lambda_j(model, j as i64);
        w[0] = w[0].max(rel_diff(&gauge_m(model, lam + period, v)?, &gauge_m(model, lam, v)?));
        let om = omega_vector(model, lam, u, v)?;
        let a = omega_vector(model, lam + period, u, v)?;
        w[1] = w[1].max((&a - &om).norm() / om.norm());
        let b = omega_vector(model, lam + two_eta, u, v)?;
        let c = omega_vector(model, lam, u + two_eta, v)?;
        w[2] = w[2].max((&b - &c).norm() / c.norm());
        let (x, y) = (model.br(lam + period)?, model.br(lam)?);
        w[3] = w[3].max((x - y).norm() / y.norm());
    }
    Ok(w)
}

/// `(u^{(1)}, μ^{(1)})` and `(u^{(2)}, μ^{(2)})` keyed by the right step `si` and the
/// left step `sj`; `u^{(k)}` is returned as integer coefficients of `(u', u)`.
pub fn u_mu_tables(si: i64, sj: i64) -> ((i64, i64, i64), (i64, i64, i64)) {
    match (si, sj) {
        (1, 1) => ((1, 1, 0), (1, -1, 2)),
        (1, -1) => ((1, -1, 2), (1, 1, 0)),
        (-1, 1) => ((-1, 1, -2), (-1, -1, 0)),
        (-1, -1) => ((-1, -1, 0), (-1, 1, -2)),
        _ => panic!("steps are ±1"),
    }
}

/// Closed form of `W(j,i|u,u')` for the cyclic grid.
pub fn w_closed_fab(model: &Model, taus: &DMatrix<C64>, j: usize, i: usize, u: C64, u_p: C64) -> Result<DMatrix<C64>> {
    let r2 = aux_size(model);
    let (eng, tl, eta) = (&model.engine, model.params.two_l, model.eta());
    let le = model.l() * eta;
    let shift = model.params.lambda0 - model.params.v;
    let cp = eng.c_prime(tl, eta)?;
    let mut w = DMatrix::zeros(r2 * r2, r2 * r2);
    for j3 in 1..=r2 {
        for j2 in 1..=r2 {
            let Some(sj) = step_sign(model, j3, j2) else { continue };
            for i3 in 1..=r2 {
                for i2 in 1..=r2 {
                    let Some(si) = step_sign(model, i3, i2) else { continue };
                    let ((a1, b1, m1), (a2, b2, m2)) = u_mu_tables(si, sj);
                    let u1 = a1 as f64 * u_p + b1 as f64 * u;
                    let u2 = a2 as f64 * u_p + b2 as f64 * u;
                    let x1 = I * shift.im + 2.0 * (i2 as f64 - j2 as f64) * le + u1 / 2.0 + m1 as f64 * le;
                    let x2 = shift.re + 2.0 * (i2 + j2) as f64 * le + u2 / 2.0 + m2 as f64 * le;
                    w[((j3 - 1) * r2 + i3 - 1, (j2 - 1) * r2 + i2 - 1)] = taus[(j, j2 - 1)].conj()
                        * taus[(i, i2 - 1)]
                        * cp
                        * eng.theta_pow2l(x1, tl, eta)?
                        * eng.theta_pow2l(x2, tl, eta)?;
                }
            }
        }
    }
    Ok(w)
}

pub fn w_closed_residual_fab(model: &Model, taus: &DMatrix<C64>, u: C64, u_p: C64) -> Result<f64> {
    let left = build_s_fab(model, -u.conj(), taus)?;
    let right = build_s_fab(model, u_p, taus)?;
    let mut worst: f64 = 0.0;
    for j in 0..model.dim() {
        for i in 0..model.dim() {
            let num = w_numeric(model, &left, &right, j, i);
            worst = worst.max(rel_diff(&num, &w_closed_fab(model, taus, j, i, u, u_p)?));
        }
    }
    Ok(worst)
}

/// Coefficients of the difference system for y, with `(a, b) = (u, u')`.
pub struct DiffSystem<'m> {
    model: &'m Model,
    a: C64,
    b: C64,
}

impl<'m> DiffSystem<'m> {
    pub fn new(model: &'m Model, u: C64, u_p: C64) -> Self {
        DiffSystem { model, a: u, b: u_p }
    }

    fn ratio(&self, base: C64) -> Result<C64> {
        let (eng, tl, eta) = (&self.model.engine, self.model.params.two_l, self.model.eta());
        let le2 = 2.0 * self.model.l() * eta;
        Ok(eng.theta_pow2l(base + (self.b - self.a) / 2.0 + le2, tl, eta)?
            / eng.theta_pow2l(base + (self.a - self.b) / 2.0 + le2, tl, eta)?)
    }

    /// `A_{ij} = θ^{(2l)}(Re + 2(i+j)lη + (u'-u)/2 + 2lη) / θ^{(2l)}(Re + 2(i+j)lη + (u-u')/2 + 2lη)`.
    pub fn a(&self, i: i64, j: i64) -> Result<C64> {
        let s = self.model.params.lambda0 - self.model.params.v;
        let le = self.model.l() * self.model.eta();
        self.ratio(C64::new(s.re + 2.0 * (i + j) as f64 * le, 0.0))
    }

    /// `B_{ij}`: as `A_{ij}` with `i·Im + 2(i-j)lη` in place of `Re + 2(i+j)lη`.
    pub fn b(&self, i: i64, j: i64) -> Result<C64> {
        let s = self.model.params.lambda0 - self.model.params.v;
        let le = self.model.l() * self.model.eta();
        self.ratio(I * s.im + 2.0 * (i - j) as f64 * le)
    }

    /// Worst `|∏_{k<r} A_{i+k,j+k} − 1|` and `|∏_{k<r} B_{i+k,j−k} − 1|`.
    pub fn lemma_residuals(&self) -> Result<[f64; 2]> {
        let r = self.model.params.r as i64;
        let mut w = [0.0f64; 2];
        for i in 1..=2 * r {
            for j in 1..=2 * r {
                let (mut pa, mut pb) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
                for k in 0..r {
                    pa *= self.a(i + k, j + k)?;
                    pb *= self.b(i + k, j - k)?;
                }
                w[0] = w[0].max((pa - 1.0).norm());
                w[1] = w[1].max((pb - 1.0).norm());
            }
        }
        Ok(w)
    }

    /// Worst `|B_{i+1,j+1} A_{ij} − A_{i+1,j−1} B_{ij}| / |B_{i+1,j+1} A_{ij}|`.
    pub fn compatibility_residual(&self) -> Result<f64> {
        let r2 = 2 * self.model.params.r as i64;
        let mut worst: f64 = 0.0;
        for i in 1..=r2 {
            for j in 1..=r2 {
                let lhs = self.b(i + 1, j + 1)? * self.a(i, j)?;
                let rhs = self.a(i + 1, j - 1)? * self.b(i, j)?;
                worst = worst.max((lhs - rhs).norm() / lhs.norm());
            }
        }
        Ok(worst)
    }

    /// Propagate `y_{i+1,j+1} = A_{ij} y_{ij}`, `y_{i+1,j-1} = B_{ij} y_{ij}` from
    /// `y_{1,1} = y_{1,2} = 1` over the index box `1..=size`, optionally mod 2r.
    fn propagate(&self, size: i64, cyclic: bool) -> Result<Vec<Vec<Option<C64>>>> {
        let r2 = 2 * self.model.params.r as i64;
        let key = |x: i64| if cyclic { (x - 1).rem_euclid(r2) + 1 } else { x };
        let n = size as usize;
        let mut y: Vec<Vec<Option<C64>>> = vec![vec![None; n + 1]; n + 1];
        let mut q = VecDeque::new();
        for s in [(1i64, 1i64), (1, 2)] {
            y[s.0 as usize][s.1 as usize] = Some(C64::new(1.0, 0.0));
            q.push_back(s);
        }
        while let Some((i, j)) = q.pop_front() {
            let cur = y[i as usize][j as usize].unwrap();
            let moves = [
                (i + 1, j + 1, cur * self.a(i, j)?),
                (i + 1, j - 1, cur * self.b(i, j)?),
                (i - 1, j - 1, cur / self.a(i - 1, j - 1)?),
                (i - 1, j + 1, cur / self.b(i - 1, j + 1)?),
            ];
            for (ni, nj, val) in moves {
                let (ni, nj) = (key(ni), key(nj));
                if !(1..=size).contains(&ni) || !(1..=size).contains(&nj) {
                    continue;
                }
                if y[ni as usize][nj as usize].is_none() {
                    y[ni as usize][nj as usize] = Some(val);
                    q.push_back((ni, nj));
                }
            }
        }
        Ok(y)
    }

    /// `y_{ij}` on the 2r-torus, indexed `[i-1][j-1]`.
    pub fn solve(&self) -> Result<Vec<Vec<C64>>> {
        let comp = self.compatibility_residual()?;
        if !(comp <= 1e-9) {
            return Err(VqError::Compatibility(comp));
        }
        let r2 = 2 * self.model.params.r as i64;
        let y = self.propagate(r2, true)?;
        Ok((1..=r2 as usize).map(|i| (1..=r2 as usize).map(|j| y[i][j].expect("both sublattices are seeded")).collect()).collect())
    }

    /// Propagates without wrapping over `1..=4r` and returns the worst
    /// `|y_{i+2r,j} − y_{ij}|` and `|y_{i,j+2r} − y_{ij}|` relative to `|y_{ij}|`.
    pub fn periodicity_residual(&self) -> Result<f64> {
        let r2 = 2 * self.model.params.r as i64;
        let y = self.propagate(2 * r2, false)?;
        let mut worst: f64 = 0.0;
        for i in 1..=r2 as usize {
            for j in 1..=r2 as usize {
                let base = y[i][j].unwrap();
                for other in [y[i + r2 as usize][j], y[i][j + r2 as usize]] {
                    worst = worst.max((other.unwrap() - base).norm() / base.norm());
                }
            }
        }
        Ok(worst)
    }

    /// Checks all four neighbor ratios of a solved y at every torus site.
    pub fn family_residual(&self, y: &[Vec<C64>]) -> Result<f64> {
        let r2 = 2 * self.model.params.r as i64;
        let at = |i: i64, j: i64| y[((i - 1).rem_euclid(r2)) as usize][((j - 1).rem_euclid(r2)) as usize];
        let mut worst: f64 = 0.0;
        for i in 1..=r2 {
            for j in 1..=r2 {
                let c = at(i, j);
                let checks = [
                    (at(i + 1, j + 1), c * self.a(i, j)?),
                    (at(i + 1, j - 1), c * self.b(i, j)?),
                    (at(i - 1, j - 1), c / self.a(i - 1, j - 1)?),
                    (at(i - 1, j + 1), c / self.b(i - 1, j + 1)?),
                ];
                for (got, want) in checks {
                    worst = worst.max((got - want).norm() / want.norm());
                }
            }
        }
        Ok(worst)
    }
}

/// Diagonal of Y for `Y W(j,i|u,u') Y^{-1} = W(j,i|u',u)`, ordered `(j''-1) 2r + (i''-1)`
/// and equal to `y_{i''j''}`. The difference system is evaluated at `(u', u)`.
pub fn y_fab(model: &Model, u: C64, u_p: C64) -> Result<Vec<C64>> {
    let y = DiffSystem::new(model, u_p, u).solve()?;
    let r2 = aux_size(model);
    let mut out = Vec::with_capacity(r2 * r2);
    for j in 0..r2 {
        for i in 0..r2 {
            out.push(y[i][j]);
        }
    }
    Ok(out)
}

pub fn ywy_residual_fab(model: &Model, taus: &DMatrix<C64>, u: C64, u_p: C64) -> Result<f64> {
    let y = y_fab(model, u, u_p)?;
    let (l1, r1) = (build_s_fab(model, -u.conj(), taus)?, build_s_fab(model, u_p, taus)?);
    let (l2, r2) = (build_s_fab(model, -u_p.conj(), taus)?, build_s_fab(model, u, taus)?);
    let mut worst: f64 = 0.0;
    for j in 0..model.dim() {
        for i in 0..model.dim() {
            let w = w_numeric(model, &l1, &r1, j, i);
            let w2 = w_numeric(model, &l2, &r2, j, i);
            worst = worst.max(conjugation_residual(&y, &w, &w2));
        }
    }
    Ok(worst)
}

/// `d(i'',j'')` in the U_3 phase; `None` off the cyclic tridiagonal.
pub fn d_fab(model: &Model, i: usize, j: usize) -> Option<C64> {
    let le = model.l() * model.eta();
    let shift = model.params.lambda0 - model.params.v;
    match step_sign(model, i, j)? {
        1 => Some(2.0 * (2.0 * j as f64 + 1.0) * le + shift),
        _ => Some(-2.0 * (2.0 * i as f64 + 1.0) * le - shift),
    }
}

pub fn u3_phase_fab(model: &Model, u: C64, i: usize, j: usize) -> Option<C64> {
    let l = model.l();
    let tau = model.params.tau;
    let d = d_fab(model, i, j)?;
    Some((l * (tau - 1.0) * PI * I + 2.0 * l * PI * I * u + 2.0 * l * PI * I * d).exp())
}

/// `A_i = exp(4 i(i+r'') l² η π i)`.
pub fn similarity_fab(model: &Model, i: i64) -> C64 {
    let l = model.l();
    let rpp = model.params.rpp as f64;
    (4.0 * i as f64 * (i as f64 + rpp) * l * l * model.eta() * PI * I).exp()
}

/// Per-entry `U_1`, `U_3` relations, the coboundary form of the `d`-phases and
/// `|A_{i+2r} − A_i|`.
pub fn entry_quasi_residuals_fab(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<[f64; 4]> {
    let l = model.l();
    let u1 = model.unitary(1)?;
    let u3 = model.unitary(3)?;
    let s = build_s_fab(model, u, taus)?;
    let s1 = build_s_fab(model, u + 1.0, taus)?;
    let st = build_s_fab(model, u + model.params.tau, taus)?;
    let scale = grid_scale(&s);
    let base = (l * (model.params.tau - 1.0) * PI * I + 2.0 * l * PI * I * u).exp();
    let ph1 = (-l * PI * I).exp();
    let r2 = aux_size(model);
    let mut w = [0.0f64; 4];
    for i in 1..=r2 {
        for j in 1..=r2 {
            let Some(m) = &s[i - 1][j - 1] else { continue };
            w[0] = w[0].max((&u1 * m - s1[i - 1][j - 1].as_ref().unwrap() * ph1).norm() / scale);
            let ph3 = u3_phase_fab(model, u, i, j).expect("nonzero entry has a phase");
            w[1] = w[1].max((&u3 * m - st[i - 1][j - 1].as_ref().unwrap() * ph3).norm() / scale);
            let cob = base * similarity_fab(model, i as i64) / similarity_fab(model, j as i64);
            w[2] = w[2].max((cob - ph3).norm() / ph3.norm());
        }
        w[3] = w[3].max((similarity_fab(model, i as i64 + r2 as i64) - similarity_fab(model, i as i64)).norm());
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_entries() {
        assert_eq!(u_mu_tables(1, 1), ((1, 1, 0), (1, -1, 2)));
        assert_eq!(u_mu_tables(-1, -1).1, (-1, 1, -2));
    }
}
