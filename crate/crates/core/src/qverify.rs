//! Q_L from Q_R through the Sklyanin adjoint, the normalized Q-operator, and
//! the identities shared by both constructions.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VqError};
use crate::lattice::{transfer_matrix, BigOp, Grid};
use crate::linalg::{kron_power, rel, rel_diff, singular_values};
use crate::model::Model;
use crate::repspace::{rng_for, stream};
use crate::{qbaxter, qfabricius};

const I: C64 = C64 { re: 0.0, im: 1.0 };
const U0_CANDIDATES: usize = 8;
const U0_COND_MAX: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Baxter,
    Fabricius,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Baxter => "baxter",
            Method::Fabricius => "fabricius",
        }
    }
}

/// A construction together with its generic constants.
#[derive(Debug, Clone)]
pub struct Construction {
    pub method: Method,
    pub taus: DMatrix<C64>,
}

impl Construction {
    pub fn new(model: &Model, method: Method) -> Result<Self> {
        let taus = match method {
            Method::Baxter => qbaxter::baxter_taus(model),
            Method::Fabricius => {
                qfabricius::require_even(model)?;
                qfabricius::fabricius_taus(model)
            }
        };
        Ok(Construction { method, taus })
    }

    pub fn grid(&self, model: &Model, u: C64) -> Result<Grid> {
        match self.method {
            Method::Baxter => Ok(qbaxter::build_s_bax(model, u, &self.taus)?.grid),
            Method::Fabricius => qfabricius::build_s_fab(model, u, &self.taus),
        }
    }

    pub fn qr(&self, model: &Model, u: C64) -> Result<BigOp> {
        match self.method {
            Method::Baxter => qbaxter::qr_bax(model, u, &self.taus),
            Method::Fabricius => qfabricius::qr_fab(model, u, &self.taus),
        }
    }

    /// `Q_L(u) = Q_R(-ū)^H G_H`.
    pub fn ql(&self, model: &Model, u: C64) -> Result<BigOp> {
        Ok(self.qr(model, -u.conj())?.adjoint() * model.gram_h())
    }
}

fn shifts(model: &Model, u: C64) -> Result<(C64, C64, C64, C64)> {
    let te = 2.0 * model.eta();
    Ok((u - te, u + te, model.h(-1.0, u)?, model.h(1.0, u)?))
}

/// `‖T(u)Q_R(u) − h₋Q_R(u−2η) − h₊Q_R(u+2η)‖ / ‖T Q_R‖`.
pub fn tq_residual(model: &Model, c: &Construction, u: C64) -> Result<f64> {
    let (um, up, hm, hp) = shifts(model, u)?;
    let lhs = transfer_matrix(model, u)? * c.qr(model, u)?;
    let rhs = c.qr(model, um)? * hm + c.qr(model, up)? * hp;
    Ok(rel(&lhs, &rhs, lhs.norm()))
}

/// `‖Q_L(u)T(u) − h₋Q_L(u−2η) − h₊Q_L(u+2η)‖ / ‖Q_L T‖`.
pub fn qt_residual(model: &Model, c: &Construction, u: C64) -> Result<f64> {
    let (um, up, hm, hp) = shifts(model, u)?;
    let lhs = c.ql(model, u)? * transfer_matrix(model, u)?;
    let rhs = c.ql(model, um)? * hm + c.ql(model, up)? * hp;
    Ok(rel(&lhs, &rhs, lhs.norm()))
}

/// `max_± |h±(−ū) − (−1)^N conj h∓(u)| / |h∓(u)|`; the two coefficients trade
/// places under `u ↦ −ū`, which is what turns the adjoint TQ relation into QT.
pub fn h_conj_residual(model: &Model, u: C64) -> Result<f64> {
    let sign = if model.params.n % 2 == 0 { 1.0 } else { -1.0 };
    let mut worst: f64 = 0.0;
    for s in [1.0, -1.0] {
        let a = model.h(s, -u.conj())?;
        let b = model.h(-s, u)?.conj() * sign;
        worst = worst.max((a - b).norm() / b.norm());
    }
    Ok(worst)
}

/// `|(Q_L(u)φ, w) − ⟨φ, Q_R(−ū)w⟩| / (‖Q_Lφ‖‖w‖)` for seeded random φ, w; the
/// first pairing is the standard one, the second the Sklyanin form on H.
pub fn adjoint_consistency(model: &Model, c: &Construction, u: C64) -> Result<f64> {
    let dim = model.params.lattice_dim();
    let mut rng = rng_for(model.params.seed, stream::PROBE);
    let mut draw = || DVector::from_fn(dim, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let (phi, w) = (draw(), draw());
    let qlphi = c.ql(model, u)? * &phi;
    let a = qlphi.dotc(&w);
    let b = phi.dotc(&(model.gram_h() * (c.qr(model, -u.conj())? * &w)));
    Ok((a - b).norm() / (qlphi.norm() * w.norm()))
}

/// `‖Q_L(u)Q_R(u′) − Q_L(u′)Q_R(u)‖` relative to the larger side.
pub fn lr_symmetry_residual(model: &Model, c: &Construction, u: C64, u_p: C64) -> Result<f64> {
    let a = c.ql(model, u)? * c.qr(model, u_p)?;
    let b = c.ql(model, u_p)? * c.qr(model, u)?;
    Ok(rel_diff(&a, &b))
}

fn phase_u1(model: &Model) -> C64 {
    (-(model.params.n as f64) * model.l() * PI * I).exp()
}

fn phase_u3(model: &Model, u: C64) -> C64 {
    let nl = model.params.n as f64 * model.l();
    (nl * PI * I * (model.params.tau - 1.0) + 2.0 * nl * PI * I * u).exp()
}

/// `U_1^{⊗N}` and `U_3^{⊗N}`.
pub fn lattice_unitaries(model: &Model) -> Result<(BigOp, BigOp)> {
    let n = model.params.n;
    Ok((kron_power(&model.unitary(1)?, n), kron_power(&model.unitary(3)?, n)))
}

/// `[U_1 Q_R(u) vs e^{−Nπil}Q_R(u+1), U_3 Q_R(u) vs e^{Nlπi(τ−1)+2Nlπiu}Q_R(u+τ), Q_R(u+2) vs Q_R(u)]`.
pub fn qr_quasi_residuals(model: &Model, c: &Construction, u: C64) -> Result<[f64; 3]> {
    let (u1, u3) = lattice_unitaries(model)?;
    let q = c.qr(model, u)?;
    let a = rel_diff(&(&u1 * &q), &(c.qr(model, u + 1.0)? * phase_u1(model)));
    let b = rel_diff(&(&u3 * &q), &(c.qr(model, u + model.params.tau)? * phase_u3(model, u)));
    let p = rel_diff(&c.qr(model, u + 2.0)?, &q);
    Ok([a, b, p])
}

/// `Q_L(u)U_1 vs e^{−Nlπi}Q_L(u+1)` and the U_3 analog.
pub fn ql_quasi_residuals(model: &Model, c: &Construction, u: C64) -> Result<[f64; 2]> {
    let (u1, u3) = lattice_unitaries(model)?;
    let q = c.ql(model, u)?;
    let a = rel_diff(&(&q * &u1), &(c.ql(model, u + 1.0)? * phase_u1(model)));
    let b = rel_diff(&(&q * &u3), &(c.ql(model, u + model.params.tau)? * phase_u3(model, u)));
    Ok([a, b])
}

/// Seeded real normalization candidates in `(0.05, 0.45)`.
pub fn u0_candidates(model: &Model) -> Vec<C64> {
    let mut rng = rng_for(model.params.seed, stream::U0);
    (0..U0_CANDIDATES).map(|_| C64::new(rng.random_range(0.05..0.45), 0.0)).collect()
}

/// `Q(u) = Q_R(u)Q_R(u₀)^{-1} = Q_L(u₀)^{-1}Q_L(u)` for the first admissible u₀.
#[derive(Debug, Clone)]
pub struct QOperator {
    pub u0: C64,
    pub cond: f64,
    qr0_inv: BigOp,
    ql0_inv: BigOp,
}

impl QOperator {
    pub fn new(model: &Model, c: &Construction) -> Result<Self> {
        let (mut smallest, mut largest) = (Vec::new(), Vec::new());
        for u0 in u0_candidates(model) {
            let q0 = c.qr(model, u0)?;
            let s = singular_values(&q0);
            let (hi, lo) = (s[0], *s.last().unwrap());
            let cond = hi / lo;
            if cond < U0_COND_MAX {
                let qr0_inv = q0.try_inverse().ok_or(VqError::NearZero { what: "Q_R(u0)", modulus: lo })?;
                let ql0 = c.ql(model, u0)?;
                let ql0_inv = ql0.try_inverse().ok_or(VqError::NearZero { what: "Q_L(u0)", modulus: lo })?;
                return Ok(QOperator { u0, cond, qr0_inv, ql0_inv });
            }
            smallest.push(lo);
            largest.push(hi);
        }
        Err(VqError::Degenerate { smallest, largest })
    }

    pub fn right(&self, model: &Model, c: &Construction, u: C64) -> Result<BigOp> {
        Ok(c.qr(model, u)? * &self.qr0_inv)
    }

    pub fn left(&self, model: &Model, c: &Construction, u: C64) -> Result<BigOp> {
        Ok(&self.ql0_inv * c.ql(model, u)?)
    }
}

/// Residuals of the normalized Q-operator.
#[derive(Debug, Clone, Copy)]
pub struct QResiduals {
    pub left_right: f64,
    pub tq: f64,
    pub qt: f64,
    pub qq: f64,
    /// `[U_1 Q, Q U_1, U_3 Q, Q U_3]` against the shifted Q.
    pub quasi: [f64; 4],
}

pub fn q_residuals(model: &Model, c: &Construction, q: &QOperator, u: C64, u_p: C64) -> Result<QResiduals> {
    let (um, up, hm, hp) = shifts(model, u)?;
    let qu = q.right(model, c, u)?;
    let left_right = rel_diff(&qu, &q.left(model, c, u)?);
    let t = transfer_matrix(model, u)?;
    let (qm, qp) = (q.right(model, c, um)?, q.right(model, c, up)?);
    let rhs = &qm * hm + &qp * hp;
    let tq_l = &t * &qu;
    let qt_l = &qu * &t;
    let tq = rel(&tq_l, &rhs, tq_l.norm());
    let qt = rel(&qt_l, &rhs, qt_l.norm());
    let qv = q.right(model, c, u_p)?;
    let qq = rel_diff(&(&qu * &qv), &(&qv * &qu));
    let (u1, u3) = lattice_unitaries(model)?;
    let q1 = q.right(model, c, u + 1.0)? * phase_u1(model);
    let q3 = q.right(model, c, u + model.params.tau)? * phase_u3(model, u);
    let quasi = [
        rel_diff(&(&u1 * &qu), &q1),
        rel_diff(&(&qu * &u1), &q1),
        rel_diff(&(&u3 * &qu), &q3),
        rel_diff(&(&qu * &u3), &q3),
    ];
    Ok(QResiduals { left_right, tq, qt, qq, quasi })
}

/// Scalar TQ relation on joint eigenvectors of `T(u)` and `Q(u)`, found by inverse
/// iteration on a generic combination of commuting operators. Returns the best
/// relative residual `|t q − h₋q₋ − h₊q₊| / |t q|` over eigenvectors whose
/// eigen-equations hold to 1e-8.
pub fn eigen_tq_residual(model: &Model, c: &Construction, q: &QOperator, u: C64) -> Result<Option<f64>> {
    let (um, up, hm, hp) = shifts(model, u)?;
    let t = transfer_matrix(model, u)?;
    let qu = q.right(model, c, u)?;
    let qm = q.right(model, c, um)?;
    let qp = q.right(model, c, up)?;
    let mix = &qu + &t * C64::new(0.37, 0.11) + &qm * C64::new(-0.23, 0.41);
    let dim = mix.nrows();
    let eigs = mix.clone().schur().eigenvalues().ok_or(VqError::NearZero { what: "Schur form", modulus: 0.0 })?;
    let scale = mix.norm();
    let mut best: Option<f64> = None;
    for lam in eigs.iter() {
        let shifted = &mix - DMatrix::identity(dim, dim) * (*lam + scale * 1e-10);
        let lu = shifted.lu();
        let mut x = DVector::from_element(dim, C64::new(1.0, 0.0));
        for _ in 0..3 {
            let Some(y) = lu.solve(&x) else { break };
            x = &y / C64::new(y.norm(), 0.0);
        }
        let rayleigh = |m: &BigOp| x.dotc(&(m * &x));
        let eig_err = |m: &BigOp, e: C64| (m * &x - &x * e).norm() / m.norm().max(f64::MIN_POSITIVE);
        let (tv, qv, qmv, qpv) = (rayleigh(&t), rayleigh(&qu), rayleigh(&qm), rayleigh(&qp));
        let quality = eig_err(&t, tv).max(eig_err(&qu, qv)).max(eig_err(&qm, qmv)).max(eig_err(&qp, qpv));
        if quality > 1e-8 || (tv * qv).norm() == 0.0 {
            continue;
        }
        let res = (tv * qv - hm * qmv - hp * qpv).norm() / (tv * qv).norm();
        best = Some(best.map_or(res, |b: f64| b.min(res)));
    }
    Ok(best)
}

/// `‖T(u)^H G_H − (−1)^N G_H T(−ū)‖` relative to `‖T^H G_H‖`.
pub fn t_adjoint_residual(model: &Model, u: C64) -> Result<f64> {
    let g = model.gram_h();
    let sign = if model.params.n % 2 == 0 { 1.0 } else { -1.0 };
    let lhs = transfer_matrix(model, u)?.adjoint() * &g;
    let rhs = &g * transfer_matrix(model, -u.conj())? * C64::new(sign, 0.0);
    Ok(rel(&lhs, &rhs, lhs.norm()))
}
