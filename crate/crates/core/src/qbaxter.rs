//! Q_R from a tridiagonal-plus-corners r×r grid of rank-one maps whose images
//! are null vectors of the gauge-twisted L-operator entry β.
//!
//! Indices `i''`, `j''` run over `1..=r` in every public function here.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::lattice::{chain_trace, check_budget, l_operator, BigOp, Grid};
use crate::linalg::rel_diff;
use crate::model::Model;
use crate::repspace::{stream, SiteMap, ThetaVector};
use crate::sgrid::{conjugation_residual, grid_scale, rank_one, tau_constants, w_numeric};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `p_j = -θ00((2j-1)lη, τ/2) / θ01((2j-1)lη, τ/2)`, defined for any integer j.
pub fn p_value(model: &Model, j: i64) -> Result<C64> {
    let x = C64::new((2 * j - 1) as f64 * model.l() * model.eta(), 0.0);
    Ok(-model.half.theta(0, 0, x)? / model.half.theta(0, 1, x)?)
}

pub fn p_values(model: &Model) -> Result<Vec<C64>> {
    (1..=model.params.r as i64).map(|j| p_value(model, j)).collect()
}

/// `X = diag(θ01((2i-1)lη, τ/2))`.
pub fn x_diag(model: &Model, i: i64) -> Result<C64> {
    model.half.theta(0, 1, C64::new((2 * i - 1) as f64 * model.l() * model.eta(), 0.0))
}

/// `f_±(λ,u,z) = [z; (±λ+u)/2 + (1-l)η]_{2l}`; `sign` is +1 or -1.
pub fn null_vector_f(model: &Model, sign: f64, lambda: C64, u: C64) -> Result<ThetaVector> {
    model.sym((sign * lambda + u) / 2.0 + (1.0 - model.l()) * model.eta())
}

/// The four entries of `M̃_i^{-1} L M̃_j` with `M̃ = [[1, p], [0, 1]]`.
pub struct Twisted {
    pub alpha: SiteMap,
    pub beta: SiteMap,
    pub gamma: SiteMap,
    pub delta: SiteMap,
}

pub fn twisted(l: &Grid, pi: C64, pj: C64) -> Twisted {
    let g = |a: usize, b: usize| l[a][b].as_ref().expect("L-operator entries are dense");
    let (l11, l12, l21, l22) = (g(0, 0), g(0, 1), g(1, 0), g(1, 1));
    Twisted {
        alpha: l11 - l21 * pi,
        beta: l11 * pj + l12 - l21 * (pi * pj) - l22 * pi,
        gamma: l21.clone(),
        delta: l21 * pj + l22,
    }
}

/// Sign of the null vector for entry `(i, j)`, or `None` for a structural zero.
pub fn entry_sign(r: usize, i: usize, j: usize) -> Option<f64> {
    if i == j + 1 {
        Some(1.0)
    } else if i + 1 == j {
        Some(-1.0)
    } else if i == j && (i == 1 || i == r) {
        // i = j = 1 uses f_-, i = j = r uses f_+; for r = 1 the first rule wins
        Some(if i == 1 { -1.0 } else { 1.0 })
    } else {
        None
    }
}

/// λ attached to entry `(i, j)`.
pub fn entry_lambda(model: &Model, i: usize, j: usize) -> f64 {
    let le = model.l() * model.eta();
    let r = model.params.r;
    if i == j && i == 1 {
        2.0 * le
    } else if i == j && i == r {
        2.0 * (2.0 * r as f64 - 1.0) * le
    } else {
        2.0 * (2.0 * j as f64 - 1.0) * le
    }
}

#[derive(Debug, Clone)]
pub struct BaxterS {
    pub r: usize,
    pub grid: Grid,
    pub taus: DMatrix<C64>,
}

pub fn baxter_taus(model: &Model) -> DMatrix<C64> {
    tau_constants(model, model.params.r, stream::TAU_BAXTER)
}

pub fn build_s_bax(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<BaxterS> {
    let r = model.params.r;
    let mut grid: Grid = vec![vec![None; r]; r];
    for i in 1..=r {
        for j in 1..=r {
            if let Some(sign) = entry_sign(r, i, j) {
                let f = null_vector_f(model, sign, C64::new(entry_lambda(model, i, j), 0.0), u)?;
                grid[i - 1][j - 1] = Some(rank_one(&f, taus, j - 1));
            }
        }
    }
    Ok(BaxterS { r, grid, taus: taus.clone() })
}

pub fn qr_bax(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<BigOp> {
    check_budget(model)?;
    let s = build_s_bax(model, u, taus)?;
    Ok(chain_trace(&vec![s.grid; model.params.n]))
}

/// Neighbor relation between an upper and a lower auxiliary index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Step {
    Up,
    Down,
    First,
    Last,
}

impl Step {
    pub fn of(r: usize, upper: usize, lower: usize) -> Option<Step> {
        if upper == lower + 1 {
            Some(Step::Up)
        } else if upper + 1 == lower {
            Some(Step::Down)
        } else if upper == lower && upper == 1 {
            Some(Step::First)
        } else if upper == lower && upper == r {
            Some(Step::Last)
        } else {
            None
        }
    }
}

/// `w^{(F)}` for the left step `sj = (j''' vs j'')` and right step `si = (i''' vs i'')`.
pub fn w_f(sj: Step, si: Step, j: i64, i: i64, r: i64) -> i64 {
    use Step::*;
    match (si, sj) {
        (Up, Up) => i - j,
        (Up, Down) => i + j - 1,
        (Up, First) => i,
        (Up, Last) => i - r,
        (Down, Up) => -i - j + 1,
        (Down, Down) => -i + j,
        (Down, First) => -i + 1,
        (Down, Last) => -i - r + 1,
        (First, Up) => -j,
        (First, Down) => j - 1,
        (First, First) => 0,
        (First, Last) => r,
        (Last, Up) => -j + r,
        (Last, Down) => j + r - 1,
        (Last, First) => -r,
        (Last, Last) => 0,
    }
}

/// `w^{(G)}`, same conventions as [`w_f`].
pub fn w_g(sj: Step, si: Step, j: i64, i: i64, r: i64) -> i64 {
    use Step::*;
    match (si, sj) {
        (Up, Up) => i + j,
        (Up, Down) => i - j + 1,
        (Up, First) => i,
        (Up, Last) => i + r,
        (Down, Up) => -i + j + 1,
        (Down, Down) => -i - j + 2,
        (Down, First) => -i + 1,
        (Down, Last) => -i + r + 1,
        (First, Up) => j,
        (First, Down) => -j + 1,
        (First, First) => 0,
        (First, Last) => r,
        (Last, Up) => j + r,
        (Last, Down) => -j + r + 1,
        (Last, First) => r,
        (Last, Last) => 2 * r,
    }
}

/// Closed form of `W(j,i|u,v)`:
/// `conj(τ_{j j''}) τ_{i i''} F((u+v)/2 + 2w^F lη) G((v-u)/2 + 2w^G lη)`.
pub fn w_closed_bax(model: &Model, taus: &DMatrix<C64>, j: usize, i: usize, u: C64, v: C64) -> Result<DMatrix<C64>> {
    let r = model.params.r;
    let (eng, tl, eta) = (&model.engine, model.params.two_l, model.eta());
    let le = model.l() * eta;
    let mut w = DMatrix::zeros(r * r, r * r);
    for j3 in 1..=r {
        for j2 in 1..=r {
            let Some(sj) = Step::of(r, j3, j2) else { continue };
            for i3 in 1..=r {
                for i2 in 1..=r {
                    let Some(si) = Step::of(r, i3, i2) else { continue };
                    let wf = w_f(sj, si, j2 as i64, i2 as i64, r as i64) as f64;
                    let wg = w_g(sj, si, j2 as i64, i2 as i64, r as i64) as f64;
                    let val = taus[(j, j2 - 1)].conj()
                        * taus[(i, i2 - 1)]
                        * eng.cap_f((u + v) / 2.0 + 2.0 * wf * le, tl, eta)?
                        * eng.cap_g((v - u) / 2.0 + 2.0 * wg * le, tl, eta)?;
                    w[((j3 - 1) * r + i3 - 1, (j2 - 1) * r + i2 - 1)] = val;
                }
            }
        }
    }
    Ok(w)
}

/// `t_m` from `t_1 = t_2 = 1` and `t_{m+2}/t_m = G((u-v)/2 + 2mlη) / G((v-u)/2 + 2mlη)`,
/// for `m` in `[-span, span]`.
pub fn t_sequence(model: &Model, u: C64, v: C64, span: i64) -> Result<BTreeMap<i64, C64>> {
    let (eng, tl, eta) = (&model.engine, model.params.two_l, model.eta());
    let le = model.l() * eta;
    let ratio = |m: i64| -> Result<C64> {
        let x = 2.0 * m as f64 * le;
        Ok(eng.cap_g((u - v) / 2.0 + x, tl, eta)? / eng.cap_g((v - u) / 2.0 + x, tl, eta)?)
    };
    let mut t = BTreeMap::new();
    t.insert(1, C64::new(1.0, 0.0));
    t.insert(2, C64::new(1.0, 0.0));
    for m in 1..=span - 2 {
        let next = t[&m] * ratio(m)?;
        t.insert(m + 2, next);
    }
    for m in (-span..=0).rev() {
        let prev = t[&(m + 2)] / ratio(m)?;
        t.insert(m, prev);
    }
    Ok(t)
}

/// Diagonal of Y, `y_{j''i''} = t_{j''+i''} t_{-j''+i''+1}`, ordered `(j''-1) r + (i''-1)`.
pub fn y_bax(model: &Model, u: C64, v: C64) -> Result<Vec<C64>> {
    let r = model.params.r as i64;
    let t = t_sequence(model, u, v, 2 * r + 4)?;
    let mut y = Vec::with_capacity((r * r) as usize);
    for j in 1..=r {
        for i in 1..=r {
            y.push(t[&(j + i)] * t[&(-j + i + 1)]);
        }
    }
    Ok(y)
}

/// `d(i'',j'')` in the U_3 phase: `j''` for `i''=j''+1`, `-i''` for `i''=j''-1`, 0 on corners.
pub fn d_bax(i: usize, j: usize) -> i64 {
    if i == j + 1 {
        j as i64
    } else if i + 1 == j {
        -(i as i64)
    } else {
        0
    }
}

/// Phase of `U_3 S^i_j(u) = phase · S^i_j(u+τ)`.
pub fn u3_phase_bax(model: &Model, u: C64, i: usize, j: usize) -> C64 {
    let l = model.l();
    let tau = model.params.tau;
    (l * (tau - 1.0) * PI * I + 2.0 * l * PI * I * u + 8.0 * d_bax(i, j) as f64 * l * l * model.eta() * PI * I).exp()
}

/// Diagonal similarity `A_i = exp(4 i(i-1) l² η π i)`.
pub fn similarity_bax(model: &Model, i: usize) -> C64 {
    let l = model.l();
    (4.0 * (i * (i - 1)) as f64 * l * l * model.eta() * PI * I).exp()
}

/// Largest `‖β_{ij} S^i_j‖ / (‖β_{ij}‖ ‖S^i_j‖)` over the nonzero entries.
pub fn beta_null_residual(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<f64> {
    let l = l_operator(model, u)?;
    let s = build_s_bax(model, u, taus)?;
    let p = p_values(model)?;
    let mut worst: f64 = 0.0;
    for (i, row) in s.grid.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let Some(m) = e else { continue };
            let tw = twisted(&l, p[i], p[j]);
            worst = worst.max((&tw.beta * m).norm() / (tw.beta.norm() * m.norm()));
        }
    }
    Ok(worst)
}

/// Residuals of the gauge-conjugated `L ⊗ S`: the vanishing block, then the two
/// diagonal blocks against their closed forms, each relative to the block norm.
#[derive(Debug, Clone, Copy)]
pub struct BlockResiduals {
    pub off_block: f64,
    pub a: f64,
    pub d: f64,
}

pub fn block_residuals_bax(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<BlockResiduals> {
    let two_eta = 2.0 * model.eta();
    let le2 = 2.0 * model.l() * model.eta();
    let l = l_operator(model, u)?;
    let s = build_s_bax(model, u, taus)?;
    let s_up = build_s_bax(model, u + two_eta, taus)?;
    let s_dn = build_s_bax(model, u - two_eta, taus)?;
    let p = p_values(model)?;
    let x: Vec<C64> = (1..=model.params.r as i64).map(|i| x_diag(model, i)).collect::<Result<_>>()?;
    let ca = 2.0 * model.br(u - le2)?;
    let cd = 2.0 * model.br(u + le2)?;
    let (mut off, mut tot, mut ea, mut na, mut ed, mut nd) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (i, row) in s.grid.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let Some(m) = e else { continue };
            let tw = twisted(&l, p[i], p[j]);
            let a_num = &tw.alpha * m;
            let d_num = &tw.delta * m;
            let a_cl = s_up.grid[i][j].as_ref().unwrap() * (ca * x[j] / x[i]);
            let d_cl = s_dn.grid[i][j].as_ref().unwrap() * (cd * x[i] / x[j]);
            off += (&tw.beta * m).norm_squared();
            tot += a_num.norm_squared() + d_num.norm_squared() + (&tw.gamma * m).norm_squared();
            ea += (&a_num - &a_cl).norm_squared();
            na += a_cl.norm_squared();
            ed += (&d_num - &d_cl).norm_squared();
            nd += d_cl.norm_squared();
        }
    }
    Ok(BlockResiduals { off_block: (off / tot).sqrt(), a: (ea / na).sqrt(), d: (ed / nd).sqrt() })
}

/// Worst relative gap between `W(j,i|u,v)` from Sklyanin forms and the closed form.
pub fn w_closed_residual(model: &Model, taus: &DMatrix<C64>, u: C64, v: C64) -> Result<f64> {
    let left = build_s_bax(model, -u.conj(), taus)?.grid;
    let right = build_s_bax(model, v, taus)?.grid;
    let d = model.dim();
    let mut worst: f64 = 0.0;
    for j in 0..d {
        for i in 0..d {
            let num = w_numeric(model, &left, &right, j, i);
            let cl = w_closed_bax(model, taus, j, i, u, v)?;
            worst = worst.max(rel_diff(&num, &cl));
        }
    }
    Ok(worst)
}

/// `max_{j,i} ‖Y W(j,i|u,v) Y^{-1} − W(j,i|v,u)‖ / ‖W(j,i|v,u)‖`, W from Sklyanin forms.
pub fn ywy_residual_bax(model: &Model, taus: &DMatrix<C64>, u: C64, v: C64) -> Result<f64> {
    let y = y_bax(model, u, v)?;
    let (l_uv, r_uv) = (build_s_bax(model, -u.conj(), taus)?.grid, build_s_bax(model, v, taus)?.grid);
    let (l_vu, r_vu) = (build_s_bax(model, -v.conj(), taus)?.grid, build_s_bax(model, u, taus)?.grid);
    let d = model.dim();
    let mut worst: f64 = 0.0;
    for j in 0..d {
        for i in 0..d {
            let w = w_numeric(model, &l_uv, &r_uv, j, i);
            let w2 = w_numeric(model, &l_vu, &r_vu, j, i);
            worst = worst.max(conjugation_residual(&y, &w, &w2));
        }
    }
    Ok(worst)
}

fn step_target(r: usize, lower: usize, s: Step) -> Option<usize> {
    let t = match s {
        Step::Up => lower + 1,
        Step::Down => lower.checked_sub(1)?,
        Step::First if lower == 1 => 1,
        Step::Last if lower == r => r,
        _ => return None,
    };
    (1..=r).contains(&t).then_some(t)
}

/// Checks `y_{j'''i'''}/y_{j''i''} = G((u-v)/2 + 2w^G lη)/G((v-u)/2 + 2w^G lη)` over
/// all sixteen step combinations and every admissible `(j'', i'')`.
pub fn ratio_table_residual(model: &Model, u: C64, v: C64) -> Result<f64> {
    use Step::*;
    let r = model.params.r;
    let (eng, tl, eta) = (&model.engine, model.params.two_l, model.eta());
    let le = model.l() * eta;
    let y = y_bax(model, u, v)?;
    let at = |j: usize, i: usize| y[(j - 1) * r + i - 1];
    let mut worst: f64 = 0.0;
    for sj in [Up, Down, First, Last] {
        for si in [Up, Down, First, Last] {
            for j2 in 1..=r {
                for i2 in 1..=r {
                    let (Some(j3), Some(i3)) = (step_target(r, j2, sj), step_target(r, i2, si)) else { continue };
                    let wg = 2.0 * w_g(sj, si, j2 as i64, i2 as i64, r as i64) as f64 * le;
                    let want = eng.cap_g((u - v) / 2.0 + wg, tl, eta)? / eng.cap_g((v - u) / 2.0 + wg, tl, eta)?;
                    let got = at(j3, i3) / at(j2, i2);
                    worst = worst.max((got - want).norm() / want.norm());
                }
            }
        }
    }
    Ok(worst)
}

/// `max_m |t_{m+1} - t_{-m+1}| / |t_{m+1}|` for `|m| <= span`.
pub fn t_symmetry_residual(model: &Model, u: C64, v: C64, span: i64) -> Result<f64> {
    let t = t_sequence(model, u, v, span + 2)?;
    Ok((-span..=span).map(|m| (t[&(m + 1)] - t[&(-m + 1)]).norm() / t[&(m + 1)].norm()).fold(0.0, f64::max))
}

/// Per-entry quasi-periodicity of S: `U_1 S(u) = e^{-lπi} S(u+1)` and
/// `U_3 S^i_j(u) = e^{lπi(τ-1) + 2lπiu + 8d l²ηπi} S^i_j(u+τ)`, plus the check that
/// the `d`-phases form the coboundary `A_i / A_j`.
pub fn entry_quasi_residuals_bax(model: &Model, u: C64, taus: &DMatrix<C64>) -> Result<[f64; 3]> {
    let l = model.l();
    let u1 = model.unitary(1)?;
    let u3 = model.unitary(3)?;
    let s = build_s_bax(model, u, taus)?.grid;
    let s1 = build_s_bax(model, u + 1.0, taus)?.grid;
    let st = build_s_bax(model, u + model.params.tau, taus)?.grid;
    let scale = grid_scale(&s);
    let base = (l * (model.params.tau - 1.0) * PI * I + 2.0 * l * PI * I * u).exp();
    let ph1 = (-l * PI * I).exp();
    let (mut e1, mut e3, mut ecob): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 1..=model.params.r {
        for j in 1..=model.params.r {
            let Some(m) = &s[i - 1][j - 1] else { continue };
            e1 = e1.max((&u1 * m - s1[i - 1][j - 1].as_ref().unwrap() * ph1).norm() / scale);
            let ph3 = u3_phase_bax(model, u, i, j);
            e3 = e3.max((&u3 * m - st[i - 1][j - 1].as_ref().unwrap() * ph3).norm() / scale);
            let cob = base * similarity_bax(model, i) / similarity_bax(model, j);
            ecob = ecob.max((cob - ph3).norm() / ph3.norm());
        }
    }
    Ok([e1, e3, ecob])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lookups() {
        assert_eq!(w_f(Step::Up, Step::Up, 2, 5, 4), 3);
        assert_eq!(w_g(Step::Down, Step::Down, 2, 3, 4), -3);
        assert_eq!(w_g(Step::Last, Step::Last, 4, 4, 4), 8);
    }

    #[test]
    fn d_values() {
        assert_eq!(d_bax(3, 2), 2);
        assert_eq!(d_bax(1, 2), -1);
        assert_eq!(d_bax(1, 1), 0);
    }

    #[test]
    fn zero_pattern() {
        let r = 4;
        for i in 1..=r {
            for j in 1..=r {
                let nz = entry_sign(r, i, j).is_some();
                let expect = i == j + 1 || i + 1 == j || (i == j && (i == 1 || i == r));
                assert_eq!(nz, expect);
            }
        }
    }
}
