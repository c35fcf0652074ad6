//! The spin-l representation space of even theta functions of degree 4l, its
//! generators as difference operators, the Sklyanin form, and the unitaries
//! U_1, U_2, U_3.
//!
//! A vector is stored by its coefficients against the basis
//! `g_j(z) = [z; a_j]_{2l}`; coefficients come from collocation at `2l+1`
//! points on the line `Im z = Im τ / 7`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, LU, Dyn};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Result, VqError};
use crate::params::ModelParams;
use crate::theta::ThetaEngine;

pub type SiteMap = DMatrix<C64>;
pub type ThetaVector = DVector<C64>;

const I: C64 = C64 { re: 0.0, im: 1.0 };
const MAX_DRAWS: usize = 32;
const COLLOC_COND_MAX: f64 = 1e8;
const GRAM_COND_MAX: f64 = 1e7;

/// Seed streams, so that adding draws in one place does not move another.
pub(crate) mod stream {
    pub const BASIS: u64 = 1;
    pub const TAU_BAXTER: u64 = 2;
    pub const TAU_FABRICIUS: u64 = 3;
    pub const U0: u64 = 4;
    pub const PROBE: u64 = 5;
    pub const CHECKS: u64 = 6;
}

pub(crate) fn rng_for(seed: u64, s: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(s);
    rng
}

#[derive(Debug, Clone)]
pub struct RepBasis {
    pub two_l: usize,
    pub eta: f64,
    pub shifts: Vec<f64>,
    pub points: Vec<C64>,
    pub colloc: DMatrix<C64>,
    lu: LU<C64, Dyn, Dyn>,
    pub gram: DMatrix<C64>,
    pub quad_n: usize,
    pub colloc_cond: f64,
    pub gram_cond: f64,
    /// Relative change of the Gram matrix between `quad_n/2` and `quad_n`.
    pub quad_change: f64,
}

impl RepBasis {
    pub fn dim(&self) -> usize {
        self.two_l + 1
    }

    /// Coefficients of the function with the given values at the collocation points.
    pub fn coeffs_from_values(&self, vals: &[C64]) -> ThetaVector {
        self.lu.solve(&DVector::from_column_slice(vals)).expect("collocation matrix is nonsingular")
    }

    pub fn coeffs_of<F>(&self, f: F) -> Result<ThetaVector>
    where
        F: Fn(C64) -> Result<C64>,
    {
        let vals = self.points.iter().map(|&z| f(z)).collect::<Result<Vec<_>>>()?;
        Ok(self.coeffs_from_values(&vals))
    }

    /// Coefficients of `[z; a]_{2l}`.
    pub fn sym_vector(&self, eng: &ThetaEngine, a: C64) -> Result<ThetaVector> {
        self.coeffs_of(|z| eng.bracket_sym(z, a, self.two_l, self.eta))
    }

    pub fn basis_values(&self, eng: &ThetaEngine, z: C64) -> Result<Vec<C64>> {
        self.shifts.iter().map(|&a| eng.bracket_sym(z, C64::new(a, 0.0), self.two_l, self.eta)).collect()
    }

    pub fn eval(&self, eng: &ThetaEngine, c: &ThetaVector, z: C64) -> Result<C64> {
        Ok(self.basis_values(eng, z)?.iter().zip(c.iter()).map(|(g, c)| g * c).sum())
    }

    /// `⟨f, g⟩ = c_f^H Gram c_g`.
    pub fn form(&self, f: &ThetaVector, g: &ThetaVector) -> C64 {
        (f.adjoint() * &self.gram * g)[(0, 0)]
    }
}

pub fn build_basis(params: &ModelParams, eng: &ThetaEngine) -> Result<RepBasis> {
    let d = params.dim();
    let two_l = params.two_l;
    let eta = params.eta();
    let mut rng = rng_for(params.seed, stream::BASIS);
    let (mut last_c, mut last_g) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..MAX_DRAWS {
        let a0: f64 = rng.random_range(0.05..0.45);
        let delta: f64 = rng.random_range(0.05..0.45);
        let shifts: Vec<f64> = (0..d).map(|j| a0 + j as f64 * delta).collect();
        let points: Vec<C64> =
            (0..d).map(|_| C64::new(rng.random_range(0.0..0.5), params.tau.im / 7.0)).collect();

        let mut too_small = false;
        for &z in &points {
            if eng.bracket(2.0 * z)?.norm() <= 1e-6 {
                too_small = true;
            }
        }
        if too_small {
            continue;
        }
        let mut colloc = DMatrix::zeros(d, d);
        for (i, &z) in points.iter().enumerate() {
            for (j, &a) in shifts.iter().enumerate() {
                colloc[(i, j)] = eng.bracket_sym(z, C64::new(a, 0.0), two_l, eta)?;
            }
        }
        last_c = normalized_cond(&colloc);
        if !(last_c < COLLOC_COND_MAX) {
            continue;
        }
        let lu = colloc.clone().lu();
        let mut basis = RepBasis {
            two_l,
            eta,
            shifts,
            points,
            colloc,
            lu,
            gram: DMatrix::zeros(d, d),
            quad_n: params.quad_n,
            colloc_cond: last_c,
            gram_cond: 0.0,
            quad_change: 0.0,
        };
        let quad = Quadrature::new(eng, two_l, eta, params.quad_n)?;
        let coarse = Quadrature::new(eng, two_l, eta, params.quad_n / 2)?;
        let g = quad.gram(eng, &basis)?;
        let gc = coarse.gram(eng, &basis)?;
        let change = (&g - &gc).norm() / g.norm();
        if !(change < 1e-8) {
            return Err(VqError::Quadrature(change));
        }
        let g = (&g + g.adjoint()) * C64::new(0.5, 0.0);
        last_g = normalized_cond(&g);
        if !(last_g < GRAM_COND_MAX) || g.clone().cholesky().is_none() {
            continue;
        }
        basis.gram = g;
        basis.gram_cond = last_g;
        basis.quad_change = change;
        return Ok(basis);
    }
    Err(VqError::Conditioning { attempts: MAX_DRAWS, colloc: last_c, gram: last_g })
}

/// Condition number after scaling columns (and rows, for square Hermitian use) to unit norm.
pub fn normalized_cond(m: &DMatrix<C64>) -> f64 {
    let mut s = m.clone();
    for mut c in s.column_iter_mut() {
        let n = c.norm();
        if n > 0.0 {
            c /= C64::new(n, 0.0);
        }
    }
    let sv = s.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Periodic trapezoid grid on `[0,1) × [0, Im τ)` with the Sklyanin kernel
/// `μ(z, z̄)` precomputed.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub n: usize,
    pub nodes: Vec<C64>,
    pub weights: Vec<C64>,
}

impl Quadrature {
    pub fn new(eng: &ThetaEngine, two_l: usize, eta: f64, n: usize) -> Result<Self> {
        let ty = eng.tau().im;
        for offset in [0.0, 0.5] {
            let nodes: Vec<C64> = (0..n * n)
                .map(|k| {
                    let (ix, iy) = (k / n, k % n);
                    C64::new((ix as f64 + offset) / n as f64, (iy as f64 + offset) * ty / n as f64)
                })
                .collect();
            let h = ty / (n * n) as f64;
            let kernel: Result<Vec<Option<C64>>> =
                nodes.par_iter().map(|&z| kernel(eng, two_l, eta, z, z.conj())).collect();
            let kernel = kernel?;
            if kernel.iter().all(|k| k.is_some()) {
                let weights = kernel.into_iter().map(|k| k.unwrap() * h).collect();
                return Ok(Quadrature { n, nodes, weights });
            }
        }
        Err(VqError::NearZero { what: "Sklyanin kernel", modulus: 0.0 })
    }

    pub fn gram(&self, eng: &ThetaEngine, basis: &RepBasis) -> Result<DMatrix<C64>> {
        let d = basis.dim();
        let vals: Vec<Vec<C64>> =
            self.nodes.par_iter().map(|&z| basis.basis_values(eng, z)).collect::<Result<_>>()?;
        let mut g = DMatrix::zeros(d, d);
        for (v, w) in vals.iter().zip(&self.weights) {
            for i in 0..d {
                let ci = v[i].conj() * w;
                for j in 0..d {
                    g[(i, j)] += ci * v[j];
                }
            }
        }
        Ok(g)
    }

    /// `∫∫ conj(f) g μ` for arbitrary functions.
    pub fn form<F, G>(&self, f: F, g: G) -> Result<C64>
    where
        F: Fn(C64) -> Result<C64> + Sync,
        G: Fn(C64) -> Result<C64> + Sync,
    {
        let terms: Vec<C64> = self
            .nodes
            .par_iter()
            .zip(&self.weights)
            .map(|(&z, w)| Ok(f(z)?.conj() * g(z)? * w))
            .collect::<Result<_>>()?;
        Ok(terms.iter().sum())
    }
}

/// `μ(z,w) = θ11(2z)θ11(2w) / ∏_{j=0}^{2l+1} θ00(z+w+c_j)θ00(z-w+c_j)`, `c_j = (2j-2l-1)η`.
/// `None` when a denominator factor is within 1e-10 of zero.
pub fn kernel(eng: &ThetaEngine, two_l: usize, eta: f64, z: C64, w: C64) -> Result<Option<C64>> {
    let num = eng.bracket(2.0 * z)? * eng.bracket(2.0 * w)?;
    let mut den = C64::new(1.0, 0.0);
    for j in 0..two_l + 2 {
        let c = (2.0 * j as f64 - two_l as f64 - 1.0) * eta;
        let p = eng.theta(0, 0, z + w + c)?;
        let q = eng.theta(0, 0, z - w + c)?;
        if p.norm() < 1e-10 || q.norm() < 1e-10 {
            return Ok(None);
        }
        den *= p * q;
    }
    Ok(Some(num / den))
}

/// `s_a(z)` in the difference-operator realization of `S^a`.
fn s_coeff(eng: &ThetaEngine, a: usize, eta: f64, z: C64) -> Result<C64> {
    let e = C64::new(eta, 0.0);
    Ok(match a {
        0 => eng.theta(1, 1, e)? * eng.theta(1, 1, 2.0 * z)?,
        1 => eng.theta(1, 0, e)? * eng.theta(1, 0, 2.0 * z)?,
        2 => I * eng.theta(0, 0, e)? * eng.theta(0, 0, 2.0 * z)?,
        3 => eng.theta(0, 1, e)? * eng.theta(0, 1, 2.0 * z)?,
        _ => unreachable!("generator index out of range"),
    })
}

/// `(S^a f)(z) = [s_a(z-lη) f(z+η) - s_a(-z-lη) f(z-η)] / θ11(2z)` at a single point.
pub fn apply_difference<F>(eng: &ThetaEngine, two_l: usize, eta: f64, a: usize, f: F, z: C64) -> Result<C64>
where
    F: Fn(C64) -> Result<C64>,
{
    let leta = two_l as f64 / 2.0 * eta;
    let den = eng.bracket(2.0 * z)?;
    Ok((s_coeff(eng, a, eta, z - leta)? * f(z + eta)? - s_coeff(eng, a, eta, -z - leta)? * f(z - eta)?) / den)
}

/// Matrix of `ρ(S^a)` by collocation of [`apply_difference`].
pub fn sklyanin_generator(eng: &ThetaEngine, basis: &RepBasis, a: usize) -> Result<SiteMap> {
    let d = basis.dim();
    let eta = basis.eta;
    let mut m = DMatrix::zeros(d, d);
    for (j, &sh) in basis.shifts.iter().enumerate() {
        let a_j = C64::new(sh, 0.0);
        let f = |z: C64| eng.bracket_sym(z, a_j, basis.two_l, eta);
        let col = basis.coeffs_of(|z| apply_difference(eng, basis.two_l, eta, a, &f, z))?;
        m.set_column(j, &col);
    }
    Ok(m)
}

/// Matrix of `U_a`: `(U_1 f)(z) = e^{πil} f(z+1/2)`,
/// `(U_3 f)(z) = e^{πil} e^{πil(4z+τ)} f(z+τ/2)`, `U_2 = U_3 U_1`.
pub fn unitary_u(eng: &ThetaEngine, basis: &RepBasis, a: usize) -> Result<SiteMap> {
    if a == 2 {
        return Ok(unitary_u(eng, basis, 3)? * unitary_u(eng, basis, 1)?);
    }
    let d = basis.dim();
    let l = basis.two_l as f64 / 2.0;
    let tau = eng.tau();
    let ph = (PI * I * l).exp();
    let mut m = DMatrix::zeros(d, d);
    for (j, &sh) in basis.shifts.iter().enumerate() {
        let a_j = C64::new(sh, 0.0);
        let f = |z: C64| eng.bracket_sym(z, a_j, basis.two_l, basis.eta);
        let col = match a {
            1 => basis.coeffs_of(|z| Ok(ph * f(z + 0.5)?))?,
            3 => basis.coeffs_of(|z| Ok(ph * (PI * I * l * (4.0 * z + tau)).exp() * f(z + tau / 2.0)?))?,
            _ => unreachable!("unitary index out of range"),
        };
        m.set_column(j, &col);
    }
    Ok(m)
}

/// Closed form of `⟨[z;α]_n, [z;γ]_n⟩`:
/// `C_n e^{-πiτ} ∏_{j<n} θ00(γ-ᾱ+(2j-n+1)η) θ00(γ+ᾱ+(2j+n-1)η)`.
pub fn sym_form_closed(eng: &ThetaEngine, alpha: C64, gamma: C64, n: usize, eta: f64) -> Result<C64> {
    let mut p = eng.form_prefactor(n, eta)?;
    let nf = n as f64;
    for j in 0..n {
        let jf = j as f64;
        p *= eng.theta(0, 0, gamma - alpha.conj() + (2.0 * jf - nf + 1.0) * eta)?
            * eng.theta(0, 0, gamma + alpha.conj() + (2.0 * jf + nf - 1.0) * eta)?;
    }
    Ok(p)
}

/// Closed form of `⟨ω_{σλ}(-ū, σv), ω_{σ'λ'}(u', σ'v')⟩`.
#[allow(clippy::too_many_arguments)]
pub fn omega_form_closed(
    eng: &ThetaEngine,
    two_l: usize,
    eta: f64,
    (sigma, lambda, u, v): (f64, C64, C64, C64),
    (sigma_p, lambda_p, u_p, v_p): (f64, C64, C64, C64),
) -> Result<C64> {
    let leta = two_l as f64 / 2.0 * eta;
    let a = lambda_p - v_p;
    let b = (lambda - v).conj();
    let x1 = (a - b) / 2.0 + (sigma_p * u_p + sigma * u) / 2.0 + (sigma_p - sigma) * leta;
    let x2 = (a + b) / 2.0 + (sigma_p * u_p - sigma * u) / 2.0 + (sigma_p + sigma) * leta;
    Ok(eng.c_prime(two_l, eta)? * eng.theta_pow2l(x1, two_l, eta)? * eng.theta_pow2l(x2, two_l, eta)?)
}

/// Change of basis to `{θ00(2z,2τ) − θ10(2z,2τ), θ00(2z,2τ) + θ10(2z,2τ)}` (spin 1/2 only).
pub fn pauli_frame(eng: &ThetaEngine, basis: &RepBasis) -> Result<SiteMap> {
    if basis.two_l != 1 {
        return Err(VqError::InvalidParams("the two-dimensional frame exists for l = 1/2 only".into()));
    }
    let e2 = eng.with_tau(2.0 * eng.tau())?;
    let e1 = basis.coeffs_of(|z| Ok(e2.theta(0, 0, 2.0 * z)? - e2.theta(1, 0, 2.0 * z)?))?;
    let e2v = basis.coeffs_of(|z| Ok(e2.theta(0, 0, 2.0 * z)? + e2.theta(1, 0, 2.0 * z)?))?;
    Ok(DMatrix::from_columns(&[e1, e2v]))
}
