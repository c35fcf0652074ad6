use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::Result;
use crate::linalg::kron_power;
use crate::params::ModelParams;
use crate::repspace::{build_basis, sklyanin_generator, unitary_u, RepBasis, SiteMap, ThetaVector};
use crate::theta::ThetaEngine;

/// Everything needed per parameter set: theta engines at τ and τ/2, the site
/// basis with its Gram matrix, and the four generators.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: ModelParams,
    pub engine: ThetaEngine,
    pub half: ThetaEngine,
    pub basis: RepBasis,
    pub gens: [SiteMap; 4],
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let engine = ThetaEngine::new(params.theta_params())?;
        let half = engine.with_tau(params.tau / 2.0)?;
        let basis = build_basis(&params, &engine)?;
        let gens = [
            sklyanin_generator(&engine, &basis, 0)?,
            sklyanin_generator(&engine, &basis, 1)?,
            sklyanin_generator(&engine, &basis, 2)?,
            sklyanin_generator(&engine, &basis, 3)?,
        ];
        Ok(Model { params, engine, half, basis, gens })
    }

    pub fn eta(&self) -> f64 {
        self.params.eta()
    }

    pub fn l(&self) -> f64 {
        self.params.l()
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn gram(&self) -> &DMatrix<C64> {
        &self.basis.gram
    }

    /// Gram matrix of the tensor-product form on H.
    pub fn gram_h(&self) -> DMatrix<C64> {
        kron_power(&self.basis.gram, self.params.n)
    }

    pub fn unitary(&self, a: usize) -> Result<SiteMap> {
        unitary_u(&self.engine, &self.basis, a)
    }

    /// Coefficients of `[z; a]_{2l}`.
    pub fn sym(&self, a: C64) -> Result<ThetaVector> {
        self.basis.sym_vector(&self.engine, a)
    }

    /// `[u]`.
    pub fn br(&self, u: C64) -> Result<C64> {
        self.engine.bracket(u)
    }

    /// `h_±(u) = (2[u ∓ 2lη])^N`; `sign` is +1 or -1.
    pub fn h(&self, sign: f64, u: C64) -> Result<C64> {
        let x = 2.0 * self.br(u - sign * 2.0 * self.l() * self.eta())?;
        Ok(x.powu(self.params.n as u32))
    }
}
