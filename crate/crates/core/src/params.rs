use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VqError};
use crate::theta::ThetaParams;

/// All model constants. Spin is stored as `two_l = 2l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub two_l: usize,
    pub r: usize,
    pub r_prime: i64,
    pub tau: C64,
    pub lambda0: C64,
    pub v: C64,
    pub rpp: i64,
    pub seed: u64,
    pub n_max: usize,
    pub tol: f64,
    pub quad_n: usize,
    /// Largest lattice dimension (2l+1)^N built densely.
    pub dense_budget: usize,
}

impl ModelParams {
    /// Defaults for everything but the lattice shape; gauge parameters follow
    /// `v = 0.09`, `λ0 = v + 2 r'' l η` with `r'' = 1`.
    pub fn new(n: usize, two_l: usize, r: usize, r_prime: i64) -> Self {
        let mut p = ModelParams {
            n,
            two_l,
            r,
            r_prime,
            tau: C64::new(0.0, 1.0),
            lambda0: C64::new(0.0, 0.0),
            v: C64::new(0.09, 0.0),
            rpp: 1,
            seed: 20240611,
            n_max: 30,
            tol: 1e-12,
            quad_n: 128,
            dense_budget: 4096,
        };
        p.lambda0 = p.v + 2.0 * p.rpp as f64 * p.l() * p.eta();
        p
    }

    pub fn l(&self) -> f64 {
        self.two_l as f64 / 2.0
    }

    /// `η = r' / (2 l r)`.
    pub fn eta(&self) -> f64 {
        self.r_prime as f64 / (self.two_l as f64 * self.r as f64)
    }

    /// Site dimension `2l + 1`.
    pub fn dim(&self) -> usize {
        self.two_l + 1
    }

    pub fn lattice_dim(&self) -> usize {
        self.dim().pow(self.n as u32)
    }

    pub fn theta_params(&self) -> ThetaParams {
        ThetaParams { tau: self.tau, n_max: self.n_max, tol: self.tol }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(VqError::InvalidParams(m));
        self.theta_params().validate()?;
        if self.n == 0 {
            return bad("N must be positive".into());
        }
        if self.two_l == 0 {
            return bad("l must be a positive half-integer".into());
        }
        if (self.n * self.two_l) % 2 != 0 {
            return bad(format!("N l must be an integer (N = {}, l = {})", self.n, self.l()));
        }
        if self.r == 0 {
            return bad("r must be positive".into());
        }
        if self.r_prime == 0 || gcd(self.r as i64, self.r_prime) != 1 {
            return bad(format!("r = {} and r' = {} must be coprime with r' != 0", self.r, self.r_prime));
        }
        let bound = 1.0 / (2.0 * (self.two_l as f64 + 1.0));
        if self.eta().abs() > bound {
            return bad(format!("eta = {} outside [-{bound}, {bound}]", self.eta()));
        }
        if self.quad_n < 8 {
            return bad("quad_n must be at least 8".into());
        }
        if self.lattice_dim() > self.dense_budget {
            return Err(VqError::Budget { dim: self.lattice_dim(), budget: self.dense_budget });
        }
        Ok(())
    }

    /// Hypothesis `λ0 − v = 2 r'' l η` needed by the Y-conjugation.
    pub fn gauge_residual(&self) -> f64 {
        (self.lambda0 - self.v - 2.0 * self.rpp as f64 * self.l() * self.eta()).norm()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_from_rationals() {
        assert_eq!(ModelParams::new(3, 2, 4, 1).eta(), 0.125);
        assert_eq!(ModelParams::new(2, 1, 5, 1).eta(), 0.2);
    }

    #[test]
    fn integrality_of_nl() {
        assert!(ModelParams::new(3, 1, 5, 1).validate().is_err());
        assert!(ModelParams::new(2, 1, 5, 1).validate().is_ok());
    }

    #[test]
    fn eta_range_enforced() {
        // l = 1, r = 2 gives eta = 1/4 > 1/6
        assert!(ModelParams::new(2, 2, 2, 1).validate().is_err());
    }

    #[test]
    fn coprimality_enforced() {
        assert!(ModelParams::new(2, 2, 4, 2).validate().is_err());
    }

    #[test]
    fn default_gauge_satisfies_hypothesis() {
        assert!(ModelParams::new(2, 2, 4, 1).gauge_residual() < 1e-15);
    }
}
