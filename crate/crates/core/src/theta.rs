//! Jacobi theta functions with characteristics and the products built from them.
//!
//! `θ_ab(z,τ) = Σ_n exp(πi(a/2+n)²τ + 2πi(a/2+n)(b/2+z))`, summed over
//! `|n + a/2| <= n_max`. The terms are generated by a two-step multiplicative
//! recurrence so that one evaluation costs two complex exponentials.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VqError};

const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaParams {
    pub tau: C64,
    pub n_max: usize,
    pub tol: f64,
}

impl Default for ThetaParams {
    fn default() -> Self {
        ThetaParams { tau: I, n_max: 30, tol: 1e-12 }
    }
}

impl ThetaParams {
    pub fn validate(&self) -> Result<()> {
        if self.tau.re != 0.0 || !(self.tau.im > 0.0) {
            return Err(VqError::InvalidParams(format!(
                "tau must be purely imaginary with positive imaginary part, got {}",
                self.tau
            )));
        }
        if self.n_max < 1 {
            return Err(VqError::InvalidParams("n_max must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(VqError::InvalidParams("tol must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ThetaEngine {
    params: ThetaParams,
    // exp(2πiτ): ratio between consecutive term ratios
    step: C64,
    // exp(πiτ/4)
    quarter: C64,
}

impl ThetaEngine {
    pub fn new(params: ThetaParams) -> Result<Self> {
        params.validate()?;
        let tau = params.tau;
        Ok(ThetaEngine {
            params,
            step: (2.0 * PI * I * tau).exp(),
            quarter: (PI * I * tau / 4.0).exp(),
        })
    }

    /// Same truncation and tolerance, different modulus.
    pub fn with_tau(&self, tau: C64) -> Result<Self> {
        ThetaEngine::new(ThetaParams { tau, ..self.params })
    }

    pub fn params(&self) -> &ThetaParams {
        &self.params
    }

    pub fn tau(&self) -> C64 {
        self.params.tau
    }

    pub fn theta(&self, a: u8, b: u8, z: C64) -> Result<C64> {
        debug_assert!(a < 2 && b < 2);
        let bound = 4.0 * self.params.tau.im;
        if !(z.im.abs() <= bound) {
            return Err(VqError::ThetaRange { z, bound });
        }
        let x = z + 0.5 * b as f64;
        let w = (2.0 * PI * I * x).exp();
        let af = a as f64;
        let t0 = if a == 0 { C64::new(1.0, 0.0) } else { self.quarter * (PI * I * x).exp() };

        let mut sum = t0;
        let n_max = self.params.n_max;

        // m -> m+1 multiplies by exp(πiτ(2m+1)) w
        let mut t = t0;
        let mut r = (PI * I * self.params.tau * (af + 1.0)).exp() * w;
        for _ in 0..n_max.saturating_sub(a as usize) {
            t *= r;
            sum += t;
            r *= self.step;
        }
        // m -> m-1 multiplies by exp(πiτ(1-2m)) / w
        let mut t = t0;
        let mut r = (PI * I * self.params.tau * (1.0 - af)).exp() / w;
        for _ in 0..n_max {
            t *= r;
            sum += t;
            r *= self.step;
        }
        Ok(sum)
    }

    /// `[z] = θ11(z)`.
    pub fn bracket(&self, z: C64) -> Result<C64> {
        self.theta(1, 1, z)
    }

    /// `[z]_k = ∏_{j<k} [z + 2jη]`.
    pub fn bracket_run(&self, z: C64, k: usize, eta: f64) -> Result<C64> {
        let mut p = C64::new(1.0, 0.0);
        for j in 0..k {
            p *= self.bracket(z + 2.0 * j as f64 * eta)?;
        }
        Ok(p)
    }

    /// `[z;a]_k = [z+a]_k [-z+a]_k`.
    pub fn bracket_sym(&self, z: C64, a: C64, k: usize, eta: f64) -> Result<C64> {
        Ok(self.bracket_run(z + a, k, eta)? * self.bracket_run(-z + a, k, eta)?)
    }

    /// `θ^{(2l)}_00(u) = ∏_{j<2l} θ00(u + (2j-2l+1)η)`.
    pub fn theta_pow2l(&self, u: C64, two_l: usize, eta: f64) -> Result<C64> {
        let mut p = C64::new(1.0, 0.0);
        for j in 0..two_l {
            let shift = (2.0 * j as f64 - two_l as f64 + 1.0) * eta;
            p *= self.theta(0, 0, u + shift)?;
        }
        Ok(p)
    }

    /// `∏_{j>=1} (1 - e^{2jπiτ})^3`, stopped once the factor is 1 to 1e-16.
    pub fn euler_cube(&self) -> C64 {
        let mut p = C64::new(1.0, 0.0);
        let mut q = self.step;
        for _ in 1..=200 {
            if q.norm() < 1e-16 {
                break;
            }
            let f = C64::new(1.0, 0.0) - q;
            p *= f * f * f;
            q *= self.step;
        }
        p
    }

    /// `C_N = -2η e^{3πiτ/4} / ([2(N+1)η] ∏(1-e^{2jπiτ})^3)`.
    pub fn sklyanin_c(&self, n: usize, eta: f64) -> Result<C64> {
        let den = self.bracket(C64::new(2.0 * (n as f64 + 1.0) * eta, 0.0))? * self.euler_cube();
        check_denominator("C_N", den)?;
        let tau = self.params.tau;
        Ok(-2.0 * eta * (3.0 * PI * I * tau / 4.0).exp() / den)
    }

    /// Prefactor of the two-product Sklyanin form, `C_N e^{-πiτ}`.
    pub fn form_prefactor(&self, n: usize, eta: f64) -> Result<C64> {
        Ok(self.sklyanin_c(n, eta)? * (-PI * I * self.params.tau).exp())
    }

    /// `C'_{2l}`, the prefactor shared by F and the ω-form.
    pub fn c_prime(&self, two_l: usize, eta: f64) -> Result<C64> {
        self.form_prefactor(two_l, eta)
    }

    pub fn cap_f(&self, z: C64, two_l: usize, eta: f64) -> Result<C64> {
        Ok(self.c_prime(two_l, eta)? * self.theta_pow2l(z, two_l, eta)?)
    }

    /// `G(z) = ∏_{j<2l} θ00(z + (2j+2l-1)η - 2(2l-1)η)`; even and 1-periodic.
    pub fn cap_g(&self, z: C64, two_l: usize, eta: f64) -> Result<C64> {
        let tl = two_l as f64;
        let mut p = C64::new(1.0, 0.0);
        for j in 0..two_l {
            let shift = (2.0 * j as f64 + tl - 1.0) * eta - 2.0 * (tl - 1.0) * eta;
            p *= self.theta(0, 0, z + shift)?;
        }
        Ok(p)
    }

    pub fn coeff_wl(&self, a: usize, u: C64, eta: f64) -> Result<C64> {
        let (p, q) = W_CHARS[a];
        let den = self.theta(p, q, C64::new(eta, 0.0))?;
        check_denominator("W^L", den)?;
        Ok(self.theta(p, q, u)? / den)
    }

    pub fn coeff_wr(&self, a: usize, u: C64, eta: f64) -> Result<C64> {
        self.coeff_wl(a, u + eta, eta)
    }
}

/// Characteristics `(a,b)` of the theta function behind `W_0..W_3`.
pub const W_CHARS: [(u8, u8); 4] = [(1, 1), (1, 0), (0, 0), (0, 1)];

pub(crate) fn check_denominator(what: &'static str, x: C64) -> Result<()> {
    if x.norm() < 1e-13 {
        Err(VqError::NearZero { what, modulus: x.norm() })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eng() -> ThetaEngine {
        ThetaEngine::new(ThetaParams::default()).unwrap()
    }

    #[test]
    fn odd_theta_vanishes_at_origin() {
        assert!(eng().theta(1, 1, C64::new(0.0, 0.0)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn empty_runs_are_one() {
        let e = eng();
        let z = C64::new(0.3, 0.1);
        assert_eq!(e.bracket_run(z, 0, 0.1).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(e.bracket_sym(z, z, 0, 0.1).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(e.bracket_run(z, 1, 0.1).unwrap(), e.bracket(z).unwrap());
    }

    #[test]
    fn rejects_far_arguments() {
        let e = eng();
        assert!(matches!(e.theta(0, 0, C64::new(0.0, 4.5)), Err(VqError::ThetaRange { .. })));
        assert!(e.theta(0, 0, C64::new(0.0, 3.9)).is_ok());
    }

    #[test]
    fn w_left_is_one_at_eta() {
        let e = eng();
        let w = e.coeff_wl(0, C64::new(0.125, 0.0), 0.125).unwrap();
        assert!((w - 1.0).norm() < 1e-15);
    }

    #[test]
    fn rejects_real_tau() {
        assert!(ThetaEngine::new(ThetaParams { tau: C64::new(0.1, 1.0), ..Default::default() }).is_err());
    }
}
