use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VqError {
    #[error("theta argument {z} outside the certified strip |Im z| <= {bound}")]
    ThetaRange { z: Complex64, bound: f64 },

    #[error("near-zero denominator in {what}: modulus {modulus:e}")]
    NearZero { what: &'static str, modulus: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("basis conditioning not met after {attempts} draws (last: collocation {colloc:e}, gram {gram:e})")]
    Conditioning { attempts: usize, colloc: f64, gram: f64 },

    #[error("quadrature not converged: relative change {0:e} under doubling")]
    Quadrature(f64),

    #[error("dimension {dim} exceeds the dense budget {budget}")]
    Budget { dim: usize, budget: usize },

    #[error("{what} forms disagree: residual {residual:e}")]
    Convention { what: &'static str, residual: f64 },

    #[error("recurrence compatibility residual {0:e} exceeds 1e-9")]
    Compatibility(f64),

    #[error("Q_R(u0) degenerate at every candidate u0; smallest singular values {smallest:?} (largest {largest:?})")]
    Degenerate { smallest: Vec<f64>, largest: Vec<f64> },

    #[error("the Fabricius construction needs an even number of sites, got N = {0}")]
    OddSites(usize),
}

pub type Result<T> = std::result::Result<T, VqError>;
