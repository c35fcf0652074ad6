//! Transfer matrix and Q-operators of the higher-spin eight-vertex model with
//! rational anisotropy, with every identity checked as a numerical residual.

pub mod checks;
pub mod config;
pub mod error;
pub mod lattice;
pub mod linalg;
#[cfg(test)]
mod oracles;
pub mod model;
pub mod params;
pub mod qbaxter;
pub mod qfabricius;
pub mod qverify;
pub mod report;
pub mod repspace;
pub mod sgrid;
pub mod theta;

pub use checks::run;
pub use config::{MethodSel, RunConfig};
pub use error::{Result, VqError};
pub use model::Model;
pub use num_complex::Complex64 as C64;
pub use params::ModelParams;
pub use qverify::Method;
pub use report::{Report, ReportFile};
