//! Run configuration: model constants, which constructions to run, the spectral
//! grid and the selected check groups. Complex numbers are `[re, im]`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VqError};
use crate::params::ModelParams;
use crate::qverify::Method;

pub const CHECK_GROUPS: [&str; 10] = ["theta", "rep", "rll", "tt", "tq", "qt", "wy", "lemma", "quasi", "q-full"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodSel {
    Baxter,
    Fabricius,
    Both,
}

impl MethodSel {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodSel::Baxter => vec![Method::Baxter],
            MethodSel::Fabricius => vec![Method::Fabricius],
            MethodSel::Both => vec![Method::Baxter, Method::Fabricius],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    /// Twice the spin.
    pub two_l: usize,
    pub r: usize,
    #[serde(default = "one")]
    pub r_prime: i64,
    #[serde(default = "default_tau")]
    pub tau: C64,
    #[serde(default = "default_v")]
    pub v: C64,
    #[serde(default = "one")]
    pub rpp: i64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_quad_n")]
    pub quad_n: usize,
    #[serde(default = "default_budget")]
    pub dense_budget: usize,
    #[serde(default = "default_method")]
    pub method: MethodSel,
    #[serde(default = "default_u_grid")]
    pub u_grid: Vec<C64>,
    #[serde(default = "default_checks")]
    pub checks: Vec<String>,
    #[serde(default)]
    pub out_dir: Option<String>,
}

fn one() -> i64 {
    1
}
fn default_tau() -> C64 {
    C64::new(0.0, 1.0)
}
fn default_v() -> C64 {
    C64::new(0.09, 0.0)
}
fn default_seed() -> u64 {
    20240611
}
fn default_n_max() -> usize {
    30
}
fn default_tol() -> f64 {
    1e-12
}
fn default_quad_n() -> usize {
    128
}
fn default_budget() -> usize {
    4096
}
fn default_method() -> MethodSel {
    MethodSel::Both
}
fn default_u_grid() -> Vec<C64> {
    vec![
        C64::new(0.13, 0.02),
        C64::new(0.21, -0.03),
        C64::new(0.17, 0.0),
        C64::new(0.33, 0.05),
        C64::new(0.07, -0.04),
    ]
}
fn default_checks() -> Vec<String> {
    CHECK_GROUPS.iter().map(|s| s.to_string()).collect()
}

impl RunConfig {
    pub fn new(n: usize, two_l: usize, r: usize, r_prime: i64, method: MethodSel) -> Self {
        RunConfig {
            n,
            two_l,
            r,
            r_prime,
            tau: default_tau(),
            v: default_v(),
            rpp: 1,
            seed: default_seed(),
            n_max: default_n_max(),
            tol: default_tol(),
            quad_n: default_quad_n(),
            dense_budget: default_budget(),
            method,
            u_grid: default_u_grid(),
            checks: default_checks(),
            out_dir: None,
        }
    }

    /// Parses and validates.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg = Self::parse(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Parses only; [`crate::checks::run`] validates before computing.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| VqError::InvalidParams(format!("config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Model constants with `λ0 = v + 2 r'' l η`.
    pub fn params(&self) -> ModelParams {
        let mut p = ModelParams::new(self.n, self.two_l, self.r, self.r_prime);
        p.tau = self.tau;
        p.v = self.v;
        p.rpp = self.rpp;
        p.seed = self.seed;
        p.n_max = self.n_max;
        p.tol = self.tol;
        p.quad_n = self.quad_n;
        p.dense_budget = self.dense_budget;
        p.lambda0 = p.v + 2.0 * p.rpp as f64 * p.l() * p.eta();
        p
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        if self.method != MethodSel::Baxter && self.n % 2 == 1 {
            return Err(VqError::InvalidParams(format!(
                "method {:?} includes the Fabricius construction, which needs an even number of sites (N = {})",
                self.method, self.n
            )));
        }
        if self.u_grid.len() < 2 {
            return Err(VqError::InvalidParams("u_grid needs at least two points".into()));
        }
        for c in &self.checks {
            if !CHECK_GROUPS.contains(&c.as_str()) {
                return Err(VqError::InvalidParams(format!("unknown check group {c:?}; known: {}", CHECK_GROUPS.join(","))));
            }
        }
        Ok(())
    }

    pub fn preset(name: &str) -> Option<Self> {
        Some(match name {
            "baxter-odd-N" => RunConfig::new(3, 2, 4, 1, MethodSel::Baxter),
            "eight-vertex" => RunConfig::new(2, 1, 5, 1, MethodSel::Both),
            "fabricius-spin1" => RunConfig::new(2, 2, 4, 1, MethodSel::Fabricius),
            _ => return None,
        })
    }
}

pub const PRESETS: [&str; 3] = ["baxter-odd-N", "eight-vertex", "fabricius-spin1"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in PRESETS {
            RunConfig::preset(name).unwrap().validate().unwrap();
        }
        let p = RunConfig::preset("baxter-odd-N").unwrap().params();
        assert_eq!(p.eta(), 0.125);
        assert_eq!(RunConfig::preset("eight-vertex").unwrap().params().eta(), 0.2);
    }

    #[test]
    fn json_round_trip() {
        let c = RunConfig::preset("fabricius-spin1").unwrap();
        assert_eq!(RunConfig::from_json(&c.to_json()).unwrap(), c);
    }

    #[test]
    fn minimal_json_uses_defaults() {
        let c = RunConfig::from_json(r#"{"n": 2, "two_l": 1, "r": 5, "tau": [0.0, 1.0]}"#).unwrap();
        assert_eq!(c.method, MethodSel::Both);
        assert_eq!(c.checks.len(), CHECK_GROUPS.len());
    }

    #[test]
    fn odd_n_with_fabricius_rejected() {
        let mut c = RunConfig::preset("fabricius-spin1").unwrap();
        c.n = 3;
        assert!(c.validate().unwrap_err().to_string().contains("even number of sites"));
    }

    #[test]
    fn unknown_group_rejected() {
        let mut c = RunConfig::preset("eight-vertex").unwrap();
        c.checks = vec!["nope".into()];
        assert!(c.validate().is_err());
    }
}
