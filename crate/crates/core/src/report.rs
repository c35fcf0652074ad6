//! Residual records and their JSON / CSV serializations.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSnapshot {
    pub n: usize,
    pub two_l: usize,
    pub r: usize,
    pub r_prime: i64,
    pub eta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
}

impl ParamSnapshot {
    pub fn of(cfg: &RunConfig, method: Option<&str>) -> Self {
        let p = cfg.params();
        ParamSnapshot { n: p.n, two_l: p.two_l, r: p.r, r_prime: p.r_prime, eta: p.eta(), method: method.map(str::to_string) }
    }
}

/// One checked identity. `residual` is `None` when the computation itself
/// failed; `error` then carries the reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub anchor: String,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub wall_time: f64,
    pub params: ParamSnapshot,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, residual: f64, tolerance: f64, params: ParamSnapshot) -> Self {
        Report {
            id: id.into(),
            anchor: anchor.into(),
            residual: Some(residual),
            tolerance,
            pass: residual.is_finite() && residual < tolerance,
            wall_time: 0.0,
            params,
            error: None,
        }
    }

    pub fn failed(id: impl Into<String>, anchor: impl Into<String>, tolerance: f64, params: ParamSnapshot, error: String) -> Self {
        Report { id: id.into(), anchor: anchor.into(), residual: None, tolerance, pass: false, wall_time: 0.0, params, error: Some(error) }
    }

    pub fn timed(mut self, seconds: f64) -> Self {
        self.wall_time = seconds;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema: u32,
    pub records: Vec<Report>,
}

impl ReportFile {
    pub fn new(records: Vec<Report>) -> Self {
        ReportFile { schema: SCHEMA, records }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Same document with every timing zeroed, for reproducibility comparisons.
    pub fn without_timings(&self) -> ReportFile {
        let mut out = self.clone();
        for r in &mut out.records {
            r.wall_time = 0.0;
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,anchor,residual,tolerance,pass,seconds\n");
        for r in &self.records {
            let res = r.residual.map_or_else(|| "error".to_string(), |x| format!("{x:e}"));
            s.push_str(&format!("{},{},{},{:e},{},{:.6}\n", csv_field(&r.id), csv_field(&r.anchor), res, r.tolerance, r.pass, r.wall_time));
        }
        s
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn any_error(&self) -> bool {
        self.records.iter().any(|r| r.error.is_some())
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snap() -> ParamSnapshot {
        ParamSnapshot { n: 2, two_l: 1, r: 5, r_prime: 1, eta: 0.2, method: None }
    }

    #[test]
    fn pass_iff_below_tolerance() {
        assert!(Report::new("a", "x", 1e-10, 1e-9, snap()).pass);
        assert!(!Report::new("a", "x", 1e-9, 1e-9, snap()).pass);
        assert!(!Report::new("a", "x", f64::NAN, 1e-9, snap()).pass);
    }

    #[test]
    fn csv_quotes_commas() {
        let f = ReportFile::new(vec![Report::new("a", "f(u), g(u)", 0.0, 1.0, snap())]);
        assert!(f.to_csv().contains("\"f(u), g(u)\""));
    }
}
