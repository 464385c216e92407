//! Result record for a single verification check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::tensor::Cplx;

/// Outcome of one named check: a residual compared against a tolerance.
/// `pass` is always `residual <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Echo of the parameters that produced the residual (seed, sample
    /// counts, sizes). Kept as sorted strings so serialized reports are
    /// stable.
    pub params: BTreeMap<String, String>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    pub fn new(
        name: impl Into<String>,
        params: BTreeMap<String, String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        CheckReport {
            name: name.into(),
            params,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }

    /// One-line human-readable form.
    pub fn line(&self) -> String {
        format!(
            "{} {} residual={:.3e} tolerance={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.residual,
            self.tolerance
        )
    }
}

/// Sort checks by name, then by parameter map, for stable report files.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| a.name.cmp(&b.name).then_with(|| a.params.cmp(&b.params)));
}

/// Compact complex formatting for parameter echoes: `a+bi` / `a-bi`.
pub fn fmt_cplx(z: Cplx) -> String {
    if z.im >= 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_residual_at_most_tolerance() {
        let r = CheckReport::new("x", BTreeMap::new(), 1e-12, 1e-12);
        assert!(r.pass);
        let r = CheckReport::new("x", BTreeMap::new(), 2e-12, 1e-12);
        assert!(!r.pass);
        assert!(r.line().starts_with("FAIL x "));
    }

    #[test]
    fn sorting_is_by_name_then_params() {
        let mut params_b = BTreeMap::new();
        params_b.insert("n".to_string(), "3".to_string());
        let mut params_a = BTreeMap::new();
        params_a.insert("n".to_string(), "2".to_string());
        let mut v = vec![
            CheckReport::new("b", BTreeMap::new(), 0.0, 1.0),
            CheckReport::new("a", params_b, 0.0, 1.0),
            CheckReport::new("a", params_a, 0.0, 1.0),
        ];
        sort_reports(&mut v);
        assert_eq!(v[0].name, "a");
        assert_eq!(v[0].params["n"], "2");
        assert_eq!(v[1].params["n"], "3");
        assert_eq!(v[2].name, "b");
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(fmt_cplx(Cplx::new(1.5, -2.0)), "1.5-2i");
        assert_eq!(fmt_cplx(Cplx::new(0.0, 1.0)), "0+1i");
    }
}
