//! Consistency checks over a list of presets, one line per check.

use serde::Serialize;
use serde_json::json;

use sdlab_core::curve::{curve_gldim, curve_gldim_bounds, CurveStability};
use sdlab_core::derived::{serre_apply, standard_generator};
use sdlab_core::entropy::{entropy_profile, sdim_estimate};
use sdlab_core::quiver::{coxeter_order, parse_quiver};
use sdlab_core::stability::{
    certify_collection, extract_exceptional_collection, gepner_check, gepner_construct, gldim, sample_batch,
    PHASE_TOL,
};

use crate::report::{Report, Table};
use crate::{dynkin_category, CliError, CliResult};

/// Outcome of one check. `margin` is the worst-case slack: nonnegative when
/// the check passes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckLine {
    pub subject: String,
    pub check: String,
    pub pass: bool,
    pub margin: f64,
}

impl CheckLine {
    fn new(subject: &str, check: &str, margin: f64) -> Self {
        CheckLine { subject: subject.into(), check: check.into(), pass: margin >= 0.0, margin }
    }

    fn line(&self) -> String {
        format!("{} {:<4} {:<28} margin {:+.3e}", if self.pass { "PASS" } else { "FAIL" }, self.subject, self.check, self.margin)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckLine>,
}

impl VerifySummary {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn into_report(self) -> Report {
        let table = Table::new(
            &["subject", "check", "pass", "margin"],
            self.checks
                .iter()
                .map(|c| vec![c.subject.clone(), c.check.clone(), c.pass.to_string(), c.margin.to_string()])
                .collect(),
        );
        let failed = !self.all_pass();
        let mut lines: Vec<String> = self.checks.iter().map(CheckLine::line).collect();
        let passed = self.checks.iter().filter(|c| c.pass).count();
        lines.push(format!("{passed}/{} checks passed", self.checks.len()));
        let mut r = Report::new(json!({ "seed": self.seed, "samples": self.samples, "passed": !failed, "checks": self.checks }), table);
        r.lines = lines;
        r.failed = failed;
        r
    }
}

/// `1` when `ok`, `-1` otherwise.
fn flag(ok: bool) -> f64 {
    if ok { 1.0 } else { -1.0 }
}

fn quiver_checks(name: &str, seed: u64, samples: usize, out: &mut Vec<CheckLine>) -> CliResult<()> {
    let q = parse_quiver(name)?;
    let cat = dynkin_category(&q)?;
    let class = cat.dynkin_class().expect("Dynkin category");
    let h = class.coxeter_number;
    let sdim = (h as f64 - 2.0) / h as f64;

    let order = coxeter_order(&cat.euler().coxeter, 4 * h);
    out.push(CheckLine::new(name, "coxeter-order", flag(order == Some(h))));

    let g = standard_generator(&cat);
    let fcy = serre_apply(&cat, &g, h as i64)? == g.shift(h as i64 - 2);
    out.push(CheckLine::new(name, "fractional-calabi-yau", flag(fcy)));

    let d = sdim_estimate(&q, 10 * h as usize)?;
    let err = (d.upper - sdim).abs().max((d.lower - sdim).abs());
    out.push(CheckLine::new(name, "serre-dimension", 0.05 - err));

    let p = entropy_profile(&q, &[-2.0, -1.0, 0.0, 1.0, 2.0], 4 * h as usize)?;
    out.push(CheckLine::new(name, "entropy-linearity", 1e-9 - (p.slope - sdim).abs().max(p.intercept.abs())));

    let sigma_g = gepner_construct(&cat)?;
    let gap = (gldim(&sigma_g) - sdim).abs();
    let verdict = gepner_check(&sigma_g, sdim)?.verdict;
    out.push(CheckLine::new(name, "gepner-gldim", if verdict { 1e-9 - gap } else { -1.0 }));

    let batch = sample_batch(&cat, seed, samples)?;
    let mut ineq = f64::INFINITY;
    let mut iff = true;
    let mut lemma = true;
    let n = cat.catalog().len();
    for s in &batch {
        let gd = gldim(s);
        ineq = ineq.min(gd - sdim + 1e-9);
        let minimal = (gd - sdim).abs() <= 1e-9;
        iff &= minimal == gepner_check(s, sdim)?.verdict;
        if gd <= 1.0 + PHASE_TOL {
            lemma &= s.semistable_indecomposables().len() == n;
        }
        if gd < 1.0 - PHASE_TOL {
            lemma &= (0..n).all(|i| s.is_stable(i) && cat.hom(i, i) == 1 && cat.ext(i, i) == 0);
        }
    }
    out.push(CheckLine::new(name, "fundamental-inequality", if batch.is_empty() { 0.0 } else { ineq }));
    out.push(CheckLine::new(name, "gepner-iff-minimal", flag(iff)));
    out.push(CheckLine::new(name, "low-gldim-semistability", flag(lemma)));

    let full = match extract_exceptional_collection(&sigma_g) {
        Ok(c) => certify_collection(&cat, &c).is_full_strong(q.vertex_count()),
        Err(_) => false,
    };
    out.push(CheckLine::new(name, "exceptional-collection", flag(full)));
    Ok(())
}

fn curve_checks(out: &mut Vec<CheckLine>) -> CliResult<()> {
    let mut exact = true;
    for g in [0, 1] {
        let c = curve_gldim(&CurveStability::new(g, 0.0, 1.0)?);
        exact &= c.lower() == 1.0 && c.upper() == 1.0;
    }
    out.push(CheckLine::new("C", "low-genus-gldim", flag(exact)));
    let mut slack = f64::INFINITY;
    for g in 2..=4 {
        for h in [0.1, 1.0, 10.0, 1000.0] {
            let b = curve_gldim_bounds(&CurveStability::new(g, 0.0, h)?)?;
            slack = slack.min(b.lower - 1.0).min(b.upper - b.lower);
        }
    }
    out.push(CheckLine::new("C", "higher-genus-interval", slack));
    Ok(())
}

/// Runs every check on each preset. An empty list is a configuration error.
pub fn verify_suite(quivers: &[String], seed: u64, samples: usize) -> CliResult<VerifySummary> {
    if quivers.iter().all(|q| q.trim().is_empty()) {
        return Err(CliError::Config("verify needs at least one quiver".into()));
    }
    let mut checks = Vec::new();
    for name in quivers.iter().map(|q| q.trim()).filter(|q| !q.is_empty()) {
        quiver_checks(name, seed, samples, &mut checks)?;
    }
    curve_checks(&mut checks)?;
    Ok(VerifySummary { seed, samples, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a2_passes_and_is_deterministic() {
        let quivers = vec!["A2".to_string()];
        let a = verify_suite(&quivers, 3, 20).unwrap();
        assert!(a.all_pass(), "{a:#?}");
        let b = verify_suite(&quivers, 3, 20).unwrap();
        assert_eq!(a.into_report().lines, b.into_report().lines);
    }

    #[test]
    fn empty_list_is_a_config_error() {
        let err = verify_suite(&[], 0, 10).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert_eq!(err.kind(), "ConfigError");
    }
}
