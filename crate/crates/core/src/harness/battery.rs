//! Exact identities checked path by path.
//!
//! Each check returns `Err(description)` on the first violated identity.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::crossings::crossing_integrals_of_values;
use crate::follmer::{covariation, identity_report_with, qv_bracket, IdentityFamily};
use crate::oracle::{variation_dp_values, variation_exhaustive};
use crate::path::CadlagPath;
use crate::simulate::random_test_path;
use crate::skorohod::{audit_backlash, jordan_envelope, sandwich_check};
use crate::stieltjes::{integration_by_parts_check, IntegrandFunction, Preset};
use crate::variation::{triple_of_values, TruncationParam, VariationTriple};

pub type Check = std::result::Result<(), String>;

/// Rounding allowance for sums over `n` terms of size `scale`.
pub fn sum_tolerance(n: usize, scale: f64) -> f64 {
    1e-12 * n.max(1) as f64 * (1.0 + scale.abs())
}

fn param(eps: f64) -> TruncationParam {
    TruncationParam::new(eps).expect("battery levels are positive")
}

/// Random test path number `index` of the battery seeded by `seed`.
pub fn battery_path(seed: u64, index: u64, max_len: usize) -> CadlagPath {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    random_test_path(&mut rng, max_len)
}

fn triple_gap(a: &VariationTriple, b: &VariationTriple, tol: f64, what: &str) -> Check {
    let d = a.max_abs_diff(b);
    if d <= tol {
        Ok(())
    } else {
        Err(format!("{what}: {a:?} vs {b:?} (diff {d:e}, tol {tol:e})"))
    }
}

/// One-pass truncated variations agree with the quadratic program.
pub fn check_oracle_dp(values: &[f64], eps: f64) -> Check {
    let fast = triple_of_values(values, param(eps));
    let dp = variation_dp_values(values, eps);
    triple_gap(&fast, &dp, 1e-12 * values.len() as f64, "sweep vs dp")
}

/// The quadratic program agrees with full enumeration (`n <= 20`).
pub fn check_oracle_exhaustive(values: &[f64], eps: f64) -> Check {
    let dp = variation_dp_values(values, eps);
    let brute = variation_exhaustive(values, eps);
    triple_gap(&dp, &brute, 1e-12 * values.len() as f64, "dp vs exhaustive")
}

/// `TTV = UTV + DTV`, `|UTV - DTV - (x_end - x_0)| <= eps` and the Jordan
/// approximation stays within `eps` of the path.
pub fn check_jordan(p: &CadlagPath, eps: f64) -> Check {
    let t = triple_of_values(p.values(), param(eps));
    let tol = sum_tolerance(p.len(), t.ttv);
    if (t.ttv - (t.utv + t.dtv)).abs() > tol {
        return Err(format!("ttv {} != utv {} + dtv {}", t.ttv, t.utv, t.dtv));
    }
    let net = p.last_value() - p.first_value();
    if (t.utv - t.dtv - net).abs() > eps + tol {
        return Err(format!("|utv - dtv - net| = {} > eps {eps}", (t.utv - t.dtv - net).abs()));
    }
    let j = jordan_envelope(p, param(eps), p.times()).map_err(|e| e.to_string())?;
    let r = j.max_abs_remainder();
    if r > eps + tol {
        return Err(format!("jordan remainder {r} > eps {eps}"));
    }
    Ok(())
}

/// Structural properties of the play-operator envelope plus the sandwich.
pub fn check_envelope(p: &CadlagPath, halfwidth: f64) -> Check {
    let audit = audit_backlash(p, halfwidth, 1e-12).map_err(|e| e.to_string())?;
    if !audit.all_pass() {
        return Err(format!("envelope audit failed: {audit:?}"));
    }
    let s = sandwich_check(p, halfwidth, p.horizon()).map_err(|e| e.to_string())?;
    if !s.holds(1e-12 * p.len() as f64) {
        return Err(format!("sandwich violated: {s:?}"));
    }
    Ok(())
}

/// Crossing-count integrals reproduce the truncated variations.
pub fn check_crossings(values: &[f64], eps: f64) -> Check {
    let ci = crossing_integrals_of_values(values, eps);
    let t = triple_of_values(values, param(eps));
    for (name, a, b) in [("up", ci.up, t.utv), ("down", ci.down, t.dtv), ("total", ci.total, t.ttv)] {
        if (a - b).abs() > 1e-9 * (1.0 + b.abs()) {
            return Err(format!("{name} crossing integral {a} vs truncated variation {b}"));
        }
    }
    Ok(())
}

pub fn check_by_parts(x: &CadlagPath, h: &CadlagPath) -> Check {
    let scale = x.values().iter().chain(h.values()).fold(0.0f64, |m, v| m.max(v.abs()));
    let r = integration_by_parts_check(x, h, x.horizon()).map_err(|e| e.to_string())?;
    if r.abs() > sum_tolerance(x.len(), scale * scale) {
        return Err(format!("integration by parts residual {r:e}"));
    }
    Ok(())
}

/// Classical change of variables for the identity family.
pub fn check_change_of_variables(p: &CadlagPath, f: &dyn IntegrandFunction) -> Check {
    let r = identity_report_with(p, &IdentityFamily, f, 1.0, p.horizon()).map_err(|e| e.to_string())?;
    let scale = 1.0 + p.values().iter().map(|&v| f.antiderivative(v).abs()).fold(0.0, f64::max);
    if r.residual_thm2.abs() > 1e-10 * scale {
        return Err(format!("change of variables residual {:e} for {}", r.residual_thm2, f.label()));
    }
    Ok(())
}

pub fn check_covariation_symmetry(x: &CadlagPath, y: &CadlagPath, eps: f64) -> Check {
    let grid = x.times();
    let a = covariation(x, y, eps, grid).map_err(|e| e.to_string())?;
    let b = covariation(y, x, eps, grid).map_err(|e| e.to_string())?;
    if a.values != b.values {
        return Err("covariation not symmetric".into());
    }
    Ok(())
}

/// Fixed-level brackets are non-decreasing and satisfy the energy cross-check.
pub fn check_bracket(p: &CadlagPath, eps: f64) -> Check {
    let q = qv_bracket(p, &[eps], p.times()).map_err(|e| e.to_string())?;
    if !q.is_non_decreasing() {
        return Err("bracket decreases".into());
    }
    match q.levels[0].cross_check {
        Some(c) if c.holds => Ok(()),
        other => Err(format!("energy cross-check failed: {other:?}")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckTally {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    pub first_failure: Option<String>,
}

impl CheckTally {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), passed: 0, failed: 0, first_failure: None }
    }

    pub fn record(&mut self, outcome: Check) {
        match outcome {
            Ok(()) => self.passed += 1,
            Err(msg) => {
                self.failed += 1;
                self.first_failure.get_or_insert(msg);
            }
        }
    }

    pub fn merge(&mut self, other: CheckTally) {
        self.passed += other.passed;
        self.failed += other.failed;
        if self.first_failure.is_none() {
            self.first_failure = other.first_failure;
        }
    }
}

pub const SUITE_CHECKS: [&str; 10] = [
    "oracle_dp",
    "oracle_exhaustive",
    "jordan",
    "envelope",
    "crossings",
    "by_parts",
    "change_of_variables",
    "covariation_symmetry",
    "bracket",
    "exhaustive_small",
];

/// Every check on a single path at every level of `eps_list`.
pub fn run_all(p: &CadlagPath, eps_list: &[f64]) -> Vec<CheckTally> {
    let mut tallies: Vec<CheckTally> = SUITE_CHECKS.iter().map(|n| CheckTally::new(n)).collect();
    let values = p.values();
    let partner = p.map_values(|v| (1.7 * v).sin() + 0.3 * v).expect("finite image");
    for &eps in eps_list {
        if values.len() <= 200 {
            tallies[0].record(check_oracle_dp(values, eps));
        }
        if values.len() <= 12 {
            tallies[1].record(check_oracle_exhaustive(values, eps));
        }
        tallies[2].record(check_jordan(p, eps));
        tallies[3].record(check_envelope(p, eps));
        tallies[4].record(check_crossings(values, eps));
        tallies[7].record(check_covariation_symmetry(p, &partner, eps));
        tallies[8].record(check_bracket(p, eps));
    }
    tallies[5].record(check_by_parts(p, &partner));
    for f in [Preset::Cos, Preset::Polynomial(vec![0.5, -1.0, 0.25])] {
        tallies[6].record(check_change_of_variables(p, &f));
    }
    let head = &values[..values.len().min(12)];
    for &eps in eps_list {
        tallies[9].record(check_oracle_exhaustive(head, eps));
    }
    tallies
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_paths_are_reproducible() {
        assert_eq!(battery_path(5, 3, 50), battery_path(5, 3, 50));
        assert_ne!(battery_path(5, 3, 50), battery_path(5, 4, 50));
    }

    #[test]
    fn checks_flag_broken_inputs() {
        assert!(check_crossings(&[0.0, 1.0, 0.0, 1.0], 0.5).is_ok());
        let mut t = CheckTally::new("x");
        t.record(Err("boom".into()));
        t.record(Ok(()));
        assert_eq!((t.passed, t.failed), (1, 1));
        assert_eq!(t.first_failure.as_deref(), Some("boom"));
    }

    #[test]
    fn small_battery_passes() {
        for i in 0..50 {
            let p = battery_path(99, i, 40);
            for t in run_all(&p, &[0.05, 0.2, 1.0]) {
                assert_eq!(t.failed, 0, "{}: {:?}", t.name, t.first_failure);
            }
        }
    }
}
