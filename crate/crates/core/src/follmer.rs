//! Pathwise quadratic variation and the integrals built on finite-variation
//! approximants.
//!
//! For an approximant `y = x^ε` the bracket at level `ε` is
//! `<x>^ε_t = 2 ∫_{(0,t]} (x_s - y_s) dy_s`. Three integrals of `f` are formed:
//!
//! * `I_X   = ∫ f(x_{s-}) dy_s`
//! * `I_X'  = f(y_t) x_t - f(y_0) x_0 - ∫ x_{s-} df(y_s) - Σ Δx Δf(y)`
//! * `I_X'' = ∫ f(y_{s-}) dy_s`
//!
//! and compared with `F(x_t) - F(x_0)` through the bracket term
//! `½ ∫ f'(x_{s-}) d<x>^ε_s` and the jump compensator.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::path::{check_grid, CadlagPath};
use crate::skorohod::backlash_values;
use crate::stieltjes::{jump_compensator, left_point_sum, IntegrandFunction};
use crate::sum::CompensatedSum;
use crate::variation::{triple_of_values, variation_curve, TruncationParam};

/// A rule producing a finite-variation approximant `x^ε` of a path.
pub trait ApproximationFamily: Send + Sync {
    fn approximate(&self, p: &CadlagPath, eps: f64) -> Result<CadlagPath>;
    fn name(&self) -> &'static str;
    /// Whether `x^ε` is the play operator output with half-width `ε`.
    fn is_backlash(&self) -> bool {
        false
    }
}

/// `x^ε = backlash(x, ε)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct BacklashFamily;

/// `x^ε = x`, meaningful for paths of finite variation.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentityFamily;

impl ApproximationFamily for BacklashFamily {
    fn approximate(&self, p: &CadlagPath, eps: f64) -> Result<CadlagPath> {
        check_eps(eps)?;
        p.with_values(backlash_values(p.values(), eps))
    }
    fn name(&self) -> &'static str {
        "backlash"
    }
    fn is_backlash(&self) -> bool {
        true
    }
}

impl ApproximationFamily for IdentityFamily {
    fn approximate(&self, p: &CadlagPath, _eps: f64) -> Result<CadlagPath> {
        Ok(p.clone())
    }
    fn name(&self) -> &'static str {
        "identity"
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("eps must be finite and > 0, got {eps}")))
    }
}

fn check_time(t: f64) -> Result<()> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain { t, reason: "negative time" });
    }
    Ok(())
}

/// Running `2 Σ_{k<=i} (x_k - y_k)(y_k - y_{k-1})` at every sample.
pub fn bracket_on_samples(x: &[f64], y: &[f64]) -> Vec<f64> {
    let mut acc = CompensatedSum::new();
    let mut out = Vec::with_capacity(x.len());
    if !x.is_empty() {
        out.push(0.0);
    }
    for i in 1..x.len() {
        acc.add(2.0 * (x[i] - y[i]) * (y[i] - y[i - 1]));
        out.push(acc.value());
    }
    out
}

/// Warning threshold `5 * median |Δx|` below which the sampled path no longer
/// resolves the continuum bracket.
pub fn eps_floor(p: &CadlagPath) -> f64 {
    let mut steps: Vec<f64> = p.increments().map(f64::abs).collect();
    if steps.is_empty() {
        return 0.0;
    }
    let mid = steps.len() / 2;
    let (_, m, _) = steps.select_nth_unstable_by(mid, f64::total_cmp);
    5.0 * *m
}

/// `0 <= 2 energy - 2ε TTV(x, 2ε) <= 4ε²`, the sandwich inequality rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyCrossCheck {
    pub two_energy: f64,
    pub ttv_term: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BracketLevel {
    pub eps: f64,
    pub values: Vec<f64>,
    pub cross_check: Option<EnergyCrossCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticVariationCurve {
    pub grid: Vec<f64>,
    /// Headline curve, taken at the smallest level.
    pub values: Vec<f64>,
    pub eps: f64,
    pub family: String,
    pub levels: Vec<BracketLevel>,
    /// Sup-distance over the grid between consecutive levels.
    pub cauchy: Vec<f64>,
    pub eps_floor: f64,
    pub warnings: Vec<String>,
}

impl QuadraticVariationCurve {
    pub fn last(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.levels.iter().all(|l| l.values.windows(2).all(|w| w[1] >= w[0]))
    }
}

fn grid_samples(p: &CadlagPath, curve: &[f64], grid: &[f64]) -> Vec<f64> {
    grid.iter()
        .map(|&g| match p.prefix_len(g) {
            0 => 0.0,
            k => curve[k - 1],
        })
        .collect()
}

fn check_eps_list(eps_list: &[f64]) -> Result<()> {
    if eps_list.is_empty() {
        return Err(invalid("eps list is empty"));
    }
    for &e in eps_list {
        check_eps(e)?;
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(invalid("eps list must be strictly decreasing"));
    }
    Ok(())
}

/// Bracket `<x>` on a grid with the play-operator family.
pub fn qv_bracket(p: &CadlagPath, eps_list: &[f64], grid: &[f64]) -> Result<QuadraticVariationCurve> {
    qv_bracket_with(p, &BacklashFamily, eps_list, grid)
}

pub fn qv_bracket_with(
    p: &CadlagPath,
    family: &dyn ApproximationFamily,
    eps_list: &[f64],
    grid: &[f64],
) -> Result<QuadraticVariationCurve> {
    check_eps_list(eps_list)?;
    check_grid(grid)?;
    if let Some(&g) = grid.first() {
        check_time(g)?;
    }
    let floor = eps_floor(p);
    let mut warnings = Vec::new();
    let mut levels = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if family.is_backlash() && eps < floor {
            warnings.push(format!("eps {eps} is below the resolution floor {floor:.3e}"));
        }
        let y = family.approximate(p, eps)?;
        let curve = bracket_on_samples(p.values(), y.values());
        let cross_check = if family.is_backlash() {
            let two_energy = *curve.last().expect("paths are non-empty");
            let ttv_term = 2.0 * eps * triple_of_values(p.values(), TruncationParam::new(2.0 * eps)?).ttv;
            let bound = 4.0 * eps * eps;
            let tol = 1e-12 * p.len() as f64 * (1.0 + two_energy.abs());
            let diff = two_energy - ttv_term;
            Some(EnergyCrossCheck { two_energy, ttv_term, bound, holds: diff >= -tol && diff <= bound + tol })
        } else {
            None
        };
        levels.push(BracketLevel { eps, values: grid_samples(p, &curve, grid), cross_check });
    }
    let cauchy = levels
        .windows(2)
        .map(|w| w[0].values.iter().zip(&w[1].values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
        .collect();
    let head = levels.last().expect("eps list is non-empty");
    Ok(QuadraticVariationCurve {
        grid: grid.to_vec(),
        values: head.values.clone(),
        eps: head.eps,
        family: family.name().to_string(),
        cauchy,
        levels,
        eps_floor: floor,
        warnings,
    })
}

/// A path together with its approximant and fixed-level bracket.
#[derive(Debug, Clone)]
pub struct Approximation {
    pub eps: f64,
    pub family: &'static str,
    pub base: CadlagPath,
    pub approx: CadlagPath,
    /// `<x>^ε` at every sample time.
    pub bracket: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralReport {
    pub eps: f64,
    pub t: f64,
    pub family: String,
    pub integrand: String,
    #[serde(rename = "I_X")]
    pub i_x: f64,
    #[serde(rename = "I_Xprime")]
    pub i_x_prime: f64,
    #[serde(rename = "I_Xsecond")]
    pub i_x_second: f64,
    pub bracket_term: f64,
    pub jump_term: f64,
    /// `F(x_t) - F(x_0)`.
    pub increment: f64,
    pub residual_thm2: f64,
    pub residual_prop1: f64,
    pub residual_relation: f64,
    /// `I_X'' - I_X' - bracket_term`.
    pub midpoint_gap_prime: f64,
    /// `I_X - I_X'' - bracket_term`.
    pub midpoint_gap_x: f64,
}

impl Approximation {
    pub fn new(p: &CadlagPath, family: &dyn ApproximationFamily, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        let approx = family.approximate(p, eps)?;
        if !approx.same_grid(p) {
            return Err(Error::GridMismatch);
        }
        let bracket = bracket_on_samples(p.values(), approx.values());
        Ok(Self { eps, family: family.name(), base: p.clone(), approx, bracket })
    }

    pub fn backlash(p: &CadlagPath, eps: f64) -> Result<Self> {
        Self::new(p, &BacklashFamily, eps)
    }

    fn end(&self, t: f64) -> Result<usize> {
        check_time(t)?;
        Ok(self.base.prefix_len(t))
    }

    pub fn bracket_at(&self, t: f64) -> Result<f64> {
        Ok(self.bracket[self.end(t)? - 1])
    }

    /// `∫_{(0,t]} f(x_{s-}) dx^ε_s`.
    pub fn integral_x(&self, f: &dyn IntegrandFunction, t: f64) -> Result<f64> {
        let end = self.end(t)?;
        let fx: Vec<f64> = self.base.values()[..end].iter().map(|&v| f.value(v)).collect();
        Ok(left_point_sum(&fx, self.approx.values(), end))
    }

    /// Integration-by-parts definition of `∫_{(0,t]} f(x^ε_{s-}) dx_s`.
    pub fn integral_x_prime(&self, f: &dyn IntegrandFunction, t: f64) -> Result<f64> {
        let end = self.end(t)?;
        let (x, y) = (self.base.values(), self.approx.values());
        let fy: Vec<f64> = y[..end].iter().map(|&v| f.value(v)).collect();
        let last = end - 1;
        let mut cross = CompensatedSum::new();
        for i in 1..end {
            cross.add((x[i] - x[i - 1]) * (fy[i] - fy[i - 1]));
        }
        Ok(fy[last] * x[last] - fy[0] * x[0] - left_point_sum(x, &fy, end) - cross.value())
    }

    /// `∫_{(0,t]} f(x^ε_{s-}) dx^ε_s`.
    pub fn integral_x_second(&self, f: &dyn IntegrandFunction, t: f64) -> Result<f64> {
        let end = self.end(t)?;
        let fy: Vec<f64> = self.approx.values()[..end].iter().map(|&v| f.value(v)).collect();
        Ok(left_point_sum(&fy, self.approx.values(), end))
    }

    /// `½ ∫_{(0,t]} f'(x_{s-}) d<x>^ε_s`.
    pub fn bracket_term(&self, f: &dyn IntegrandFunction, t: f64) -> Result<f64> {
        let end = self.end(t)?;
        let fp: Vec<f64> = self.base.values()[..end].iter().map(|&v| f.derivative(v)).collect();
        Ok(0.5 * left_point_sum(&fp, &self.bracket, end))
    }

    pub fn report(&self, f: &dyn IntegrandFunction, t: f64) -> Result<IntegralReport> {
        let end = self.end(t)?;
        let x = self.base.values();
        let i_x = self.integral_x(f, t)?;
        let i_x_prime = self.integral_x_prime(f, t)?;
        let i_x_second = self.integral_x_second(f, t)?;
        let bracket_term = self.bracket_term(f, t)?;
        let jump_term = jump_compensator(&self.base, f, t)?;
        let increment = f.antiderivative(x[end - 1]) - f.antiderivative(x[0]);
        Ok(IntegralReport {
            eps: self.eps,
            t,
            family: self.family.to_string(),
            integrand: f.label(),
            i_x,
            i_x_prime,
            i_x_second,
            bracket_term,
            jump_term,
            increment,
            residual_thm2: increment - (i_x - bracket_term + jump_term),
            residual_prop1: increment - (i_x_prime + bracket_term + jump_term),
            residual_relation: i_x_prime - (i_x - 2.0 * bracket_term),
            midpoint_gap_prime: i_x_second - i_x_prime - bracket_term,
            midpoint_gap_x: i_x - i_x_second - bracket_term,
        })
    }
}

pub fn integral_x(p: &CadlagPath, f: &dyn IntegrandFunction, eps: f64, t: f64) -> Result<f64> {
    Approximation::backlash(p, eps)?.integral_x(f, t)
}

pub fn integral_x_prime(p: &CadlagPath, f: &dyn IntegrandFunction, eps: f64, t: f64) -> Result<f64> {
    Approximation::backlash(p, eps)?.integral_x_prime(f, t)
}

pub fn integral_x_second(p: &CadlagPath, f: &dyn IntegrandFunction, eps: f64, t: f64) -> Result<f64> {
    Approximation::backlash(p, eps)?.integral_x_second(f, t)
}

pub fn identity_report(p: &CadlagPath, f: &dyn IntegrandFunction, eps: f64, t: f64) -> Result<IntegralReport> {
    Approximation::backlash(p, eps)?.report(f, t)
}

pub fn identity_report_with(
    p: &CadlagPath,
    family: &dyn ApproximationFamily,
    f: &dyn IntegrandFunction,
    eps: f64,
    t: f64,
) -> Result<IntegralReport> {
    Approximation::new(p, family, eps)?.report(f, t)
}

/// `ε (TTV(x + y, ε) - TTV(x - y, ε)) / 4` on a grid.
pub fn covariation(px: &CadlagPath, py: &CadlagPath, eps: f64, grid: &[f64]) -> Result<QuadraticVariationCurve> {
    if !px.same_grid(py) {
        return Err(Error::GridMismatch);
    }
    let c = TruncationParam::new(eps)?;
    check_eps(eps)?;
    if let Some(&g) = grid.first() {
        check_time(g)?;
    }
    let sum = variation_curve(&px.zip_with(py, |a, b| a + b)?, c, grid)?;
    let diff = variation_curve(&px.zip_with(py, |a, b| a - b)?, c, grid)?;
    let values: Vec<f64> =
        sum.triples.iter().zip(&diff.triples).map(|(s, d)| eps * (s.ttv - d.ttv) / 4.0).collect();
    Ok(QuadraticVariationCurve {
        grid: grid.to_vec(),
        values: values.clone(),
        eps,
        family: "polarization".to_string(),
        levels: vec![BracketLevel { eps, values, cross_check: None }],
        cauchy: Vec::new(),
        eps_floor: eps_floor(px).max(eps_floor(py)),
        warnings: Vec::new(),
    })
}

/// `Σ_{0<s<=t} (Δx_s)²` over the path's jumps.
pub fn realized_jump_square_sum(p: &CadlagPath, t: f64) -> Result<f64> {
    Ok(p.jumps(t)?.sum_squares)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::{generate, random_test_path, SimConfig};
    use crate::stieltjes::Preset;
    use crate::variation::variation_triple;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn path(values: &[f64]) -> CadlagPath {
        CadlagPath::from_values(values.to_vec()).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * (1.0 + b.abs())
    }

    #[test]
    fn bracket_example() {
        let p = path(&[0.0, 1.0, 0.5, 2.0]);
        let q = qv_bracket(&p, &[0.4], &[0.0, 1.0, 2.0, 3.0]).unwrap();
        assert!(close(q.last(), 1.28));
        assert_eq!(q.values[0], 0.0);
        assert!(q.levels[0].cross_check.unwrap().holds);
        let id = qv_bracket_with(&p, &IdentityFamily, &[0.4, 0.1], &[0.0, 3.0]).unwrap();
        assert_eq!(id.values, vec![0.0, 0.0]);
    }

    #[test]
    fn bracket_rejects_bad_eps_lists() {
        let p = path(&[0.0, 1.0]);
        assert!(qv_bracket(&p, &[], &[1.0]).is_err());
        assert!(qv_bracket(&p, &[0.1, 0.2], &[1.0]).is_err());
        assert!(qv_bracket(&p, &[0.1, -0.2], &[1.0]).is_err());
    }

    #[test]
    fn floor_warning_is_not_fatal() {
        let p = generate(&SimConfig::brownian(1000, 1)).unwrap();
        let q = qv_bracket(&p, &[0.5, 0.001], &[1.0]).unwrap();
        assert_eq!(q.warnings.len(), 1);
    }

    #[test]
    fn integral_examples() {
        let p = path(&[0.0, 1.0, 0.5, 2.0]);
        let x = Preset::Polynomial(vec![0.0, 1.0]);
        assert!(close(integral_x(&p, &x, 0.4, 3.0).unwrap(), 0.5));
        let one = Preset::Constant(1.0);
        assert!(close(integral_x(&p, &one, 0.4, 3.0).unwrap(), 1.6));
        assert!(close(integral_x_second(&p, &one, 0.4, 3.0).unwrap(), 1.6));
        let c = Preset::Constant(2.5);
        assert!(close(integral_x_prime(&p, &c, 0.4, 3.0).unwrap(), 5.0));
        let flat = path(&[1.5; 5]);
        for f in [Preset::Cos, Preset::Exp, x.clone()] {
            assert_eq!(integral_x(&flat, &f, 0.1, 4.0).unwrap(), 0.0);
            assert_eq!(integral_x_prime(&flat, &f, 0.1, 4.0).unwrap(), 0.0);
            assert_eq!(integral_x_second(&flat, &f, 0.1, 4.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn constant_integrand_residuals() {
        let p = path(&[0.0, 1.0, 0.5, 2.0]);
        let c = Preset::Constant(3.0);
        let r = identity_report(&p, &c, 0.4, 3.0).unwrap();
        assert_eq!(r.bracket_term, 0.0);
        assert!(r.residual_prop1.abs() < 1e-12);
        // With the play operator the end point lags by x_t - y_t.
        assert!((r.residual_thm2 - 3.0 * 0.4).abs() < 1e-12);
        let r = identity_report_with(&p, &IdentityFamily, &c, 0.4, 3.0).unwrap();
        assert!(r.residual_thm2.abs() < 1e-12);
        assert!(r.residual_prop1.abs() < 1e-12);
        assert!(r.residual_relation.abs() < 1e-12);
    }

    #[test]
    fn covariation_examples() {
        let p = path(&[0.0, 1.0, -0.5, 2.0, 1.0]);
        let zero = path(&[0.0; 5]);
        let grid = [0.0, 1.0, 2.0, 3.0, 4.0];
        let c = covariation(&p, &zero, 0.3, &grid).unwrap();
        assert!(c.values.iter().all(|&v| v == 0.0));
        let c = covariation(&p, &p, 0.3, &grid).unwrap();
        let two = p.map_values(|v| 2.0 * v).unwrap();
        for (&g, &v) in grid.iter().zip(&c.values) {
            let t = variation_triple(&two, TruncationParam::new(0.3).unwrap(), g).unwrap().ttv;
            assert!(close(v, 0.25 * 0.3 * t));
        }
        assert!(covariation(&p, &path(&[0.0; 4]), 0.3, &grid).is_err());
    }

    #[test]
    fn jump_square_sums() {
        assert_eq!(realized_jump_square_sum(&CadlagPath::new(vec![0.0, 1.0], vec![0.0, 3.0]).unwrap(), 1.0).unwrap(), 9.0);
        let cp = CadlagPath::new(vec![0.0, 0.2, 0.5, 0.7, 1.0], vec![0.0, 0.0, 1.0, -1.0, -1.0])
            .unwrap()
            .with_designated_jumps(vec![2, 3])
            .unwrap();
        assert_eq!(realized_jump_square_sum(&cp, 1.0).unwrap(), 5.0);
        let bm = generate(&SimConfig::brownian(100, 3)).unwrap();
        assert_eq!(realized_jump_square_sum(&bm, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn brownian_bracket_near_time() {
        let p = generate(&SimConfig::brownian(1 << 16, 8)).unwrap();
        let q = qv_bracket(&p, &[0.2, 0.1, 0.05], &[0.25, 0.5, 1.0]).unwrap();
        assert!(q.warnings.is_empty());
        for (&t, &v) in q.grid.iter().zip(&q.values) {
            assert!((v - t).abs() < 0.25, "t={t}: {v}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn bracket_structure(seed in any::<u64>(), eps in 0.01f64..2.0) {
            let p = random_test_path(&mut ChaCha8Rng::seed_from_u64(seed), 80);
            let grid: Vec<f64> = p.times().to_vec();
            let q = qv_bracket(&p, &[2.0 * eps, eps], &grid).unwrap();
            prop_assert!(q.is_non_decreasing());
            for l in &q.levels {
                prop_assert!(l.cross_check.unwrap().holds);
                // Increments of the fixed-level bracket are bounded by the move of x.
                for i in 1..p.len() {
                    let dx = (p.values()[i] - p.values()[i - 1]).abs();
                    let step = l.values[i] - l.values[i - 1];
                    prop_assert!(step <= 2.0 * l.eps * (dx + 2.0 * l.eps) + 1e-12);
                }
            }
        }

        #[test]
        fn boundedness_condition(seed in any::<u64>()) {
            let p = random_test_path(&mut ChaCha8Rng::seed_from_u64(seed), 80);
            let ladder = [0.4, 0.2, 0.1, 0.05];
            let (mut lhs, mut rhs, mut slack) = (0.0f64, 0.0f64, 0.0f64);
            for &e in &ladder {
                let y = backlash_values(p.values(), e);
                lhs = lhs.max(e * crate::variation::total_variation_of_values(&y));
                rhs = rhs.max(2.0 * e * triple_of_values(p.values(), TruncationParam::new(2.0 * e).unwrap()).ttv);
                slack = slack.max(2.0 * e * e);
            }
            prop_assert!(lhs <= 2.0 * rhs + slack + 1e-12);
        }

        #[test]
        fn classical_change_of_variables(seed in any::<u64>(), which in 0usize..4) {
            let p = random_test_path(&mut ChaCha8Rng::seed_from_u64(seed), 120);
            let f = [Preset::Cos, Preset::Sin, Preset::Polynomial(vec![0.5, -1.0, 0.25]), Preset::Exp][which].clone();
            let r = identity_report_with(&p, &IdentityFamily, &f, 0.1, p.horizon()).unwrap();
            let scale = 1.0 + p.values().iter().map(|&v| f.antiderivative(v).abs()).fold(0.0, f64::max);
            prop_assert!(r.residual_thm2.abs() <= 1e-10 * scale, "{}", r.residual_thm2);
            prop_assert_eq!(r.bracket_term, 0.0);
        }

        #[test]
        fn prime_integral_is_left_point_sum(seed in any::<u64>(), eps in 0.01f64..1.0) {
            let p = random_test_path(&mut ChaCha8Rng::seed_from_u64(seed), 120);
            let a = Approximation::backlash(&p, eps).unwrap();
            let f = Preset::Sin;
            let fy: Vec<f64> = a.approx.values().iter().map(|&v| f.value(v)).collect();
            let direct = left_point_sum(&fy, p.values(), p.len());
            prop_assert!((a.integral_x_prime(&f, p.horizon()).unwrap() - direct).abs() <= 1e-10);
        }

        #[test]
        fn covariation_symmetric(s1 in any::<u64>(), eps in 0.01f64..1.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(s1);
            let x = random_test_path(&mut rng, 60);
            let y = x.map_values(|v| (3.0 * v).sin()).unwrap();
            let grid = x.times().to_vec();
            prop_assert_eq!(covariation(&x, &y, eps, &grid).unwrap().values, covariation(&y, &x, eps, &grid).unwrap().values);
        }
    }
}
