//! Lebesgue–Stieltjes sums against piecewise-constant integrators.
//!
//! A sampled integrator `h` only moves at sample times, so `∫ g dh` over
//! `(0, t]` is the finite sum `Σ g(·) Δh(t_i)`. Two evaluation rules are kept
//! apart: the left-limit rule uses `g(t_i-)`, the càdlàg rule uses `g(t_i)`.
//! Their difference is `Σ Δg Δh`. Sums start at index 1, so no mass sits at 0.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::path::CadlagPath;
use crate::sum::CompensatedSum;

/// A `C^1` function with exact derivative and antiderivative.
pub trait IntegrandFunction: Send + Sync {
    fn value(&self, x: f64) -> f64;
    fn derivative(&self, x: f64) -> f64;
    fn antiderivative(&self, x: f64) -> f64;
    fn label(&self) -> String;
}

/// Built-in integrands.
#[derive(Debug, Clone, PartialEq)]
pub enum Preset {
    Constant(f64),
    /// Coefficients `a0 + a1 x + a2 x^2 + ...`.
    Polynomial(Vec<f64>),
    Cos,
    Sin,
    Exp,
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

impl IntegrandFunction for Preset {
    fn value(&self, x: f64) -> f64 {
        match self {
            Preset::Constant(c) => *c,
            Preset::Polynomial(a) => horner(a, x),
            Preset::Cos => x.cos(),
            Preset::Sin => x.sin(),
            Preset::Exp => x.exp(),
        }
    }

    fn derivative(&self, x: f64) -> f64 {
        match self {
            Preset::Constant(_) => 0.0,
            Preset::Polynomial(a) => {
                let d: Vec<f64> = a.iter().enumerate().skip(1).map(|(k, &c)| k as f64 * c).collect();
                horner(&d, x)
            }
            Preset::Cos => -x.sin(),
            Preset::Sin => x.cos(),
            Preset::Exp => x.exp(),
        }
    }

    fn antiderivative(&self, x: f64) -> f64 {
        match self {
            Preset::Constant(c) => c * x,
            Preset::Polynomial(a) => {
                let mut big = vec![0.0];
                big.extend(a.iter().enumerate().map(|(k, &c)| c / (k as f64 + 1.0)));
                horner(&big, x)
            }
            Preset::Cos => x.sin(),
            Preset::Sin => -x.cos(),
            Preset::Exp => x.exp(),
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preset::Constant(c) => write!(f, "const:{c}"),
            Preset::Polynomial(a) => {
                let parts: Vec<String> = a.iter().map(|c| c.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
            Preset::Cos => f.write_str("cos"),
            Preset::Sin => f.write_str("sin"),
            Preset::Exp => f.write_str("exp"),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// `cos`, `sin`, `exp`, `x`, `x2`, `const:<c>` or `poly:<a0>,<a1>,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |v: &str| v.trim().parse::<f64>().map_err(|_| invalid(format!("bad coefficient `{v}`")));
        match s {
            "cos" => Ok(Preset::Cos),
            "sin" => Ok(Preset::Sin),
            "exp" => Ok(Preset::Exp),
            "x" | "identity" => Ok(Preset::Polynomial(vec![0.0, 1.0])),
            "x2" | "square" => Ok(Preset::Polynomial(vec![0.0, 0.0, 1.0])),
            _ => {
                if let Some(c) = s.strip_prefix("const:") {
                    Ok(Preset::Constant(num(c)?))
                } else if let Some(rest) = s.strip_prefix("poly:") {
                    Ok(Preset::Polynomial(rest.split(',').map(num).collect::<Result<_>>()?))
                } else {
                    Err(invalid(format!("unknown integrand `{s}`")))
                }
            }
        }
    }
}

/// Integrand assembled from closures.
pub struct FnIntegrand<F, D, A> {
    pub f: F,
    pub fprime: D,
    pub antiderivative: A,
    pub label: String,
}

impl<F, D, A> IntegrandFunction for FnIntegrand<F, D, A>
where
    F: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
    A: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, x: f64) -> f64 {
        (self.f)(x)
    }
    fn derivative(&self, x: f64) -> f64 {
        (self.fprime)(x)
    }
    fn antiderivative(&self, x: f64) -> f64 {
        (self.antiderivative)(x)
    }
    fn label(&self) -> String {
        self.label.clone()
    }
}

/// `Σ_{1 <= i < end} g[i-1] (h[i] - h[i-1])`.
pub fn left_point_sum(g: &[f64], h: &[f64], end: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for i in 1..end {
        acc.add(g[i - 1] * (h[i] - h[i - 1]));
    }
    acc.value()
}

/// `Σ_{1 <= i < end} g[i] (h[i] - h[i-1])`.
pub fn cadlag_point_sum(g: &[f64], h: &[f64], end: usize) -> f64 {
    let mut acc = CompensatedSum::new();
    for i in 1..end {
        acc.add(g[i] * (h[i] - h[i - 1]));
    }
    acc.value()
}

fn window_end(g: &CadlagPath, h: &CadlagPath, t: f64) -> Result<usize> {
    if !g.same_grid(h) {
        return Err(Error::GridMismatch);
    }
    if t.is_nan() || t < 0.0 {
        return Err(Error::Domain { t, reason: "negative time" });
    }
    Ok(h.prefix_len(t))
}

/// `∫_{(0,t]} g(s-) dh(s)`.
pub fn ls_integral_left(g: &CadlagPath, h: &CadlagPath, t: f64) -> Result<f64> {
    let end = window_end(g, h, t)?;
    Ok(left_point_sum(g.values(), h.values(), end))
}

/// `∫_{(0,t]} g(s) dh(s)` with the post-jump integrand.
pub fn ls_integral_cadlag(g: &CadlagPath, h: &CadlagPath, t: f64) -> Result<f64> {
    let end = window_end(g, h, t)?;
    Ok(cadlag_point_sum(g.values(), h.values(), end))
}

/// `Σ_{0<s<=t} {F(x_s) - F(x_{s-}) - f(x_{s-}) Δx_s}` over the path's jumps.
pub fn jump_compensator(p: &CadlagPath, func: &dyn IntegrandFunction, t: f64) -> Result<f64> {
    let jumps = p.jumps(t)?;
    let v = p.values();
    let mut acc = CompensatedSum::new();
    for j in jumps.jumps.iter().filter(|j| j.index > 0) {
        let (prev, cur) = (v[j.index - 1], v[j.index]);
        acc.add(func.antiderivative(cur) - func.antiderivative(prev) - func.value(prev) * j.delta);
    }
    Ok(acc.value())
}

/// Residual of `x_t h_t - x_0 h_0 = ∫x- dh + ∫h- dx + Σ Δx Δh`.
pub fn integration_by_parts_check(x: &CadlagPath, h: &CadlagPath, t: f64) -> Result<f64> {
    let end = window_end(x, h, t)?;
    let (xv, hv) = (x.values(), h.values());
    let last = end.max(1) - 1;
    let lhs = xv[last] * hv[last] - xv[0] * hv[0];
    let mut cross = CompensatedSum::new();
    for i in 1..end {
        cross.add((xv[i] - xv[i - 1]) * (hv[i] - hv[i - 1]));
    }
    let rhs = left_point_sum(xv, hv, end) + left_point_sum(hv, xv, end) + cross.value();
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path(values: &[f64]) -> CadlagPath {
        CadlagPath::from_values(values.to_vec()).unwrap()
    }

    #[test]
    fn left_rule_example() {
        let g = path(&[0.0, 1.0, 3.0]);
        let h = path(&[0.0, 2.0, 1.0]);
        assert_eq!(ls_integral_left(&g, &h, 2.0).unwrap(), -1.0);
        assert_eq!(ls_integral_left(&g, &path(&[4.0; 3]), 2.0).unwrap(), 0.0);
        let ones = path(&[1.0; 3]);
        assert_eq!(ls_integral_left(&ones, &h, 2.0).unwrap(), 1.0);
        assert_eq!(ls_integral_left(&ones, &h, 1.5).unwrap(), 2.0);
    }

    #[test]
    fn cadlag_rule_examples() {
        let x = path(&[0.0, 1.0, 0.5, 2.0]);
        let y = path(&[0.0, 0.6, 0.6, 1.6]);
        let gap = x.zip_with(&y, |a, b| a - b).unwrap();
        assert!((ls_integral_cadlag(&gap, &y, 3.0).unwrap() - 0.64).abs() < 1e-12);
        let c = path(&[2.5; 4]);
        assert!((ls_integral_cadlag(&c, &y, 3.0).unwrap() - 2.5 * 1.6).abs() < 1e-12);
        let diff = ls_integral_cadlag(&x, &y, 3.0).unwrap() - ls_integral_left(&x, &y, 3.0).unwrap();
        let cross: f64 = x.increments().zip(y.increments()).map(|(a, b)| a * b).sum();
        assert!((diff - cross).abs() < 1e-12);
    }

    #[test]
    fn grid_mismatch_is_an_error() {
        let g = path(&[0.0, 1.0]);
        let h = CadlagPath::new(vec![0.0, 0.5], vec![0.0, 1.0]).unwrap();
        assert!(matches!(ls_integral_left(&g, &h, 1.0), Err(Error::GridMismatch)));
    }

    #[test]
    fn compensator_examples() {
        let cont = path(&[0.0, 0.1, 0.3]).with_designated_jumps(vec![]).unwrap();
        assert_eq!(jump_compensator(&cont, &Preset::Cos, 2.0).unwrap(), 0.0);
        let one_jump = path(&[0.7, 0.7, 2.2]);
        let half_square = jump_compensator(&one_jump, &Preset::Polynomial(vec![0.0, 1.0]), 2.0).unwrap();
        assert!((half_square - 0.5 * 1.5f64.powi(2)).abs() < 1e-12);
        assert!(jump_compensator(&one_jump, &Preset::Constant(3.0), 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn presets_parse_and_differentiate() {
        let p: Preset = "poly:1,2,3".parse().unwrap();
        assert_eq!(p.value(2.0), 17.0);
        assert_eq!(p.derivative(2.0), 14.0);
        assert_eq!(p.antiderivative(2.0), 2.0 + 4.0 + 8.0);
        assert_eq!("const:2".parse::<Preset>().unwrap(), Preset::Constant(2.0));
        assert!("tan".parse::<Preset>().is_err());
        for f in [Preset::Cos, Preset::Sin, Preset::Exp, p] {
            let (x, h) = (0.3, 1e-6);
            let fd = (f.antiderivative(x + h) - f.antiderivative(x - h)) / (2.0 * h);
            assert!((fd - f.value(x)).abs() < 1e-8, "{f}");
            let fd = (f.value(x + h) - f.value(x - h)) / (2.0 * h);
            assert!((fd - f.derivative(x)).abs() < 1e-8, "{f}");
        }
    }

    #[test]
    fn parts_special_cases() {
        let x = path(&[0.3, -1.0, 2.0, 0.5]);
        assert!(integration_by_parts_check(&x, &path(&[1.5; 4]), 3.0).unwrap().abs() < 1e-14);
        assert!(integration_by_parts_check(&x, &x, 3.0).unwrap().abs() < 1e-14);
    }

    proptest! {
        #[test]
        fn integration_by_parts_vanishes(pair in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 100)) {
            let (a, b): (Vec<f64>, Vec<f64>) = pair.into_iter().unzip();
            let x = path(&a);
            let h = path(&b);
            prop_assert!(integration_by_parts_check(&x, &h, 99.0).unwrap().abs() <= 1e-10);
        }

        #[test]
        fn rules_are_linear(pair in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0), 2..50), k in -3.0f64..3.0) {
            let n = pair.len();
            let g1 = path(&pair.iter().map(|p| p.0).collect::<Vec<_>>());
            let g2 = path(&pair.iter().map(|p| p.1).collect::<Vec<_>>());
            let h = path(&pair.iter().map(|p| p.2).collect::<Vec<_>>());
            let comb = g1.zip_with(&g2, |a, b| a + k * b).unwrap();
            let t = n as f64;
            for rule in [ls_integral_left, ls_integral_cadlag] {
                let lhs = rule(&comb, &h, t).unwrap();
                let rhs = rule(&g1, &h, t).unwrap() + k * rule(&g2, &h, t).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-9);
                // linear in the integrator as well
                let lhs = rule(&h, &comb, t).unwrap();
                let rhs = rule(&h, &g1, t).unwrap() + k * rule(&h, &g2, t).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-9);
            }
        }
    }
}
