//! Finite-variation envelopes of a path.
//!
//! [`backlash`] is the play operator: the follower starts at `x_0` and moves
//! only when the path pushes it out of the band `[x - h, x + h]`, i.e. it is
//! the discrete solution of the two-sided Skorohod problem keeping `x - y` in
//! `[-h, h]`. The follower rises only while `x - y = h` and falls only while
//! `x - y = -h`, which makes `∫ (x - y) dy = h · TV(y)` an exact identity.
//!
//! [`jordan_envelope`] is the other approximant, `x_0 + UTV - DTV` at level
//! `eps`, which stays within `eps` of the path.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::path::{check_grid, sup_distance, CadlagPath};
use crate::stieltjes::cadlag_point_sum;
use crate::variation::{
    total_variation_of_values, variation_curve, variation_triple, TruncationParam, VariationTriple,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeOrigin {
    Backlash,
    Jordan,
    Custom,
}

/// A finite-variation path `env` approximating `base` on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopePath {
    pub base: CadlagPath,
    pub env: CadlagPath,
    pub halfwidth: f64,
    /// Constant `K` with `|Δenv| <= K |Δbase|`, when known.
    pub jump_domination: Option<f64>,
    pub origin: EnvelopeOrigin,
}

impl EnvelopePath {
    /// Wraps a caller-supplied approximant. Identities that rely on the play
    /// operator are not guaranteed for such envelopes.
    pub fn custom(base: CadlagPath, env: CadlagPath, halfwidth: f64) -> Result<Self> {
        if !base.same_grid(&env) {
            return Err(crate::error::Error::GridMismatch);
        }
        Ok(Self { base, env, halfwidth, jump_domination: None, origin: EnvelopeOrigin::Custom })
    }

    pub fn total_variation(&self, upto: f64) -> Result<f64> {
        crate::variation::total_variation(&self.env, upto)
    }
}

/// Play-operator recursion `y_i = max(x_i - h, min(x_i + h, y_{i-1}))`, `y_0 = x_0`.
pub fn backlash_values(values: &[f64], halfwidth: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut y = match values.first() {
        Some(&x0) => x0,
        None => return out,
    };
    out.push(y);
    for &x in &values[1..] {
        y = (x - halfwidth).max((x + halfwidth).min(y));
        out.push(y);
    }
    out
}

pub fn backlash(p: &CadlagPath, halfwidth: f64) -> Result<EnvelopePath> {
    if !(halfwidth > 0.0) || !halfwidth.is_finite() {
        return Err(invalid(format!("halfwidth must be finite and > 0, got {halfwidth}")));
    }
    let env = p.with_values(backlash_values(p.values(), halfwidth))?;
    Ok(EnvelopePath {
        base: p.clone(),
        env,
        halfwidth,
        jump_domination: Some(1.0),
        origin: EnvelopeOrigin::Backlash,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeEnergy {
    /// `∫_{[0,upto]} (x - y) dy` with the post-jump integrand.
    pub energy: f64,
    /// `halfwidth * TV(y on [0, upto])`.
    pub halfwidth_tv: f64,
    /// The two agree exactly only for play-operator envelopes.
    pub identity_guaranteed: bool,
}

pub fn envelope_energy(e: &EnvelopePath, upto: f64) -> Result<EnvelopeEnergy> {
    let end = e.base.index_at(upto)? + 1;
    let gap: Vec<f64> = e.base.values()[..end].iter().zip(&e.env.values()[..end]).map(|(x, y)| x - y).collect();
    let yv = &e.env.values()[..end];
    Ok(EnvelopeEnergy {
        energy: cadlag_point_sum(&gap, yv, end),
        halfwidth_tv: e.halfwidth * total_variation_of_values(yv),
        identity_guaranteed: e.origin == EnvelopeOrigin::Backlash,
    })
}

/// `TTV(x, 2h) <= TV(backlash(x, h)) <= TTV(x, 2h) + 2h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sandwich {
    pub lower: f64,
    pub mid: f64,
    pub upper: f64,
}

impl Sandwich {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower <= self.mid + tol && self.mid <= self.upper + tol
    }
}

pub fn sandwich_check(p: &CadlagPath, halfwidth: f64, upto: f64) -> Result<Sandwich> {
    let e = backlash(p, halfwidth)?;
    let lower = variation_triple(p, TruncationParam::new(2.0 * halfwidth)?, upto)?.ttv;
    let mid = e.total_variation(upto)?;
    Ok(Sandwich { lower, mid, upper: lower + 2.0 * halfwidth })
}

/// `x_0 + UTV(eps) - DTV(eps)` on a grid, with the remainder `R = approx - x`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JordanEnvelope {
    pub eps: f64,
    pub grid: Vec<f64>,
    pub base: Vec<f64>,
    pub approx: Vec<f64>,
    pub remainder: Vec<f64>,
    pub triples: Vec<VariationTriple>,
}

impl JordanEnvelope {
    pub fn max_abs_remainder(&self) -> f64 {
        self.remainder.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    /// The approximant as an [`EnvelopePath`] on its grid (grid must start at 0).
    pub fn to_envelope_path(&self) -> Result<EnvelopePath> {
        let base = CadlagPath::new(self.grid.clone(), self.base.clone())?;
        let env = CadlagPath::new(self.grid.clone(), self.approx.clone())?;
        Ok(EnvelopePath { base, env, halfwidth: self.eps, jump_domination: None, origin: EnvelopeOrigin::Jordan })
    }
}

pub fn jordan_envelope(p: &CadlagPath, eps: TruncationParam, grid: &[f64]) -> Result<JordanEnvelope> {
    if !(eps.get() > 0.0) {
        return Err(invalid("jordan envelope needs eps > 0"));
    }
    check_grid(grid)?;
    let curve = variation_curve(p, eps, grid)?;
    let x0 = p.first_value();
    let base = grid.iter().map(|&t| p.value_at(t)).collect::<Result<Vec<_>>>()?;
    let approx: Vec<f64> = curve.triples.iter().map(|t| x0 + t.utv - t.dtv).collect();
    let remainder = approx.iter().zip(&base).map(|(a, b)| a - b).collect();
    Ok(JordanEnvelope { eps: eps.get(), grid: grid.to_vec(), base, approx, remainder, triples: curve.triples })
}

/// Structural checks on a play-operator envelope.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvelopeAudit {
    pub max_distance: f64,
    pub within_band: bool,
    pub jumps_dominated: bool,
    pub starts_at_base: bool,
    pub finite_variation: bool,
    pub carrier_exact: bool,
    pub energy_residual: f64,
    pub energy_identity: bool,
    pub jump_sum_dominated: bool,
    pub prefix_stable: bool,
}

impl EnvelopeAudit {
    pub fn all_pass(&self) -> bool {
        self.within_band
            && self.jumps_dominated
            && self.starts_at_base
            && self.finite_variation
            && self.carrier_exact
            && self.energy_identity
            && self.jump_sum_dominated
            && self.prefix_stable
    }
}

/// Runs every structural check on `backlash(p, halfwidth)`. `tol` is the
/// per-term rounding allowance; sums are allowed `tol * n`.
pub fn audit_backlash(p: &CadlagPath, halfwidth: f64, tol: f64) -> Result<EnvelopeAudit> {
    let e = backlash(p, halfwidth)?;
    let (x, y) = (p.values(), e.env.values());
    let n = x.len();
    let max_distance = sup_distance(&e.base, &e.env)?;
    let mut jumps_dominated = true;
    let mut carrier_exact = true;
    let mut jump_sum_dominated = true;
    for i in 1..n {
        let dx = x[i] - x[i - 1];
        let dy = y[i] - y[i - 1];
        if dy.abs() > dx.abs() + tol {
            jumps_dominated = false;
        }
        if dy != 0.0 {
            let target = halfwidth.copysign(dy);
            if ((x[i] - y[i]) - target).abs() > tol {
                carrier_exact = false;
            }
        }
        let term = ((dx - dy) * dy).abs();
        let bound = (2.0 * halfwidth * dx.abs()).min(2.0 * dx * dx);
        if term > bound + tol {
            jump_sum_dominated = false;
        }
    }
    let energy = envelope_energy(&e, p.horizon())?;
    let energy_residual = energy.energy - energy.halfwidth_tv;
    let tv = e.total_variation(p.horizon())?;
    let cut = n / 2 + 1;
    let prefix = backlash_values(&x[..cut.min(n)], halfwidth);
    Ok(EnvelopeAudit {
        max_distance,
        within_band: max_distance <= halfwidth + tol,
        jumps_dominated,
        starts_at_base: y[0] == x[0],
        finite_variation: tv.is_finite(),
        carrier_exact,
        energy_residual,
        energy_identity: energy_residual.abs() <= tol * n as f64,
        jump_sum_dominated,
        prefix_stable: prefix[..] == y[..prefix.len()],
    })
}
