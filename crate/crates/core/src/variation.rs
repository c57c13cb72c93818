//! Truncated variation and its upward/downward parts.
//!
//! For a truncation level `c >= 0` the truncated variation is the supremum,
//! over all increasing selections of sample times, of `Σ max(|Δ| - c, 0)`;
//! the upward (downward) variant keeps only rises (falls). The fast path
//! below runs in one left-to-right pass: it follows `x` with a lazy tracker
//! kept within `c/2` of the path, whose start is left free until the path
//! first leaves a band of width `c`. The tracker's rises and falls are the
//! upward and downward truncated variations of every prefix.
//!
//! [`crate::oracle`] holds the quadratic dynamic program and the exhaustive
//! enumeration used to cross-check this sweep.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::path::{check_grid, CadlagPath};
use crate::sum::{csum, CompensatedSum};

/// Truncation parameter `c >= 0`, in the units of the path values.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct TruncationParam(f64);

impl TruncationParam {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(invalid(format!("truncation parameter must be finite and >= 0, got {eps}")));
        }
        Ok(Self(eps))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for TruncationParam {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TruncationParam> for f64 {
    fn from(p: TruncationParam) -> f64 {
        p.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VariationTriple {
    pub ttv: f64,
    pub utv: f64,
    pub dtv: f64,
}

impl VariationTriple {
    pub fn scaled(self, k: f64) -> Self {
        Self { ttv: k * self.ttv, utv: k * self.utv, dtv: k * self.dtv }
    }

    /// Componentwise `self >= other - tol`.
    pub fn dominates(&self, other: &Self, tol: f64) -> bool {
        self.ttv >= other.ttv - tol && self.utv >= other.utv - tol && self.dtv >= other.dtv - tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.ttv - other.ttv).abs().max((self.utv - other.utv).abs()).max((self.dtv - other.dtv).abs())
    }
}

/// Running truncated variations on an evaluation grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationProcess {
    pub eps: f64,
    pub grid: Vec<f64>,
    pub triples: Vec<VariationTriple>,
}

#[derive(Debug, Clone, Copy)]
enum TrackerState {
    Empty,
    /// Start not yet pinned: every level in `[lo, hi]` is still within
    /// `c/2` of all samples seen so far.
    Free { lo: f64, hi: f64 },
    Pinned(f64),
}

/// One-pass accumulator for upward and downward truncated variation.
#[derive(Debug, Clone)]
pub struct TruncatedVariationSweep {
    half: f64,
    state: TrackerState,
    up: CompensatedSum,
    down: CompensatedSum,
}

impl TruncatedVariationSweep {
    pub fn new(eps: TruncationParam) -> Self {
        Self { half: 0.5 * eps.get(), state: TrackerState::Empty, up: CompensatedSum::new(), down: CompensatedSum::new() }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        let h = self.half;
        self.state = match self.state {
            TrackerState::Empty => TrackerState::Free { lo: x - h, hi: x + h },
            TrackerState::Free { lo, hi } => {
                let (nlo, nhi) = (lo.max(x - h), hi.min(x + h));
                if nlo <= nhi {
                    TrackerState::Free { lo: nlo, hi: nhi }
                } else if x - h > hi {
                    self.up.add((x - h) - hi);
                    TrackerState::Pinned(x - h)
                } else {
                    self.down.add(lo - (x + h));
                    TrackerState::Pinned(x + h)
                }
            }
            TrackerState::Pinned(y) => {
                if x - h > y {
                    self.up.add((x - h) - y);
                    TrackerState::Pinned(x - h)
                } else if x + h < y {
                    self.down.add(y - (x + h));
                    TrackerState::Pinned(x + h)
                } else {
                    TrackerState::Pinned(y)
                }
            }
        };
    }

    pub fn triple(&self) -> VariationTriple {
        let utv = self.up.value();
        let dtv = self.down.value();
        VariationTriple { ttv: utv + dtv, utv, dtv }
    }
}

/// Truncated variations of a raw value sequence.
pub fn triple_of_values(values: &[f64], eps: TruncationParam) -> VariationTriple {
    let mut sweep = TruncatedVariationSweep::new(eps);
    for &x in values {
        sweep.push(x);
    }
    sweep.triple()
}

fn check_upto(p: &CadlagPath, upto: f64) -> Result<usize> {
    if upto.is_nan() || upto < p.times()[0] {
        return Err(Error::Domain { t: upto, reason: "before the first sample time" });
    }
    Ok(p.prefix_len(upto))
}

/// `(TTV, UTV, DTV)` of `p` on `[0, upto]` at truncation level `eps`.
pub fn variation_triple(p: &CadlagPath, eps: TruncationParam, upto: f64) -> Result<VariationTriple> {
    let end = check_upto(p, upto)?;
    Ok(triple_of_values(&p.values()[..end], eps))
}

/// `eps * (TTV, UTV, DTV)`.
pub fn normalized_variation(p: &CadlagPath, eps: TruncationParam, upto: f64) -> Result<VariationTriple> {
    Ok(variation_triple(p, eps, upto)?.scaled(eps.get()))
}

/// Running triples at each grid time, computed in a single sweep.
pub fn variation_curve(p: &CadlagPath, eps: TruncationParam, grid: &[f64]) -> Result<VariationProcess> {
    check_grid(grid)?;
    if let Some(&g) = grid.first() {
        check_upto(p, g)?;
    }
    let (times, values) = (p.times(), p.values());
    let mut sweep = TruncatedVariationSweep::new(eps);
    let mut next = 0;
    let mut triples = Vec::with_capacity(grid.len());
    for &g in grid {
        while next < times.len() && times[next] <= g {
            sweep.push(values[next]);
            next += 1;
        }
        triples.push(sweep.triple());
    }
    Ok(VariationProcess { eps: eps.get(), grid: grid.to_vec(), triples })
}

/// Running triples at every sample time.
pub fn variation_curve_on_samples(p: &CadlagPath, eps: TruncationParam) -> VariationProcess {
    let mut sweep = TruncatedVariationSweep::new(eps);
    let triples = p
        .values()
        .iter()
        .map(|&x| {
            sweep.push(x);
            sweep.triple()
        })
        .collect();
    VariationProcess { eps: eps.get(), grid: p.times().to_vec(), triples }
}

/// Classical total variation of a value sequence.
pub fn total_variation_of_values(values: &[f64]) -> f64 {
    csum(values.windows(2).map(|w| (w[1] - w[0]).abs()))
}

/// Classical total variation of `p` on `[0, upto]`.
pub fn total_variation(p: &CadlagPath, upto: f64) -> Result<f64> {
    let end = check_upto(p, upto)?;
    Ok(total_variation_of_values(&p.values()[..end]))
}

/// Two-sided bound relating `eps * TTV(eps)` to the values at the reciprocal
/// integer levels `1/floor(1/eps)` and `1/ceil(1/eps)`, valid for `0 < eps < 1`.
/// Returns `(lower, middle, upper)`.
pub fn reciprocal_bracket(p: &CadlagPath, eps: f64, upto: f64) -> Result<(f64, f64, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("bracketing needs 0 < eps < 1, got {eps}")));
    }
    let fl = (1.0 / eps).floor();
    let ce = (1.0 / eps).ceil();
    let ttv = |c: f64| -> Result<f64> { Ok(variation_triple(p, TruncationParam::new(c)?, upto)?.ttv) };
    let lower = fl / (fl + 1.0) / fl * ttv(1.0 / fl)?;
    let middle = eps * ttv(eps)?;
    let upper = if ce > 1.0 { ce / (ce - 1.0) / ce * ttv(1.0 / ce)? } else { f64::INFINITY };
    Ok((lower, middle, upper))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{variation_exhaustive, variation_oracle_dp};
    use proptest::prelude::*;

    fn eps(c: f64) -> TruncationParam {
        TruncationParam::new(c).unwrap()
    }

    fn path(values: &[f64]) -> CadlagPath {
        CadlagPath::from_values(values.to_vec()).unwrap()
    }

    fn close(a: VariationTriple, b: VariationTriple) -> bool {
        a.max_abs_diff(&b) <= 1e-12
    }

    #[test]
    fn worked_examples() {
        let t = variation_triple(&path(&[0.0, 1.0, 2.0]), eps(0.5), 2.0).unwrap();
        assert!(close(t, VariationTriple { ttv: 1.5, utv: 1.5, dtv: 0.0 }), "{t:?}");
        let q = path(&[0.0, 1.0, 0.0, 1.0]);
        let t = variation_triple(&q, eps(0.5), 3.0).unwrap();
        assert!(close(t, VariationTriple { ttv: 1.5, utv: 1.0, dtv: 0.5 }), "{t:?}");
        let t = variation_triple(&q, eps(1.2), 3.0).unwrap();
        assert_eq!(t, VariationTriple::default());
    }

    #[test]
    fn zero_truncation_is_jordan_decomposition() {
        let q = path(&[0.0, 2.0, -1.0, 0.5, 0.5, 3.0]);
        let t = variation_triple(&q, eps(0.0), 5.0).unwrap();
        assert!(close(t, VariationTriple { ttv: 9.0, utv: 6.0, dtv: 3.0 }), "{t:?}");
    }

    #[test]
    fn negative_eps_rejected() {
        assert!(TruncationParam::new(-0.1).is_err());
        assert!(TruncationParam::new(f64::NAN).is_err());
        assert!(serde_json::from_str::<TruncationParam>("-1.0").is_err());
    }

    #[test]
    fn curve_examples() {
        let q = path(&[0.0, 1.0, 0.0, 1.0]);
        let c = variation_curve(&q, eps(0.5), &[1.0, 3.0]).unwrap();
        assert!(close(c.triples[0], VariationTriple { ttv: 0.5, utv: 0.5, dtv: 0.0 }));
        assert!(close(c.triples[1], VariationTriple { ttv: 1.5, utv: 1.0, dtv: 0.5 }));
        assert!(c.triples[1].dominates(&c.triples[0], 0.0));
        let flat = variation_curve(&path(&[2.0; 5]), eps(0.3), &[0.0, 2.0, 4.0]).unwrap();
        assert!(flat.triples.iter().all(|t| *t == VariationTriple::default()));
        assert!(variation_curve(&q, eps(0.5), &[2.0, 1.0]).is_err());
    }

    #[test]
    fn normalized_scaling_uses_its_own_level() {
        let q = path(&[0.0, 1.0, 2.0]);
        assert!((normalized_variation(&q, eps(0.5), 2.0).unwrap().ttv - 0.75).abs() < 1e-15);
        let at_double = normalized_variation(&q, eps(1.0), 2.0).unwrap().ttv;
        assert!((at_double - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_bracket_holds_on_a_walk() {
        let q = path(&[0.0, 0.3, -0.2, 0.8, 0.1, 1.5, 0.9, 1.1, -0.4]);
        for e in [0.03, 0.07, 0.15, 0.33, 0.6, 0.9] {
            let (lo, mid, hi) = reciprocal_bracket(&q, e, 8.0).unwrap();
            assert!(lo <= mid + 1e-12 && mid <= hi + 1e-12, "eps={e}: {lo} {mid} {hi}");
        }
    }

    proptest! {
        #[test]
        fn sweep_matches_dp_and_exhaustive(values in prop::collection::vec(-3.0f64..3.0, 1..11), c in 0.0f64..2.0) {
            let q = path(&values);
            let fast = variation_triple(&q, eps(c), q.horizon()).unwrap();
            let dp = variation_oracle_dp(&q, eps(c), q.horizon()).unwrap();
            let ex = variation_exhaustive(&values, c);
            prop_assert!(fast.max_abs_diff(&dp) <= 1e-12 * values.len() as f64, "{:?} vs {:?}", fast, dp);
            prop_assert!(dp.max_abs_diff(&ex) <= 1e-12 * values.len() as f64);
        }

        #[test]
        fn jordan_and_remainder(values in prop::collection::vec(-5.0f64..5.0, 1..80), c in 0.0f64..3.0) {
            let t = triple_of_values(&values, eps(c));
            prop_assert!((t.ttv - (t.utv + t.dtv)).abs() <= 1e-9 * (1.0 + t.ttv));
            let drift = values[values.len() - 1] - values[0];
            prop_assert!((t.utv - t.dtv - drift).abs() <= c + 1e-9);
        }

        #[test]
        fn monotone_in_eps(values in prop::collection::vec(-5.0f64..5.0, 1..80), a in 0.0f64..3.0, b in 0.0f64..3.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let t_lo = triple_of_values(&values, eps(lo));
            let t_hi = triple_of_values(&values, eps(hi));
            prop_assert!(t_lo.dominates(&t_hi, 1e-12));
        }
    }
}
