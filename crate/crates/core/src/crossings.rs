//! Interval crossing counts.
//!
//! For a level `y` and width `eps`, a downcrossing of the closed band
//! `[y, y + eps]` starts when the path is strictly above `y + eps` and
//! completes when it is strictly below `y`; upcrossings are the mirror image.
//! Stopping indices follow the strict inequalities exactly, with `inf ∅ = +∞`
//! (infinite indices are simply absent from the traces).
//!
//! Integrated over `y`, the up/down/total counts give the upward, downward and
//! total truncated variation at level `eps`. The integrand is piecewise
//! constant in `y` with breakpoints among `{x_i} ∪ {x_i - eps}`, so
//! [`crossing_integral`] evaluates it exactly at interval midpoints.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::path::{check_grid, CadlagPath};
use crate::sum::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingTrace {
    pub level: f64,
    pub eps: f64,
    pub window: (f64, f64),
    /// `σ_0, σ_1, ...` (finite ones only) for downcrossings.
    pub down_sigmas: Vec<usize>,
    pub down_taus: Vec<usize>,
    /// `σ̃_0, σ̃_1, ...` for upcrossings.
    pub up_sigmas: Vec<usize>,
    pub up_taus: Vec<usize>,
    pub d: usize,
    pub u: usize,
    pub n: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingKind {
    Up,
    Down,
    Total,
}

impl std::str::FromStr for CrossingKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(Self::Up),
            "down" => Ok(Self::Down),
            "total" => Ok(Self::Total),
            _ => Err(invalid(format!("crossing kind must be up|down|total, got `{s}`"))),
        }
    }
}

/// `(sample index, value)` pairs seen on `[a, b]`: the value holding at `a`,
/// then every sample in `(a, b]`.
fn window_points(p: &CadlagPath, a: f64, b: f64) -> Result<Vec<(usize, f64)>> {
    if !(a < b) {
        return Err(invalid(format!("window needs a < b, got [{a}, {b}]")));
    }
    let start = p.index_at(a)?;
    let end = p.prefix_len(b);
    let v = p.values();
    Ok(std::iter::once((start, v[start])).chain((start + 1..end).map(|i| (i, v[i]))).collect())
}

fn stopping_trace(
    points: &[(usize, f64)],
    first: impl Fn(f64) -> bool,
    second: impl Fn(f64) -> bool,
) -> (Vec<usize>, Vec<usize>) {
    let mut sigmas = vec![points[0].0];
    let mut taus = Vec::new();
    let mut pos = 0;
    loop {
        match points[pos..].iter().position(|&(_, v)| first(v)) {
            Some(k) => {
                pos += k;
                taus.push(points[pos].0);
            }
            None => break,
        }
        match points[pos..].iter().position(|&(_, v)| second(v)) {
            Some(k) => {
                pos += k;
                sigmas.push(points[pos].0);
            }
            None => break,
        }
    }
    (sigmas, taus)
}

/// Stopping-time trace and counts for level `y`, width `eps` on `[a, b]`.
pub fn crossing_counts(p: &CadlagPath, y: f64, eps: f64, window: (f64, f64)) -> Result<CrossingTrace> {
    if !(eps >= 0.0) || !y.is_finite() {
        return Err(invalid(format!("need finite level and eps >= 0, got y={y}, eps={eps}")));
    }
    let points = window_points(p, window.0, window.1)?;
    let top = y + eps;
    let (down_sigmas, down_taus) = stopping_trace(&points, |v| v > top, |v| v < y);
    let (up_sigmas, up_taus) = stopping_trace(&points, |v| v < y, |v| v > top);
    let d = down_sigmas.len() - 1;
    let u = up_sigmas.len() - 1;
    Ok(CrossingTrace {
        level: y,
        eps,
        window,
        down_sigmas,
        down_taus,
        up_sigmas,
        up_taus,
        d,
        u,
        n: d + u,
    })
}

/// Allocation-free `(u, d)` for a value sequence.
pub fn count_values(values: &[f64], y: f64, eps: f64) -> (u64, u64) {
    let top = y + eps;
    // Down family: waiting for v > top (armed = false) then for v < y.
    let mut down_armed = false;
    let mut up_armed = false;
    let (mut u, mut d) = (0u64, 0u64);
    for &v in values {
        if down_armed {
            if v < y {
                d += 1;
                down_armed = false;
            }
        } else if v > top {
            down_armed = true;
        }
        if up_armed {
            if v > top {
                u += 1;
                up_armed = false;
            }
        } else if v < y {
            up_armed = true;
        }
    }
    (u, d)
}

/// Integrals over `y` of the up, down and total crossing counts.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct CrossingIntegrals {
    pub up: f64,
    pub down: f64,
    pub total: f64,
}

impl CrossingIntegrals {
    pub fn get(&self, kind: CrossingKind) -> f64 {
        match kind {
            CrossingKind::Up => self.up,
            CrossingKind::Down => self.down,
            CrossingKind::Total => self.total,
        }
    }
}

/// Exact breakpoint integration for a value sequence.
pub fn crossing_integrals_of_values(values: &[f64], eps: f64) -> CrossingIntegrals {
    let mut breaks: Vec<f64> = values.iter().flat_map(|&v| [v, v - eps]).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let (mut up, mut down, mut total) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    for w in breaks.windows(2) {
        let len = w[1] - w[0];
        let (u, d) = count_values(values, 0.5 * (w[0] + w[1]), eps);
        up.add(u as f64 * len);
        down.add(d as f64 * len);
        total.add((u + d) as f64 * len);
    }
    CrossingIntegrals { up: up.value(), down: down.value(), total: total.value() }
}

/// `∫ u_eps^y dy`, `∫ d_eps^y dy` and `∫ n_eps^y dy` over the window.
pub fn crossing_integrals(p: &CadlagPath, eps: f64, window: (f64, f64)) -> Result<CrossingIntegrals> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(invalid(format!("crossing integral needs eps > 0, got {eps}")));
    }
    let values: Vec<f64> = window_points(p, window.0, window.1)?.into_iter().map(|(_, v)| v).collect();
    Ok(crossing_integrals_of_values(&values, eps))
}

pub fn crossing_integral(p: &CadlagPath, eps: f64, kind: CrossingKind, window: (f64, f64)) -> Result<f64> {
    Ok(crossing_integrals(p, eps, window)?.get(kind))
}

/// `eps * ∫ counts dy` on `[0, t]` for each grid time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingCurve {
    pub eps: f64,
    pub grid: Vec<f64>,
    pub up: Vec<f64>,
    pub down: Vec<f64>,
    pub total: Vec<f64>,
}

pub fn normalized_crossing_curve(p: &CadlagPath, eps_list: &[f64], grid: &[f64]) -> Result<Vec<CrossingCurve>> {
    check_grid(grid)?;
    eps_list
        .iter()
        .map(|&eps| {
            if !(eps > 0.0) {
                return Err(invalid(format!("eps must be > 0, got {eps}")));
            }
            let mut curve =
                CrossingCurve { eps, grid: grid.to_vec(), up: Vec::new(), down: Vec::new(), total: Vec::new() };
            for &t in grid {
                let end = p.prefix_len(t);
                if end == 0 {
                    return Err(Error::Domain { t, reason: "before the first sample time" });
                }
                let ci = crossing_integrals_of_values(&p.values()[..end], eps);
                curve.up.push(eps * ci.up);
                curve.down.push(eps * ci.down);
                curve.total.push(eps * ci.total);
            }
            Ok(curve)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variation::{triple_of_values, TruncationParam};
    use proptest::prelude::*;

    fn path(values: &[f64]) -> CadlagPath {
        CadlagPath::from_values(values.to_vec()).unwrap()
    }

    #[test]
    fn trace_example_four_points() {
        let q = path(&[0.0, 1.0, 0.0, 1.0]);
        let tr = crossing_counts(&q, 0.25, 0.5, (0.0, 3.0)).unwrap();
        assert_eq!((tr.u, tr.d, tr.n), (2, 1, 3));
        assert_eq!(tr.up_sigmas, vec![0, 1, 3]);
        assert_eq!(tr.up_taus, vec![0, 2]);
        assert_eq!(tr.down_sigmas, vec![0, 2]);
        assert_eq!(tr.down_taus, vec![1, 3]);
    }

    #[test]
    fn trace_example_two_points() {
        let tr = crossing_counts(&path(&[0.0, 1.0]), 0.25, 0.5, (0.0, 1.0)).unwrap();
        assert_eq!((tr.u, tr.d), (1, 0));
        assert_eq!(tr.up_taus, vec![0]);
        assert_eq!(tr.up_sigmas, vec![0, 1]);
        assert_eq!(tr.down_taus, vec![1]);
        assert_eq!(tr.down_sigmas, vec![0]);
    }

    #[test]
    fn constant_path_never_crosses() {
        let q = path(&[0.4; 5]);
        for (y, e) in [(0.0, 0.1), (0.4, 0.0), (0.3, 0.2), (-1.0, 5.0)] {
            let tr = crossing_counts(&q, y, e, (0.0, 4.0)).unwrap();
            assert_eq!((tr.u, tr.d), (0, 0));
        }
    }

    #[test]
    fn integral_examples() {
        let q = path(&[0.0, 1.0, 0.0, 1.0]);
        let ci = crossing_integrals(&q, 0.5, (0.0, 3.0)).unwrap();
        assert!((ci.up - 1.0).abs() < 1e-12);
        assert!((ci.down - 0.5).abs() < 1e-12);
        assert!((ci.total - 1.5).abs() < 1e-12);
        assert!(crossing_integral(&q, 0.0, CrossingKind::Up, (0.0, 3.0)).is_err());
    }

    #[test]
    fn window_starting_between_samples() {
        let q = CadlagPath::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 2.0, -1.0, 1.0]).unwrap();
        let tr = crossing_counts(&q, 0.0, 0.5, (1.5, 3.0)).unwrap();
        // x(1.5) = 2 starts above the band: one down, then one up.
        assert_eq!(tr.down_sigmas[0], 1);
        assert_eq!((tr.d, tr.u), (1, 1));
        assert!(crossing_counts(&q, 0.0, 0.5, (2.0, 2.0)).is_err());
    }

    #[test]
    fn normalized_curve_on_constant_path() {
        let q = path(&[1.0; 4]);
        let curves = normalized_crossing_curve(&q, &[0.1, 0.5], &[0.0, 3.0]).unwrap();
        assert!(curves.iter().all(|c| c.total.iter().all(|&v| v == 0.0)));
    }

    proptest! {
        #[test]
        fn integrals_reproduce_truncated_variation(values in prop::collection::vec(-3.0f64..3.0, 1..60), eps in 0.01f64..2.0) {
            let ci = crossing_integrals_of_values(&values, eps);
            let t = triple_of_values(&values, TruncationParam::new(eps).unwrap());
            prop_assert!((ci.up - t.utv).abs() <= 1e-9 * (1.0 + t.utv));
            prop_assert!((ci.down - t.dtv).abs() <= 1e-9 * (1.0 + t.dtv));
            prop_assert!((ci.total - t.ttv).abs() <= 1e-9 * (1.0 + t.ttv));
        }

        #[test]
        fn counts_consistent_and_interleaved(values in prop::collection::vec(-3.0f64..3.0, 2..60), y in -3.0f64..3.0, eps in 0.0f64..2.0, cut in 1usize..59) {
            let q = path(&values);
            let n = values.len();
            let tr = crossing_counts(&q, y, eps, (0.0, (n - 1) as f64)).unwrap();
            prop_assert_eq!(tr.n, tr.u + tr.d);
            let (u, d) = count_values(&values, y, eps);
            prop_assert_eq!((u as usize, d as usize), (tr.u, tr.d));
            for k in 0..tr.up_taus.len() {
                prop_assert!(tr.up_sigmas[k] <= tr.up_taus[k]);
                if k + 1 < tr.up_sigmas.len() {
                    prop_assert!(tr.up_taus[k] <= tr.up_sigmas[k + 1]);
                }
            }
            for k in 0..tr.down_taus.len() {
                prop_assert!(tr.down_sigmas[k] <= tr.down_taus[k]);
                if k + 1 < tr.down_sigmas.len() {
                    prop_assert!(tr.down_taus[k] <= tr.down_sigmas[k + 1]);
                }
            }
            let b = (cut.min(n - 1)) as f64;
            if b > 0.0 {
                let small = crossing_counts(&q, y, eps, (0.0, b)).unwrap();
                prop_assert!(small.u <= tr.u && small.d <= tr.d);
            }
        }

        #[test]
        fn counts_non_increasing_in_eps(values in prop::collection::vec(-3.0f64..3.0, 2..60), y in -3.0f64..3.0, a in 0.0f64..2.0, b in 0.0f64..2.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let (u1, d1) = count_values(&values, y, lo);
            let (u2, d2) = count_values(&values, y, hi);
            prop_assert!(u2 <= u1 && d2 <= d1);
        }
    }
}
