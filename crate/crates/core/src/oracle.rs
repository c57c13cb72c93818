//! Reference computations of truncated variation.
//!
//! Both routines work directly from the supremum over index selections and
//! share no code with the one-pass sweep in [`crate::variation`].

use crate::error::{Error, Result};
use crate::path::CadlagPath;
use crate::variation::{TruncationParam, VariationTriple};

fn dp_sup(values: &[f64], gain: impl Fn(f64, f64) -> f64) -> f64 {
    // best[j]: largest sum over selections ending at index j. All gains are
    // non-negative, so the supremum over selections is max_j best[j].
    let mut best = vec![0.0f64; values.len()];
    let mut overall = 0.0f64;
    for j in 1..values.len() {
        let mut b = 0.0f64;
        for i in 0..j {
            b = b.max(best[i] + gain(values[i], values[j]));
        }
        best[j] = b;
        overall = overall.max(b);
    }
    overall
}

/// Quadratic dynamic program over sample indices in `[0, upto]`.
pub fn variation_oracle_dp(p: &CadlagPath, eps: TruncationParam, upto: f64) -> Result<VariationTriple> {
    if upto.is_nan() || upto < p.times()[0] {
        return Err(Error::Domain { t: upto, reason: "before the first sample time" });
    }
    let values = &p.values()[..p.prefix_len(upto)];
    Ok(variation_dp_values(values, eps.get()))
}

pub fn variation_dp_values(values: &[f64], c: f64) -> VariationTriple {
    VariationTriple {
        ttv: dp_sup(values, |a, b| ((b - a).abs() - c).max(0.0)),
        utv: dp_sup(values, |a, b| (b - a - c).max(0.0)),
        dtv: dp_sup(values, |a, b| (a - b - c).max(0.0)),
    }
}

/// Enumerates every subsequence of indices. Exponential; meant for `n <= 16`.
pub fn variation_exhaustive(values: &[f64], c: f64) -> VariationTriple {
    assert!(values.len() <= 20, "exhaustive enumeration limited to 20 samples");
    let n = values.len();
    let mut out = VariationTriple::default();
    let mut picked = Vec::with_capacity(n);
    for mask in 0u32..(1u32 << n) {
        picked.clear();
        picked.extend((0..n).filter(|&i| mask & (1 << i) != 0).map(|i| values[i]));
        let (mut t, mut u, mut d) = (0.0, 0.0, 0.0);
        for w in picked.windows(2) {
            let inc = w[1] - w[0];
            t += (inc.abs() - c).max(0.0);
            u += (inc - c).max(0.0);
            d += (-inc - c).max(0.0);
        }
        out.ttv = out.ttv.max(t);
        out.utv = out.utv.max(u);
        out.dtv = out.dtv.max(d);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dp_examples() {
        let t = variation_dp_values(&[0.0, 1.0, 2.0], 0.5);
        assert_eq!(t, VariationTriple { ttv: 1.5, utv: 1.5, dtv: 0.0 });
        let t = variation_dp_values(&[0.0, 1.0, 0.0, 1.0], 0.5);
        assert_eq!(t, VariationTriple { ttv: 1.5, utv: 1.0, dtv: 0.5 });
        assert_eq!(variation_dp_values(&[0.0, 1.0, 0.0, 1.0], 1.2), VariationTriple::default());
        assert_eq!(variation_dp_values(&[0.3, -0.2, 0.1], 5.0), VariationTriple::default());
    }

    #[test]
    fn exhaustive_examples() {
        assert_eq!(variation_exhaustive(&[0.0, 1.0, 2.0], 0.5).ttv, 1.5);
        let t = variation_exhaustive(&[0.0, 1.0, 0.0, 1.0], 0.5);
        assert_eq!((t.ttv, t.utv, t.dtv), (1.5, 1.0, 0.5));
    }
}
