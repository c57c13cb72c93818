//! Finitely sampled càdlàg paths.
//!
//! A [`CadlagPath`] stores strictly increasing sample times together with the
//! sampled values and is read as the piecewise-constant, right-continuous
//! extension: `x(t)` is the value at the last sample time `<= t` and `x(t-)`
//! the value at the last sample time `< t`. Every supremum over partitions of
//! such a path is attained on sample times, so quantities computed from the
//! samples are exact for the extension.
//!
//! Paths produced by discretising a process with continuous components carry a
//! [`JumpDesignation`]: only the designated sample times are genuine jumps,
//! the remaining increments stand for continuous motion between grid points.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{invalid, Error, Result};

/// Which sample increments count as jumps of the continuum path.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum JumpDesignation {
    /// Every nonzero increment is a jump (the literal piecewise-constant path).
    #[default]
    AllIncrements,
    /// Only the listed sample indices (sorted, each `>= 1`) are jumps.
    Designated(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CadlagPath {
    times: Vec<f64>,
    values: Vec<f64>,
    jumps: JumpDesignation,
    zero_left_limit: bool,
}

/// One jump `Δ = x(t) - x(t-)` at a sample time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jump {
    pub index: usize,
    pub time: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct JumpList {
    pub jumps: Vec<Jump>,
    pub sum_squares: f64,
    pub sum_abs: f64,
}

impl JumpList {
    pub fn len(&self) -> usize {
        self.jumps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jumps.is_empty()
    }
}

impl CadlagPath {
    /// Validates and builds a path. The first sample time must be 0.
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.is_empty() && values.is_empty() {
            return Err(Error::EmptyPath("no samples"));
        }
        if times.len() != values.len() {
            return Err(Error::Validation {
                index: times.len().min(values.len()),
                reason: "times and values differ in length",
            });
        }
        for (i, (&t, &v)) in times.iter().zip(&values).enumerate() {
            if !t.is_finite() {
                return Err(Error::Validation { index: i, reason: "time is not finite" });
            }
            if !v.is_finite() {
                return Err(Error::Validation { index: i, reason: "value is not finite" });
            }
            if i > 0 && t <= times[i - 1] {
                return Err(Error::Validation {
                    index: i,
                    reason: "times not strictly increasing",
                });
            }
        }
        if times[0] != 0.0 {
            return Err(Error::Validation { index: 0, reason: "first sample time must be 0" });
        }
        Ok(Self { times, values, jumps: JumpDesignation::AllIncrements, zero_left_limit: false })
    }

    /// Path sampled at times `0, 1, 2, ...`.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let times = (0..values.len()).map(|i| i as f64).collect();
        Self::new(times, values)
    }

    pub fn constant(value: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![value])
    }

    /// Marks the given sample indices as the only genuine jumps.
    pub fn with_designated_jumps(mut self, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&i) = indices.iter().find(|&&i| i == 0 || i >= self.len()) {
            return Err(Error::Validation { index: i, reason: "jump index outside (0, n)" });
        }
        self.jumps = JumpDesignation::Designated(indices);
        Ok(self)
    }

    pub fn with_jump_designation(mut self, jumps: JumpDesignation) -> Result<Self> {
        match jumps {
            JumpDesignation::AllIncrements => {
                self.jumps = jumps;
                Ok(self)
            }
            JumpDesignation::Designated(ix) => self.with_designated_jumps(ix),
        }
    }

    /// Enables the `x(0-) := 0` convention.
    pub fn with_zero_left_limit(mut self, on: bool) -> Self {
        self.zero_left_limit = on;
        self
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn jump_designation(&self) -> &JumpDesignation {
        &self.jumps
    }

    pub fn zero_left_limit(&self) -> bool {
        self.zero_left_limit
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.len() - 1]
    }

    pub fn first_value(&self) -> f64 {
        self.values[0]
    }

    pub fn last_value(&self) -> f64 {
        self.values[self.len() - 1]
    }

    /// Index of the last sample time `<= t`.
    pub fn index_at(&self, t: f64) -> Result<usize> {
        if t.is_nan() || t < self.times[0] {
            return Err(Error::Domain { t, reason: "before the first sample time" });
        }
        Ok(self.times.partition_point(|&s| s <= t) - 1)
    }

    /// Number of samples with time `<= t` (0 when `t` precedes the path).
    pub fn prefix_len(&self, t: f64) -> usize {
        self.times.partition_point(|&s| s <= t)
    }

    pub fn value_at(&self, t: f64) -> Result<f64> {
        Ok(self.values[self.index_at(t)?])
    }

    pub fn left_limit_at(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < self.times[0] {
            return Err(Error::Domain { t, reason: "before the first sample time" });
        }
        let k = self.times.partition_point(|&s| s < t);
        if k == 0 {
            return if self.zero_left_limit {
                Ok(0.0)
            } else {
                Err(Error::Domain { t, reason: "left limit at the first sample time (x(0-) convention off)" })
            };
        }
        Ok(self.values[k - 1])
    }

    /// Whether the increment into sample `i` is a jump of the continuum path.
    pub fn is_jump_index(&self, i: usize) -> bool {
        if i == 0 || i >= self.len() {
            return false;
        }
        match &self.jumps {
            JumpDesignation::AllIncrements => true,
            JumpDesignation::Designated(ix) => ix.binary_search(&i).is_ok(),
        }
    }

    /// Nonzero jumps at sample times in `(0, t]`; with the `x(0-) = 0`
    /// convention enabled a nonzero initial value is reported as a jump at 0.
    pub fn jumps(&self, t: f64) -> Result<JumpList> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::Domain { t, reason: "negative time" });
        }
        let end = self.prefix_len(t);
        let mut list = JumpList::default();
        let push = |index: usize, delta: f64, list: &mut JumpList| {
            if delta != 0.0 {
                list.jumps.push(Jump { index, time: self.times[index], delta });
            }
        };
        if self.zero_left_limit && end > 0 {
            push(0, self.values[0], &mut list);
        }
        match &self.jumps {
            JumpDesignation::AllIncrements => {
                for i in 1..end {
                    push(i, self.values[i] - self.values[i - 1], &mut list);
                }
            }
            JumpDesignation::Designated(ix) => {
                for &i in ix.iter().take_while(|&&i| i < end) {
                    push(i, self.values[i] - self.values[i - 1], &mut list);
                }
            }
        }
        list.sum_squares = crate::sum::csum(list.jumps.iter().map(|j| j.delta * j.delta));
        list.sum_abs = crate::sum::csum(list.jumps.iter().map(|j| j.delta.abs()));
        Ok(list)
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        self.values.windows(2).map(|w| w[1] - w[0])
    }

    pub fn same_grid(&self, other: &CadlagPath) -> bool {
        self.times == other.times
    }

    /// Applies `f` to every value, keeping grid and jump designation.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Result<CadlagPath> {
        let values: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation { index: i, reason: "value is not finite" });
        }
        Ok(Self { values, ..self.clone() })
    }

    /// Same grid and jump designation, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<CadlagPath> {
        if values.len() != self.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation { index: i, reason: "value is not finite" });
        }
        Ok(Self { values, ..self.clone() })
    }

    /// Pointwise combination of two paths on the same grid. The result's jumps
    /// are the union of both designations.
    pub fn zip_with(&self, other: &CadlagPath, f: impl Fn(f64, f64) -> f64) -> Result<CadlagPath> {
        if !self.same_grid(other) {
            return Err(Error::GridMismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        let jumps = match (&self.jumps, &other.jumps) {
            (JumpDesignation::Designated(a), JumpDesignation::Designated(b)) => {
                let mut ix: Vec<usize> = a.iter().chain(b).copied().collect();
                ix.sort_unstable();
                ix.dedup();
                JumpDesignation::Designated(ix)
            }
            _ => JumpDesignation::AllIncrements,
        };
        let out = self.with_values(values)?;
        out.with_jump_designation(jumps)
    }

    /// Samples the path on `grid` (strictly increasing, starting at 0). A grid
    /// increment is a jump when it contains a jump of the original path.
    pub fn resample(&self, grid: &[f64]) -> Result<CadlagPath> {
        let values = grid.iter().map(|&t| self.value_at(t)).collect::<Result<Vec<_>>>()?;
        let out = CadlagPath::new(grid.to_vec(), values)?;
        let jumps = match &self.jumps {
            JumpDesignation::AllIncrements => JumpDesignation::AllIncrements,
            JumpDesignation::Designated(ix) => {
                let mut mapped: Vec<usize> = ix
                    .iter()
                    .filter_map(|&i| {
                        let k = grid.partition_point(|&g| g < self.times[i]);
                        (k < grid.len()).then_some(k)
                    })
                    .filter(|&k| k > 0)
                    .collect();
                mapped.dedup();
                JumpDesignation::Designated(mapped)
            }
        };
        Ok(out.with_jump_designation(jumps)?.with_zero_left_limit(self.zero_left_limit))
    }

    /// Reads `t,x[,jump]` CSV. A `jump` column (0/1) designates jump rows;
    /// without it every increment is treated as a jump.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let (ti, xi) = match (col("t"), col("x")) {
            (Some(t), Some(x)) => (t, x),
            _ => return Err(Error::Format("expected header with columns `t,x`".into())),
        };
        let ji = col("jump");
        let mut times = Vec::new();
        let mut values = Vec::new();
        let mut jumps = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse = |c: usize| -> Result<f64> {
                let field = rec.get(c).unwrap_or("");
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("row {row}: cannot parse `{field}` as a number")))
            };
            times.push(parse(ti)?);
            values.push(parse(xi)?);
            if let Some(j) = ji {
                match rec.get(j).unwrap_or("") {
                    "1" | "true" => jumps.push(row),
                    "0" | "false" | "" => {}
                    other => return Err(Error::Format(format!("row {row}: bad jump flag `{other}`"))),
                }
            }
        }
        let path = CadlagPath::new(times, values)?;
        match ji {
            Some(_) => path.with_designated_jumps(jumps),
            None => Ok(path),
        }
    }

    pub fn from_csv_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    /// Writes `t,x` CSV, adding a `jump` column when jumps are designated.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        match &self.jumps {
            JumpDesignation::AllIncrements => {
                w.write_record(["t", "x"])?;
                for (t, x) in self.times.iter().zip(&self.values) {
                    w.write_record([fmt_f64(*t), fmt_f64(*x)])?;
                }
            }
            JumpDesignation::Designated(_) => {
                w.write_record(["t", "x", "jump"])?;
                for i in 0..self.len() {
                    let flag = if self.is_jump_index(i) { "1" } else { "0" };
                    w.write_record([fmt_f64(self.times[i]), fmt_f64(self.values[i]), flag.to_string()])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_file(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = std::io::BufWriter::new(std::fs::File::create(path)?);
        self.write_csv(file)
    }
}

/// Shortest round-trip representation of an `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// `sup_s |p(s) - q(s)|` for paths sharing a grid.
pub fn sup_distance(p: &CadlagPath, q: &CadlagPath) -> Result<f64> {
    if !p.same_grid(q) {
        return Err(Error::GridMismatch);
    }
    Ok(p.values.iter().zip(&q.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Sorted union of two grids.
pub fn union_grid(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), Some(&y)) if y < x => {
                j += 1;
                y
            }
            (Some(&x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// Resamples both paths onto the union of their grids.
pub fn resample_union(p: &CadlagPath, q: &CadlagPath) -> Result<(CadlagPath, CadlagPath)> {
    let grid = union_grid(&p.times, &q.times);
    Ok((p.resample(&grid)?, q.resample(&grid)?))
}

/// Parses a `start:end:step` grid specification (inclusive of `end` up to
/// rounding) or a comma-separated list of times.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(invalid(format!("grid `{spec}` is not start:end:step")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad grid number `{s}`")));
        let (start, end, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
        if !(step > 0.0) || end < start {
            return Err(invalid(format!("grid `{spec}` needs step > 0 and end >= start")));
        }
        let count = ((end - start) / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|k| start + k as f64 * step).collect())
    } else {
        let grid = spec
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| invalid(format!("bad grid time `{s}`"))))
            .collect::<Result<Vec<f64>>>()?;
        check_grid(&grid)?;
        Ok(grid)
    }
}

/// Evaluation grids must be finite and non-decreasing.
pub fn check_grid(grid: &[f64]) -> Result<()> {
    for (i, &g) in grid.iter().enumerate() {
        if !g.is_finite() {
            return Err(Error::Validation { index: i, reason: "grid time is not finite" });
        }
        if i > 0 && g < grid[i - 1] {
            return Err(Error::Validation { index: i, reason: "grid not sorted" });
        }
    }
    Ok(())
}

/// Reads a one-column CSV of evaluation times (header `t`).
pub fn read_grid_csv<R: Read>(reader: R) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = headers.iter().position(|h| h == "t").unwrap_or(0);
    let mut grid = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let field = rec.get(col).unwrap_or("");
        grid.push(field.parse::<f64>().map_err(|_| Error::Format(format!("bad grid time `{field}`")))?);
    }
    check_grid(&grid)?;
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(times: &[f64], values: &[f64]) -> CadlagPath {
        CadlagPath::new(times.to_vec(), values.to_vec()).unwrap()
    }

    #[test]
    fn make_path_examples() {
        let c = p(&[0.0], &[3.0]);
        assert_eq!(c.len(), 1);
        assert_eq!(c.value_at(10.0).unwrap(), 3.0);
        p(&[0.0, 1.0, 2.0], &[0.0, 1.0, 2.0]);
        let err = CadlagPath::new(vec![0.0, 1.0, 1.0], vec![0.0, 1.0, 2.0]).unwrap_err();
        assert!(err.to_string().contains("times not strictly increasing at index 2"), "{err}");
    }

    #[test]
    fn make_path_rejects_bad_input() {
        assert!(matches!(CadlagPath::new(vec![], vec![]), Err(Error::EmptyPath(_))));
        assert!(matches!(
            CadlagPath::new(vec![0.0, 1.0], vec![0.0]),
            Err(Error::Validation { index: 1, .. })
        ));
        assert!(matches!(
            CadlagPath::new(vec![0.0, 1.0], vec![0.0, f64::NAN]),
            Err(Error::Validation { index: 1, .. })
        ));
        assert!(matches!(
            CadlagPath::new(vec![0.0, 1.0], vec![f64::INFINITY, 0.0]),
            Err(Error::Validation { index: 0, .. })
        ));
        assert!(CadlagPath::new(vec![0.5], vec![1.0]).is_err());
    }

    #[test]
    fn evaluation_convention() {
        let q = p(&[0.0, 1.0], &[5.0, 7.0]);
        assert_eq!(q.value_at(1.0).unwrap(), 7.0);
        assert_eq!(q.left_limit_at(1.0).unwrap(), 5.0);
        assert_eq!(q.value_at(0.5).unwrap(), 5.0);
        assert!(q.value_at(-0.1).is_err());
        assert!(q.left_limit_at(0.0).is_err());
        assert_eq!(q.clone().with_zero_left_limit(true).left_limit_at(0.0).unwrap(), 0.0);
    }

    #[test]
    fn jump_examples() {
        let q = p(&[0.0, 1.0, 2.0], &[0.0, 0.0, 3.0]);
        let j = q.jumps(2.0).unwrap();
        assert_eq!(j.jumps, vec![Jump { index: 2, time: 2.0, delta: 3.0 }]);
        assert_eq!(j.sum_squares, 9.0);
        assert!(CadlagPath::constant(4.0).unwrap().jumps(1.0).unwrap().is_empty());
        let q = p(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]);
        let j = q.jumps(1.5).unwrap();
        assert_eq!(j.jumps.len(), 1);
        assert_eq!((j.jumps[0].time, j.jumps[0].delta), (1.0, 1.0));
    }

    #[test]
    fn designated_jumps_and_zero_convention() {
        let q = p(&[0.0, 1.0, 2.0, 3.0], &[2.0, 2.1, 5.1, 5.0]).with_designated_jumps(vec![2]).unwrap();
        let j = q.jumps(3.0).unwrap();
        assert_eq!(j.len(), 1);
        assert!((j.jumps[0].delta - 3.0).abs() < 1e-12);
        let j0 = q.clone().with_zero_left_limit(true).jumps(3.0).unwrap();
        assert_eq!(j0.jumps[0], Jump { index: 0, time: 0.0, delta: 2.0 });
        assert!(q.clone().with_designated_jumps(vec![0]).is_err());
    }

    #[test]
    fn sup_distance_examples() {
        let a = p(&[0.0, 1.0], &[0.0, 1.0]);
        assert_eq!(sup_distance(&a, &a).unwrap(), 0.0);
        let b = p(&[0.0, 1.0], &[0.4, 0.7]);
        assert!((sup_distance(&a, &b).unwrap() - 0.4).abs() < 1e-15);
        assert_eq!(sup_distance(&p(&[0.0], &[1.0]), &p(&[0.0], &[-1.0])).unwrap(), 2.0);
        let c = p(&[0.0, 0.5], &[0.0, 1.0]);
        assert!(matches!(sup_distance(&a, &c), Err(Error::GridMismatch)));
        let (ra, rc) = resample_union(&a, &c).unwrap();
        assert_eq!(ra.times(), &[0.0, 0.5, 1.0]);
        assert_eq!(sup_distance(&ra, &rc).unwrap(), 1.0);
    }

    #[test]
    fn resample_keeps_designated_jumps() {
        let q = p(&[0.0, 0.3, 0.6, 1.0], &[0.0, 0.1, 2.1, 2.0]).with_designated_jumps(vec![2]).unwrap();
        let r = q.resample(&[0.0, 0.5, 1.0]).unwrap();
        assert_eq!(r.jump_designation(), &JumpDesignation::Designated(vec![2]));
        assert_eq!(r.values(), &[0.0, 0.1, 2.0]);
    }

    #[test]
    fn csv_roundtrip_and_rejection() {
        let q = p(&[0.0, 0.5, 1.25], &[1.0, -2.5, 1e-17]).with_designated_jumps(vec![1]).unwrap();
        let mut buf = Vec::new();
        q.write_csv(&mut buf).unwrap();
        assert_eq!(CadlagPath::read_csv(&buf[..]).unwrap(), q);
        let unsorted = "t,x\n0,1\n2,1\n1,3\n";
        let err = CadlagPath::read_csv(unsorted.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("index 2"));
        assert!(CadlagPath::read_csv("a,b\n0,1\n".as_bytes()).is_err());
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("0:1:0.25").unwrap();
        assert_eq!(g, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0:1:0.01").unwrap().len(), 101);
        assert_eq!(parse_grid("0.5, 1").unwrap(), vec![0.5, 1.0]);
        assert!(parse_grid("1,0.5").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    fn arb_values(n: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-10.0f64..10.0, n)
    }

    proptest! {
        #[test]
        fn right_continuity_and_telescoping(values in prop::collection::vec(-10.0f64..10.0, 1..60)) {
            let q = CadlagPath::from_values(values.clone()).unwrap();
            for (i, &t) in q.times().iter().enumerate() {
                prop_assert_eq!(q.value_at(t).unwrap(), values[i]);
            }
            let total = crate::sum::csum(q.increments());
            prop_assert!((total - (q.last_value() - q.first_value())).abs() <= 1e-12 * values.len() as f64);
        }

        #[test]
        fn sup_distance_is_a_metric((a, b, c) in (1usize..40).prop_flat_map(|n| (arb_values(n), arb_values(n), arb_values(n)))) {
            let pa = CadlagPath::from_values(a).unwrap();
            let pb = CadlagPath::from_values(b).unwrap();
            let pc = CadlagPath::from_values(c).unwrap();
            let ab = sup_distance(&pa, &pb).unwrap();
            prop_assert_eq!(ab, sup_distance(&pb, &pa).unwrap());
            prop_assert_eq!(sup_distance(&pa, &pa).unwrap(), 0.0);
            let bc = sup_distance(&pb, &pc).unwrap();
            let ac = sup_distance(&pa, &pc).unwrap();
            prop_assert!(ac <= ab + bc + 1e-12);
        }
    }
}
