//! Monte Carlo experiments. Replicates run on the rayon pool and are merged
//! in replicate order, so every report is bitwise reproducible.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::follmer::{covariation, Approximation};
use crate::path::{fmt_f64, CadlagPath};
use crate::simulate::{correlated_brownian_pair, generate, SimConfig};
use crate::stieltjes::IntegrandFunction;
use crate::variation::{total_variation_of_values, triple_of_values, TruncatedVariationSweep, TruncationParam};

use super::battery::{self, CheckTally};
use super::Table;

/// Median, minimum and maximum over replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateStats {
    pub median: f64,
    pub min: f64,
    pub max: f64,
    pub values: Vec<f64>,
}

impl ReplicateStats {
    pub fn new(values: Vec<f64>) -> Self {
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let median = match n {
            0 => f64::NAN,
            _ if n % 2 == 1 => sorted[n / 2],
            _ => 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]),
        };
        Self {
            median,
            min: sorted.first().copied().unwrap_or(f64::NAN),
            max: sorted.last().copied().unwrap_or(f64::NAN),
            values,
        }
    }

    /// Standard error of the median under a normal approximation.
    pub fn median_std_error(&self) -> f64 {
        let n = self.values.len() as f64;
        if n < 2.0 {
            return f64::INFINITY;
        }
        let mean = self.values.iter().sum::<f64>() / n;
        let var = self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        1.2533 * (var / n).sqrt()
    }
}

/// Whether medians never increase by more than `noise_sigmas` standard errors
/// of the later median.
pub fn shrinks_within_noise(levels: &[&ReplicateStats], noise_sigmas: f64) -> bool {
    levels.windows(2).all(|w| w[1].median <= w[0].median + noise_sigmas * w[1].median_std_error())
}

pub(crate) fn replicate_configs(sim: &SimConfig, replicates: usize) -> Vec<SimConfig> {
    (0..replicates as u64).map(|r| sim.with_seed(sim.seed.wrapping_add(r))).collect()
}

/// Path source: simulated replicates or a single fixed path.
#[derive(Debug, Clone)]
pub enum PathSource {
    Simulated { sim: SimConfig, replicates: usize },
    Fixed(CadlagPath),
}

impl PathSource {
    pub fn count(&self) -> usize {
        match self {
            PathSource::Simulated { replicates, .. } => *replicates,
            PathSource::Fixed(_) => 1,
        }
    }

    fn path(&self, r: usize) -> Result<CadlagPath> {
        match self {
            PathSource::Simulated { sim, .. } => generate(&sim.with_seed(sim.seed.wrapping_add(r as u64))),
            PathSource::Fixed(p) => Ok(p.clone()),
        }
    }

    fn map<T: Send>(&self, f: impl Fn(usize, CadlagPath) -> Result<T> + Sync) -> Result<Vec<T>> {
        (0..self.count()).into_par_iter().map(|r| f(r, self.path(r)?)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceLevel {
    pub eps: f64,
    /// `sup_t |eps TTV_t - rate t|` over the whole horizon.
    pub sup_err: ReplicateStats,
    pub ttv_end: ReplicateStats,
    pub utv_end: ReplicateStats,
    pub dtv_end: ReplicateStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rate: f64,
    pub horizon: f64,
    pub levels: Vec<ConvergenceLevel>,
    #[serde(skip)]
    pub table: Table,
}

struct ConvergenceRun {
    sup: f64,
    end: [f64; 3],
    rows: Vec<[f64; 6]>,
}

fn convergence_one(p: &CadlagPath, eps: f64, rate: f64, grid: &[f64]) -> ConvergenceRun {
    let (times, values) = (p.times(), p.values());
    let mut sweep = TruncatedVariationSweep::new(TruncationParam::new(eps).expect("validated eps"));
    let mut sup = 0.0f64;
    let mut rows = Vec::with_capacity(grid.len());
    let mut g = 0;
    let horizon = p.horizon();
    for i in 0..values.len() {
        sweep.push(values[i]);
        let t = sweep.triple().scaled(eps);
        let next = times.get(i + 1).copied().unwrap_or(horizon);
        sup = sup.max((t.ttv - rate * times[i]).abs()).max((t.ttv - rate * next).abs());
        while g < grid.len() && (i + 1 == values.len() || grid[g] < times[i + 1]) {
            rows.push([grid[g], t.ttv, t.utv, t.dtv, rate * grid[g], (t.ttv - rate * grid[g]).abs()]);
            g += 1;
        }
    }
    let t = sweep.triple().scaled(eps);
    ConvergenceRun { sup, end: [t.ttv, t.utv, t.dtv], rows }
}

/// `eps TTV`, `eps UTV`, `eps DTV` against `rate * t` along a ladder.
pub fn convergence(source: &PathSource, rate: f64, eps_list: &[f64], grid: &[f64]) -> Result<ConvergenceReport> {
    let runs: Vec<Vec<ConvergenceRun>> =
        source.map(|_, p| Ok(eps_list.iter().map(|&e| convergence_one(&p, e, rate, grid)).collect()))?;
    let horizon = source.path(0)?.horizon();
    let mut table = Table::new("convergence", &["replicate", "t", "eps", "T", "U", "D", "target", "abs_err", "sup_err"]);
    let mut levels = Vec::with_capacity(eps_list.len());
    for (k, &eps) in eps_list.iter().enumerate() {
        let col = |f: &dyn Fn(&ConvergenceRun) -> f64| ReplicateStats::new(runs.iter().map(|r| f(&r[k])).collect());
        levels.push(ConvergenceLevel {
            eps,
            sup_err: col(&|r| r.sup),
            ttv_end: col(&|r| r.end[0]),
            utv_end: col(&|r| r.end[1]),
            dtv_end: col(&|r| r.end[2]),
        });
    }
    for (r, per_eps) in runs.iter().enumerate() {
        for (k, run) in per_eps.iter().enumerate() {
            for row in &run.rows {
                let mut cells = vec![r.to_string(), fmt_f64(row[0]), fmt_f64(eps_list[k])];
                cells.extend(row[1..].iter().map(|&v| fmt_f64(v)));
                cells.push(fmt_f64(run.sup));
                table.push(cells);
            }
        }
    }
    Ok(ConvergenceReport { rate, horizon, levels, table })
}

/// Squared increments along dyadic partitions next to `eps TTV`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionDiagnostic {
    /// `(intervals, partition_sum)` for each dyadic level.
    pub partition: Vec<(u64, f64)>,
    /// `(eps, eps TTV)` at the horizon.
    pub truncated: Vec<(f64, f64)>,
    pub jump_square_sum: f64,
}

impl PartitionDiagnostic {
    pub fn finest(&self) -> f64 {
        self.partition.last().map_or(0.0, |&(_, s)| s)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new("partition", &["kind", "param", "value"]);
        for &(k, s) in &self.partition {
            t.push(vec!["partition".into(), k.to_string(), fmt_f64(s)]);
        }
        for &(e, v) in &self.truncated {
            t.push(vec!["truncated".into(), fmt_f64(e), fmt_f64(v)]);
        }
        t.push(vec!["jump_squares".into(), String::new(), fmt_f64(self.jump_square_sum)]);
        t
    }
}

/// Dyadic partitions `j T / 2^k` for `k` in `levels`.
pub fn partition_sum_diagnostic(p: &CadlagPath, levels: &[u32], eps_list: &[f64]) -> Result<PartitionDiagnostic> {
    let horizon = p.horizon();
    let mut partition = Vec::with_capacity(levels.len());
    for &k in levels {
        let m = 1u64 << k;
        let mut prev = p.first_value();
        let mut idx = 0;
        let mut sum = crate::sum::CompensatedSum::new();
        for j in 1..=m {
            let t = if j == m { horizon } else { horizon * j as f64 / m as f64 };
            while idx + 1 < p.len() && p.times()[idx + 1] <= t {
                idx += 1;
            }
            let v = p.values()[idx];
            sum.add((v - prev) * (v - prev));
            prev = v;
        }
        partition.push((m, sum.value()));
    }
    let truncated = eps_list
        .iter()
        .map(|&e| Ok((e, e * triple_of_values(p.values(), TruncationParam::new(e)?).ttv)))
        .collect::<Result<_>>()?;
    Ok(PartitionDiagnostic { partition, truncated, jump_square_sum: p.jumps(horizon)?.sum_squares })
}

/// Dyadic levels up to the sample resolution of `p`.
pub fn default_partition_levels(p: &CadlagPath) -> Vec<u32> {
    let top = ((p.len().max(3) - 1) as f64).log2().ceil() as u32;
    (0..=top.min(24)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpOrderLevel {
    pub eps: f64,
    pub normalized_ttv: ReplicateStats,
    pub normalized_tv: ReplicateStats,
    /// `eps TTV <= eps TV` on every replicate.
    pub bound_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpOrderReport {
    pub levels: Vec<JumpOrderLevel>,
    pub partitions: Vec<PartitionDiagnostic>,
    #[serde(skip)]
    pub table: Table,
}

pub fn pure_jump_order(source: &PathSource, eps_list: &[f64]) -> Result<JumpOrderReport> {
    let runs: Vec<(Vec<(f64, f64)>, PartitionDiagnostic)> = source.map(|_, p| {
        let tv = total_variation_of_values(p.values());
        let per = eps_list
            .iter()
            .map(|&e| Ok((e * triple_of_values(p.values(), TruncationParam::new(e)?).ttv, e * tv)))
            .collect::<Result<Vec<_>>>()?;
        let diag = partition_sum_diagnostic(&p, &default_partition_levels(&p), eps_list)?;
        Ok((per, diag))
    })?;
    let mut table = Table::new("pure_jump_order", &["replicate", "eps", "eps_ttv", "eps_tv", "bound_holds"]);
    for (r, (per, _)) in runs.iter().enumerate() {
        for (k, &(a, b)) in per.iter().enumerate() {
            table.push(vec![r.to_string(), fmt_f64(eps_list[k]), fmt_f64(a), fmt_f64(b), (a <= b).to_string()]);
        }
    }
    let levels = eps_list
        .iter()
        .enumerate()
        .map(|(k, &eps)| JumpOrderLevel {
            eps,
            normalized_ttv: ReplicateStats::new(runs.iter().map(|r| r.0[k].0).collect()),
            normalized_tv: ReplicateStats::new(runs.iter().map(|r| r.0[k].1).collect()),
            bound_holds: runs.iter().all(|r| r.0[k].0 <= r.0[k].1),
        })
        .collect();
    Ok(JumpOrderReport { levels, partitions: runs.into_iter().map(|r| r.1).collect(), table })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CovariationReport {
    pub rho: f64,
    pub eps: f64,
    pub target_end: f64,
    pub end_value: ReplicateStats,
    pub abs_err: ReplicateStats,
    pub symmetric: bool,
    #[serde(skip)]
    pub table: Table,
}

pub fn covariation_experiment(
    sim: &SimConfig,
    replicates: usize,
    rho: f64,
    eps: f64,
    grid: &[f64],
) -> Result<CovariationReport> {
    let target = |t: f64| rho * sim.sigma * sim.sigma * t;
    let runs: Vec<(Vec<f64>, f64, bool)> = replicate_configs(sim, replicates)
        .into_par_iter()
        .map(|cfg| {
            let (x, y) = correlated_brownian_pair(&cfg, rho)?;
            let end = x.horizon();
            let xy = covariation(&x, &y, eps, grid)?;
            let yx = covariation(&y, &x, eps, grid)?;
            let last = covariation(&x, &y, eps, &[end])?.last();
            Ok((xy.values.clone(), last, xy.values == yx.values))
        })
        .collect::<Result<_>>()?;
    let mut table = Table::new("covariation", &["replicate", "t", "eps", "covariation", "target"]);
    for (r, (vals, _, _)) in runs.iter().enumerate() {
        for (&t, &v) in grid.iter().zip(vals) {
            table.push(vec![r.to_string(), fmt_f64(t), fmt_f64(eps), fmt_f64(v), fmt_f64(target(t))]);
        }
    }
    let target_end = target(sim.horizon);
    Ok(CovariationReport {
        rho,
        eps,
        target_end,
        end_value: ReplicateStats::new(runs.iter().map(|r| r.1).collect()),
        abs_err: ReplicateStats::new(runs.iter().map(|r| (r.1 - target_end).abs()).collect()),
        symmetric: runs.iter().all(|r| r.2),
        table,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualLevel {
    pub eps: f64,
    pub thm2: ReplicateStats,
    pub prop1: ReplicateStats,
    pub relation: ReplicateStats,
    pub gap_prime: ReplicateStats,
    pub gap_x: ReplicateStats,
    pub bracket_end: ReplicateStats,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub integrand: String,
    /// Absolute residuals per level.
    pub levels: Vec<ResidualLevel>,
    /// Sup-distance between consecutive bracket levels, per replicate.
    pub cauchy: Vec<ReplicateStats>,
    #[serde(skip)]
    pub table: Table,
}

pub fn follmer_residuals(
    source: &PathSource,
    f: &dyn IntegrandFunction,
    eps_list: &[f64],
) -> Result<ResidualReport> {
    let runs: Vec<Vec<(crate::follmer::IntegralReport, Vec<f64>)>> = source.map(|_, p| {
        eps_list
            .iter()
            .map(|&eps| {
                let a = Approximation::backlash(&p, eps)?;
                let rep = a.report(f, p.horizon())?;
                Ok((rep, a.bracket))
            })
            .collect()
    })?;
    let mut table = Table::new(
        "follmer_residuals",
        &[
            "replicate", "eps", "I_X", "I_Xprime", "I_Xsecond", "bracket_term", "jump_term", "residual_thm2",
            "residual_prop1", "residual_relation", "midpoint_gap_prime", "midpoint_gap_x",
        ],
    );
    for (r, per) in runs.iter().enumerate() {
        for (rep, _) in per {
            let nums = [
                rep.i_x, rep.i_x_prime, rep.i_x_second, rep.bracket_term, rep.jump_term, rep.residual_thm2,
                rep.residual_prop1, rep.residual_relation, rep.midpoint_gap_prime, rep.midpoint_gap_x,
            ];
            let mut cells = vec![r.to_string(), fmt_f64(rep.eps)];
            cells.extend(nums.iter().map(|&v| fmt_f64(v)));
            table.push(cells);
        }
    }
    let levels = eps_list
        .iter()
        .enumerate()
        .map(|(k, &eps)| {
            let col = |g: &dyn Fn(&crate::follmer::IntegralReport) -> f64| {
                ReplicateStats::new(runs.iter().map(|r| g(&r[k].0).abs()).collect())
            };
            ResidualLevel {
                eps,
                thm2: col(&|r| r.residual_thm2),
                prop1: col(&|r| r.residual_prop1),
                relation: col(&|r| r.residual_relation),
                gap_prime: col(&|r| r.midpoint_gap_prime),
                gap_x: col(&|r| r.midpoint_gap_x),
                bracket_end: ReplicateStats::new(runs.iter().map(|r| *r[k].1.last().unwrap_or(&0.0)).collect()),
            }
        })
        .collect();
    let cauchy = (1..eps_list.len())
        .map(|k| {
            ReplicateStats::new(
                runs.iter()
                    .map(|r| r[k - 1].1.iter().zip(&r[k].1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
                    .collect(),
            )
        })
        .collect();
    Ok(ResidualReport { integrand: f.label(), levels, cauchy, table })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub target_slope: Option<f64>,
    pub slope: ReplicateStats,
    #[serde(skip)]
    pub table: Table,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

pub fn stable_scaling(source: &PathSource, eps_list: &[f64], target_slope: Option<f64>) -> Result<ScalingReport> {
    let runs: Vec<Vec<f64>> = source.map(|_, p| {
        eps_list.iter().map(|&e| Ok(triple_of_values(p.values(), TruncationParam::new(e)?).ttv)).collect()
    })?;
    let mut table = Table::new("stable_scaling", &["replicate", "eps", "ttv", "slope"]);
    let mut slopes = Vec::with_capacity(runs.len());
    for (r, ttv) in runs.iter().enumerate() {
        let slope = log_log_slope(eps_list, ttv);
        slopes.push(slope);
        for (&e, &v) in eps_list.iter().zip(ttv) {
            table.push(vec![r.to_string(), fmt_f64(e), fmt_f64(v), fmt_f64(slope)]);
        }
    }
    Ok(ScalingReport { target_slope, slope: ReplicateStats::new(slopes), table })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub paths: usize,
    pub eps_list: Vec<f64>,
    pub checks: Vec<CheckTally>,
}

impl SuiteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new("identity_suite", &["check", "passed", "failed", "first_failure"]);
        for c in &self.checks {
            t.push(vec![
                c.name.clone(),
                c.passed.to_string(),
                c.failed.to_string(),
                c.first_failure.clone().unwrap_or_default(),
            ]);
        }
        t
    }
}

fn merge_tallies(parts: Vec<Vec<CheckTally>>, names: &[&str]) -> Vec<CheckTally> {
    let mut total: Vec<CheckTally> = names.iter().map(|n| CheckTally::new(n)).collect();
    for part in parts {
        for (acc, t) in total.iter_mut().zip(part) {
            acc.merge(t);
        }
    }
    total
}

/// Every exact identity on `paths` random paths.
pub fn identity_suite(seed: u64, paths: usize, max_len: usize, eps_list: &[f64]) -> SuiteReport {
    let parts: Vec<Vec<CheckTally>> = (0..paths as u64)
        .into_par_iter()
        .map(|i| battery::run_all(&battery::battery_path(seed, i, max_len), eps_list))
        .collect();
    SuiteReport { paths, eps_list: eps_list.to_vec(), checks: merge_tallies(parts, &battery::SUITE_CHECKS) }
}

/// Crossing-count integrals against truncated variations on random paths.
pub fn crossing_identity(seed: u64, paths: usize, max_len: usize, eps_list: &[f64]) -> SuiteReport {
    let parts: Vec<Vec<CheckTally>> = (0..paths as u64)
        .into_par_iter()
        .map(|i| {
            let p = battery::battery_path(seed, i, max_len);
            let mut t = CheckTally::new("crossings");
            for &e in eps_list {
                t.record(battery::check_crossings(p.values(), e));
            }
            vec![t]
        })
        .collect();
    SuiteReport { paths, eps_list: eps_list.to_vec(), checks: merge_tallies(parts, &["crossings"]) }
}
