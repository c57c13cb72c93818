//! Experiment runner: configuration, execution and CSV/JSON artifacts.

pub mod battery;
pub mod experiments;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::path::{check_grid, parse_grid, CadlagPath};
use crate::simulate::{ProcessKind, SimConfig, RNG_IDENTITY};
use crate::stieltjes::Preset;

pub use experiments::{
    convergence, covariation_experiment, crossing_identity, default_partition_levels, follmer_residuals,
    identity_suite, log_log_slope, partition_sum_diagnostic, pure_jump_order, shrinks_within_noise,
    stable_scaling, PartitionDiagnostic, PathSource, ReplicateStats,
};

pub const CODE_VERSION: &str = concat!("truncvar-core ", env!("CARGO_PKG_VERSION"));

/// A named CSV table with a header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self { name: name.to_string(), header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Thm1Convergence,
    CrossingIdentity,
    Covariation,
    FollmerResiduals,
    PureJumpOrder,
    StableScaling,
    IdentitySuite,
}

impl ExperimentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Thm1Convergence => "thm1_convergence",
            Self::CrossingIdentity => "crossing_identity",
            Self::Covariation => "covariation",
            Self::FollmerResiduals => "follmer_residuals",
            Self::PureJumpOrder => "pure_jump_order",
            Self::StableScaling => "stable_scaling",
            Self::IdentitySuite => "identity_suite",
        }
    }

    /// Simulation used when the configuration names none.
    pub fn default_sim(self) -> SimConfig {
        match self {
            Self::PureJumpOrder => SimConfig { lambda: 5.0, ..SimConfig::new(ProcessKind::CompoundPoisson, 1 << 20, 0) },
            Self::StableScaling => SimConfig::new(ProcessKind::AlphaStable, 1 << 20, 0),
            _ => SimConfig::brownian(1 << 20, 0),
        }
    }

    fn default_eps_list(self) -> Vec<f64> {
        match self {
            Self::CrossingIdentity | Self::IdentitySuite => vec![1.0, 0.2, 0.05],
            Self::PureJumpOrder => vec![0.08, 0.04, 0.02, 0.01],
            _ => vec![0.08, 0.04, 0.02],
        }
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| invalid(format!("unknown experiment `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub sim: Option<SimConfig>,
    /// CSV path used instead of simulation (single replicate).
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub eps_list: Option<Vec<f64>>,
    /// `start:end:step` or a comma-separated list of times.
    #[serde(default)]
    pub grid: Option<String>,
    #[serde(default = "one")]
    pub replicates: usize,
    /// Seed of the random-path batteries.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "half")]
    pub rho: f64,
    #[serde(default = "cos")]
    pub integrand: String,
    /// Number of random paths in the batteries.
    #[serde(default = "thousand")]
    pub paths: usize,
    #[serde(default = "five_hundred")]
    pub max_len: usize,
    /// Quadratic-variation rate of an input path, when known.
    #[serde(default)]
    pub target_rate: Option<f64>,
    /// Turns the headline statistic of a Monte Carlo experiment into a hard
    /// assertion.
    #[serde(default)]
    pub tolerance: Option<f64>,
}

fn one() -> usize {
    1
}
fn half() -> f64 {
    0.5
}
fn cos() -> String {
    "cos".into()
}
fn thousand() -> usize {
    1000
}
fn five_hundred() -> usize {
    500
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        serde_json::from_value(serde_json::json!({ "experiment": experiment })).expect("defaults deserialize")
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn sim(&self) -> SimConfig {
        self.sim.clone().unwrap_or_else(|| self.experiment.default_sim())
    }

    pub fn eps_list(&self) -> Vec<f64> {
        self.eps_list.clone().unwrap_or_else(|| self.experiment.default_eps_list())
    }

    pub fn validate(&self) -> Result<()> {
        let eps = self.eps_list();
        if eps.is_empty() || eps.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(invalid("eps_list must hold finite positive values"));
        }
        if eps.windows(2).any(|w| w[1] >= w[0]) {
            return Err(invalid("eps_list must be strictly decreasing"));
        }
        if self.replicates == 0 {
            return Err(invalid("replicates must be >= 1"));
        }
        if self.paths == 0 || self.max_len == 0 {
            return Err(invalid("paths and max_len must be >= 1"));
        }
        if !(-1.0..=1.0).contains(&self.rho) {
            return Err(invalid(format!("rho must lie in [-1, 1], got {}", self.rho)));
        }
        if self.input.is_none() {
            self.sim().validate()?;
        }
        if let Some(g) = &self.grid {
            check_grid(&parse_grid(g)?)?;
        }
        self.integrand.parse::<Preset>()?;
        Ok(())
    }

    fn grid(&self, horizon: f64) -> Result<Vec<f64>> {
        match &self.grid {
            Some(g) => parse_grid(g),
            None => Ok((0..=100).map(|k| horizon * k as f64 / 100.0).collect()),
        }
    }

    fn source(&self) -> Result<(PathSource, Option<f64>, f64)> {
        match &self.input {
            Some(path) => {
                let p = CadlagPath::from_csv_file(path)?;
                let horizon = p.horizon();
                Ok((PathSource::Fixed(p), self.target_rate, horizon))
            }
            None => {
                let sim = self.sim();
                let rate = self.target_rate.unwrap_or(sim.continuous_qv_rate());
                Ok((PathSource::Simulated { sim: sim.clone(), replicates: self.replicates }, Some(rate), sim.horizon))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self { name: name.to_string(), passed, detail }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    pub assertions: Vec<Assertion>,
    pub summary: serde_json::Value,
    pub tables: Vec<Table>,
}

impl RunOutput {
    pub fn all_pass(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    /// 0 when every hard assertion holds, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    /// Writes `<experiment>_<table>.csv` with a `.meta.json` sidecar for each
    /// table plus `<experiment>_summary.json`. Returns the written paths.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let prefix = self.experiment.as_str();
        for t in &self.tables {
            let csv_path = dir.join(format!("{prefix}_{}.csv", t.name));
            t.write_csv(std::io::BufWriter::new(std::fs::File::create(&csv_path)?))?;
            let meta = metadata(&self.config, &t.header);
            let meta_path = csv_path.with_extension("meta.json");
            std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)?)?;
            written.push(csv_path);
            written.push(meta_path);
        }
        let summary = serde_json::json!({
            "experiment": prefix,
            "assertions": self.assertions,
            "summary": self.summary,
            "metadata": metadata(&self.config, &[]),
        });
        let path = dir.join(format!("{prefix}_summary.json"));
        std::fs::write(&path, serde_json::to_string_pretty(&summary)?)?;
        written.push(path);
        Ok(written)
    }
}

/// Sidecar contents for generated files.
pub fn metadata(config: &impl Serialize, columns: &[String]) -> serde_json::Value {
    serde_json::json!({
        "config": config,
        "columns": columns,
        "rng": RNG_IDENTITY,
        "code_version": CODE_VERSION,
    })
}

fn to_json(v: &impl Serialize) -> Result<serde_json::Value> {
    Ok(serde_json::to_value(v)?)
}

/// Runs an experiment. Artifacts are written when `output_dir` is set.
pub fn run(cfg: &ExperimentConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let eps_list = cfg.eps_list();
    let mut assertions = Vec::new();
    let mut tables = Vec::new();
    let summary = match cfg.experiment {
        ExperimentKind::Thm1Convergence => {
            let (source, rate, horizon) = cfg.source()?;
            let grid = cfg.grid(horizon)?;
            let rep = convergence(&source, rate.unwrap_or(f64::NAN), &eps_list, &grid)?;
            tables.push(rep.table.clone());
            let first = match &source {
                PathSource::Fixed(p) => p.clone(),
                PathSource::Simulated { sim, .. } => crate::simulate::generate(sim)?,
            };
            let diag = partition_sum_diagnostic(&first, &default_partition_levels(&first), &eps_list)?;
            tables.push(diag.table());
            if let Some(tol) = cfg.tolerance {
                let last = rep.levels.last().expect("non-empty ladder");
                assertions.push(Assertion::new(
                    "median_sup_err",
                    last.sup_err.median <= tol,
                    format!("median sup error {:.5} at eps {} (tolerance {tol})", last.sup_err.median, last.eps),
                ));
            }
            serde_json::json!({ "convergence": to_json(&rep)?, "partition": to_json(&diag)? })
        }
        ExperimentKind::CrossingIdentity => {
            let rep = crossing_identity(cfg.seed, cfg.paths, cfg.max_len, &eps_list);
            tables.push(rep.table());
            for c in &rep.checks {
                assertions.push(Assertion::new(&c.name, c.failed == 0, format!("{} passed, {} failed", c.passed, c.failed)));
            }
            to_json(&rep)?
        }
        ExperimentKind::Covariation => {
            let sim = cfg.sim();
            let grid = cfg.grid(sim.horizon)?;
            let eps = *eps_list.last().expect("non-empty ladder");
            let rep = covariation_experiment(&sim, cfg.replicates, cfg.rho, eps, &grid)?;
            tables.push(rep.table.clone());
            assertions.push(Assertion::new("symmetry", rep.symmetric, "covariation(x, y) == covariation(y, x)".into()));
            if let Some(tol) = cfg.tolerance {
                assertions.push(Assertion::new(
                    "median_abs_err",
                    rep.abs_err.median <= tol,
                    format!("median |cov - target| {:.5} (tolerance {tol})", rep.abs_err.median),
                ));
            }
            to_json(&rep)?
        }
        ExperimentKind::FollmerResiduals => {
            let (source, _, _) = cfg.source()?;
            let f: Preset = cfg.integrand.parse()?;
            let rep = follmer_residuals(&source, &f, &eps_list)?;
            tables.push(rep.table.clone());
            if let Some(tol) = cfg.tolerance {
                let last = rep.levels.last().expect("non-empty ladder");
                assertions.push(Assertion::new(
                    "median_residual_thm2",
                    last.thm2.median <= tol,
                    format!("median |residual_thm2| {:.5} (tolerance {tol})", last.thm2.median),
                ));
            }
            to_json(&rep)?
        }
        ExperimentKind::PureJumpOrder => {
            let (source, _, _) = cfg.source()?;
            let rep = pure_jump_order(&source, &eps_list)?;
            tables.push(rep.table.clone());
            if let Some(d) = rep.partitions.first() {
                tables.push(d.table());
            }
            for l in &rep.levels {
                assertions.push(Assertion::new(
                    &format!("ttv_le_tv_eps_{}", l.eps),
                    l.bound_holds,
                    format!("median eps*TTV {:.5} <= median eps*TV {:.5}", l.normalized_ttv.median, l.normalized_tv.median),
                ));
            }
            to_json(&rep)?
        }
        ExperimentKind::StableScaling => {
            let (source, _, _) = cfg.source()?;
            let sim = cfg.sim();
            let target = (cfg.input.is_none() && sim.kind == ProcessKind::AlphaStable).then(|| 1.0 - sim.alpha);
            let rep = stable_scaling(&source, &eps_list, target)?;
            tables.push(rep.table.clone());
            if let (Some(tol), Some(t)) = (cfg.tolerance, target) {
                assertions.push(Assertion::new(
                    "median_slope",
                    (rep.slope.median - t).abs() <= tol,
                    format!("median slope {:.4} vs {t} (tolerance {tol})", rep.slope.median),
                ));
            }
            to_json(&rep)?
        }
        ExperimentKind::IdentitySuite => {
            let rep = identity_suite(cfg.seed, cfg.paths, cfg.max_len, &eps_list);
            tables.push(rep.table());
            for c in &rep.checks {
                assertions.push(Assertion::new(&c.name, c.failed == 0, format!("{} passed, {} failed", c.passed, c.failed)));
            }
            to_json(&rep)?
        }
    };
    let out = RunOutput { experiment: cfg.experiment, config: cfg.clone(), assertions, summary, tables };
    if let Some(dir) = &cfg.output_dir {
        out.write(dir)?;
    }
    Ok(out)
}
