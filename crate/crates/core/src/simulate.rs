//! Seeded generators of test paths with known continuous quadratic variation.
//!
//! All randomness comes from `ChaCha20Rng` seeded with `seed_from_u64`.
//! Independent components use separate ChaCha streams of the same key:
//! stream 0 drives the diffusion (and the first Brownian motion of a pair),
//! stream 1 drives the jump part (and the second Brownian motion).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Exp, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::path::CadlagPath;

/// Generator identity recorded in output metadata.
pub const RNG_IDENTITY: &str = "ChaCha20Rng (rand_chacha 0.9, seed_from_u64; stream 0 diffusion, stream 1 jumps)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    Brownian,
    CompoundPoisson,
    JumpDiffusion,
    AlphaStable,
}

impl std::str::FromStr for ProcessKind {
    type Err = crate::error::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brownian" => Ok(Self::Brownian),
            "compound_poisson" => Ok(Self::CompoundPoisson),
            "jump_diffusion" => Ok(Self::JumpDiffusion),
            "alpha_stable" => Ok(Self::AlphaStable),
            _ => Err(invalid(format!("unknown process kind `{s}`"))),
        }
    }
}

fn one() -> f64 {
    1.0
}

fn default_alpha() -> f64 {
    1.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub kind: ProcessKind,
    #[serde(rename = "T", alias = "horizon", default = "one")]
    pub horizon: f64,
    #[serde(rename = "n", alias = "steps")]
    pub steps: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub sigma: f64,
    #[serde(default)]
    pub drift: f64,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "one")]
    pub jump_sd: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub stable_scale: f64,
}

impl SimConfig {
    pub fn new(kind: ProcessKind, steps: usize, seed: u64) -> Self {
        Self {
            kind,
            horizon: 1.0,
            steps,
            seed,
            sigma: 1.0,
            drift: 0.0,
            lambda: 0.0,
            jump_sd: 1.0,
            alpha: default_alpha(),
            stable_scale: 1.0,
        }
    }

    pub fn brownian(steps: usize, seed: u64) -> Self {
        Self::new(ProcessKind::Brownian, steps, seed)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.horizon, self.sigma, self.drift, self.lambda, self.jump_sd, self.alpha, self.stable_scale];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(invalid("simulation parameters must be finite"));
        }
        if self.steps < 2 {
            return Err(invalid(format!("need at least 2 steps, got {}", self.steps)));
        }
        if !(self.horizon > 0.0) {
            return Err(invalid(format!("horizon must be > 0, got {}", self.horizon)));
        }
        if self.sigma < 0.0 || self.lambda < 0.0 || self.jump_sd < 0.0 {
            return Err(invalid("sigma, lambda and jump_sd must be >= 0"));
        }
        if self.kind == ProcessKind::AlphaStable {
            if !(self.alpha > 1.0 && self.alpha < 2.0) {
                return Err(invalid(format!("alpha must lie in (1, 2), got {}", self.alpha)));
            }
            if !(self.stable_scale > 0.0) {
                return Err(invalid("stable_scale must be > 0"));
            }
        }
        Ok(())
    }

    fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    fn uniform_grid(&self) -> Vec<f64> {
        let dt = self.dt();
        let mut grid: Vec<f64> = (0..=self.steps).map(|k| k as f64 * dt).collect();
        grid[self.steps] = self.horizon;
        grid
    }

    /// Continuous quadratic variation `[X]^cont_T` of the configured process.
    pub fn continuous_qv_rate(&self) -> f64 {
        match self.kind {
            ProcessKind::Brownian | ProcessKind::JumpDiffusion => self.sigma * self.sigma,
            ProcessKind::CompoundPoisson | ProcessKind::AlphaStable => 0.0,
        }
    }
}

fn rng_stream(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn brownian_values(cfg: &SimConfig, rng: &mut ChaCha20Rng) -> Vec<f64> {
    let dt = cfg.dt();
    let (mean, sd) = (cfg.drift * dt, cfg.sigma * dt.sqrt());
    let mut values = Vec::with_capacity(cfg.steps + 1);
    let mut x = 0.0;
    values.push(x);
    for _ in 0..cfg.steps {
        let z: f64 = StandardNormal.sample(rng);
        x += mean + sd * z;
        values.push(x);
    }
    values
}

/// Poisson jump times in `(0, T]` with Gaussian sizes.
fn poisson_jumps(cfg: &SimConfig, rng: &mut ChaCha20Rng) -> Vec<(f64, f64)> {
    let mut jumps = Vec::new();
    if cfg.lambda == 0.0 {
        return jumps;
    }
    let spacing = Exp::new(cfg.lambda).expect("lambda validated positive");
    let mut t = 0.0;
    loop {
        t += spacing.sample(rng);
        if t > cfg.horizon {
            break;
        }
        let z: f64 = StandardNormal.sample(rng);
        jumps.push((t, cfg.jump_sd * z));
    }
    jumps
}

/// Overlays jumps on a piecewise-constant base sampled on the uniform grid.
/// Jump times join the grid; a jump that falls exactly on a grid time is
/// attached to that sample.
fn overlay_jumps(cfg: &SimConfig, base: &[f64], jumps: &[(f64, f64)]) -> Result<CadlagPath> {
    let grid = cfg.uniform_grid();
    let mut times = Vec::with_capacity(grid.len() + jumps.len());
    let mut values = Vec::with_capacity(grid.len() + jumps.len());
    let mut marks = Vec::with_capacity(jumps.len());
    let mut jump_sum = 0.0;
    let mut next_jump = 0;
    for (k, &g) in grid.iter().enumerate() {
        while next_jump < jumps.len() && jumps[next_jump].0 < g {
            jump_sum += jumps[next_jump].1;
            times.push(jumps[next_jump].0);
            values.push(base[k - 1] + jump_sum);
            marks.push(times.len() - 1);
            next_jump += 1;
        }
        let mut landed = false;
        while next_jump < jumps.len() && jumps[next_jump].0 == g {
            jump_sum += jumps[next_jump].1;
            landed = true;
            next_jump += 1;
        }
        times.push(g);
        values.push(base[k] + jump_sum);
        if landed && k > 0 {
            marks.push(times.len() - 1);
        }
    }
    CadlagPath::new(times, values)?.with_designated_jumps(marks)
}

/// Standard symmetric strictly alpha-stable variate, characteristic function
/// `exp(-|u|^alpha)`, by the Chambers–Mallows–Stuck transform.
pub fn symmetric_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    use std::f64::consts::FRAC_PI_2;
    let v = loop {
        let u: f64 = rng.random();
        let v = (u - 0.5) * std::f64::consts::PI;
        if v.abs() < FRAC_PI_2 {
            break v;
        }
    };
    let w: f64 = Exp1.sample(rng);
    let w = w.max(f64::MIN_POSITIVE);
    (alpha * v).sin() / v.cos().powf(1.0 / alpha) * (((1.0 - alpha) * v).cos() / w).powf((1.0 - alpha) / alpha)
}

/// Deterministic path for a configuration.
pub fn generate(cfg: &SimConfig) -> Result<CadlagPath> {
    cfg.validate()?;
    match cfg.kind {
        ProcessKind::Brownian => {
            let values = brownian_values(cfg, &mut rng_stream(cfg.seed, 0));
            CadlagPath::new(cfg.uniform_grid(), values)?.with_designated_jumps(vec![])
        }
        ProcessKind::CompoundPoisson => {
            let jumps = poisson_jumps(cfg, &mut rng_stream(cfg.seed, 1));
            overlay_jumps(cfg, &vec![0.0; cfg.steps + 1], &jumps)
        }
        ProcessKind::JumpDiffusion => {
            let base = brownian_values(cfg, &mut rng_stream(cfg.seed, 0));
            let jumps = poisson_jumps(cfg, &mut rng_stream(cfg.seed, 1));
            overlay_jumps(cfg, &base, &jumps)
        }
        ProcessKind::AlphaStable => {
            let mut rng = rng_stream(cfg.seed, 0);
            let scale = cfg.stable_scale * cfg.dt().powf(1.0 / cfg.alpha);
            let mut x = 0.0;
            let mut values = Vec::with_capacity(cfg.steps + 1);
            values.push(x);
            for _ in 0..cfg.steps {
                x += scale * symmetric_stable(cfg.alpha, &mut rng);
                values.push(x);
            }
            CadlagPath::new(cfg.uniform_grid(), values)
        }
    }
}

/// Brownian pair with `[X, Y]_t = rho sigma^2 t`; `X` equals `generate` of the
/// Brownian configuration with the same seed.
pub fn correlated_brownian_pair(cfg: &SimConfig, rho: f64) -> Result<(CadlagPath, CadlagPath)> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(invalid(format!("rho must lie in [-1, 1], got {rho}")));
    }
    let cfg = SimConfig { kind: ProcessKind::Brownian, ..cfg.clone() };
    cfg.validate()?;
    let mut first = rng_stream(cfg.seed, 0);
    let mut second = rng_stream(cfg.seed, 1);
    let dt = cfg.dt();
    let (mean, sd) = (cfg.drift * dt, cfg.sigma * dt.sqrt());
    let comp = (1.0 - rho * rho).sqrt();
    let (mut x, mut y) = (0.0, 0.0);
    let mut xs = Vec::with_capacity(cfg.steps + 1);
    let mut ys = Vec::with_capacity(cfg.steps + 1);
    xs.push(x);
    ys.push(y);
    for _ in 0..cfg.steps {
        let z1: f64 = StandardNormal.sample(&mut first);
        let z2: f64 = StandardNormal.sample(&mut second);
        x += mean + sd * z1;
        y += mean + sd * (rho * z1 + comp * z2);
        xs.push(x);
        ys.push(y);
    }
    let grid = cfg.uniform_grid();
    Ok((
        CadlagPath::new(grid.clone(), xs)?.with_designated_jumps(vec![])?,
        CadlagPath::new(grid, ys)?.with_designated_jumps(vec![])?,
    ))
}

/// Random short path mixing Gaussian steps, occasional large jumps, flat
/// stretches and values snapped to a coarse lattice (to exercise ties).
pub fn random_test_path<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> CadlagPath {
    let n = rng.random_range(1..=max_len.max(1));
    let step = 10f64.powf(rng.random_range(-2.0..0.3));
    let jump_prob = rng.random_range(0.0..0.2);
    let snap = rng.random_bool(0.2);
    let mut x: f64 = rng.random_range(-1.0..1.0);
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        if i > 0 && !rng.random_bool(0.1) {
            let z: f64 = StandardNormal.sample(rng);
            x += step * z;
            if rng.random_bool(jump_prob) {
                let j: f64 = StandardNormal.sample(rng);
                x += 2.0 * j;
            }
        }
        values.push(if snap { (x * 4.0).round() / 4.0 } else { x });
    }
    let times = (0..n).map(|i| i as f64 / n as f64).collect();
    CadlagPath::new(times, values).expect("generated path is valid")
}
