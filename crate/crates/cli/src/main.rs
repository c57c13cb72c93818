use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use truncvar_core::crossings::{crossing_counts, crossing_integral, CrossingKind};
use truncvar_core::follmer::{covariation, qv_bracket, Approximation, ApproximationFamily, BacklashFamily, IdentityFamily};
use truncvar_core::harness::{self, ExperimentConfig, ExperimentKind};
use truncvar_core::path::{fmt_f64, parse_grid, read_grid_csv};
use truncvar_core::simulate::{generate, ProcessKind, SimConfig};
use truncvar_core::skorohod::{audit_backlash, backlash, envelope_energy};
use truncvar_core::stieltjes::Preset;
use truncvar_core::variation::{variation_curve, variation_triple};
use truncvar_core::{CadlagPath, Error, JumpDesignation, TruncationParam};

type Result<T> = std::result::Result<T, Error>;

#[derive(Parser)]
#[command(name = "truncvar", version, about = "Truncated variation and pathwise quadratic variation of sampled paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a path and write it as `t,x[,jump]` CSV.
    Simulate(SimulateArgs),
    /// Truncated variations at one level, or running curves on a grid.
    Compute(ComputeArgs),
    /// Play-operator envelope as `t,x,xeps` CSV.
    Envelope(EnvelopeArgs),
    /// Interval-crossing counts at a level, or their integral over levels.
    Crossings(CrossingsArgs),
    /// Bracket curves as `t,eps,qv` CSV.
    Qv(QvArgs),
    /// The three pathwise integrals of a preset integrand.
    Integrate(IntegrateArgs),
    /// Covariation of two paths on a common grid.
    Covar(CovarArgs),
    /// Run a configured experiment.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "brownian")]
    kind: String,
    #[arg(long, default_value_t = 1024)]
    n: usize,
    #[arg(long = "T", default_value_t = 1.0)]
    horizon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 0.0)]
    drift: f64,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    #[arg(long, default_value_t = 1.0)]
    jump_sd: f64,
    #[arg(long, default_value_t = 1.5)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    stable_scale: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ComputeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    /// Defaults to the last sample time.
    #[arg(long)]
    upto: Option<f64>,
    /// One-column CSV of evaluation times; switches the output to a curve.
    #[arg(long)]
    curve: Option<PathBuf>,
    /// Inline grid (`start:end:step` or a list) for curve output.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EnvelopeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    halfwidth: f64,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Print the structural audit and energy identity as JSON.
    #[arg(long)]
    audit: bool,
}

#[derive(Args)]
struct CrossingsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    level: Option<f64>,
    /// `up`, `down` or `total`.
    #[arg(long)]
    integral: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    from: f64,
    /// Defaults to the last sample time.
    #[arg(long)]
    to: Option<f64>,
}

#[derive(Args)]
struct QvArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "0.08,0.04,0.02")]
    eps_list: Vec<f64>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IntegrateArgs {
    #[arg(long)]
    input: PathBuf,
    /// `cos`, `sin`, `exp`, `x`, `x2`, `const:<c>` or `poly:<a0>,<a1>,...`.
    #[arg(long = "f", default_value = "cos")]
    integrand: String,
    #[arg(long)]
    eps: f64,
    /// Defaults to the last sample time.
    #[arg(long)]
    t: Option<f64>,
    /// `backlash` or `identity`.
    #[arg(long, default_value = "backlash")]
    family: String,
    /// Emit the full identity report.
    #[arg(long)]
    report: bool,
}

#[derive(Args)]
struct CovarArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    eps_list: Option<Vec<f64>>,
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Seed of the simulation (and of the random-path batteries).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    max_len: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn grid_or_samples(grid: Option<&str>, p: &CadlagPath) -> Result<Vec<f64>> {
    match grid {
        Some(g) => parse_grid(g),
        None => Ok(p.times().to_vec()),
    }
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let cfg = SimConfig {
        kind: a.kind.parse::<ProcessKind>()?,
        horizon: a.horizon,
        steps: a.n,
        seed: a.seed,
        sigma: a.sigma,
        drift: a.drift,
        lambda: a.lambda,
        jump_sd: a.jump_sd,
        alpha: a.alpha,
        stable_scale: a.stable_scale,
    };
    let p = generate(&cfg)?;
    p.to_csv_file(&a.out)?;
    let mut columns = vec!["t".to_string(), "x".to_string()];
    if matches!(p.jump_designation(), JumpDesignation::Designated(_)) {
        columns.push("jump".into());
    }
    let meta = harness::metadata(&cfg, &columns);
    std::fs::write(a.out.with_extension("meta.json"), serde_json::to_string_pretty(&meta)?)?;
    Ok(())
}

fn compute(a: ComputeArgs) -> Result<()> {
    let p = CadlagPath::from_csv_file(&a.input)?;
    let eps = TruncationParam::new(a.eps)?;
    let grid = match (&a.curve, &a.grid) {
        (Some(file), _) => Some(read_grid_csv(File::open(file)?)?),
        (None, Some(g)) => Some(parse_grid(g)?),
        (None, None) => None,
    };
    match grid {
        Some(grid) => {
            let curve = variation_curve(&p, eps, &grid)?;
            let mut out = sink(a.output.as_deref())?;
            writeln!(out, "t,ttv,utv,dtv")?;
            for (t, v) in curve.grid.iter().zip(&curve.triples) {
                writeln!(out, "{},{},{},{}", fmt_f64(*t), fmt_f64(v.ttv), fmt_f64(v.utv), fmt_f64(v.dtv))?;
            }
            out.flush()?;
        }
        None => {
            let upto = a.upto.unwrap_or(p.horizon());
            let t = variation_triple(&p, eps, upto)?;
            let value = serde_json::json!({ "ttv": t.ttv, "utv": t.utv, "dtv": t.dtv, "eps": a.eps, "upto": upto });
            match &a.output {
                Some(path) => std::fs::write(path, serde_json::to_string_pretty(&value)?)?,
                None => print_json(&value)?,
            }
        }
    }
    Ok(())
}

fn envelope(a: EnvelopeArgs) -> Result<()> {
    let p = CadlagPath::from_csv_file(&a.input)?;
    let e = backlash(&p, a.halfwidth)?;
    if a.output.is_some() || !a.audit {
        let mut out = sink(a.output.as_deref())?;
        writeln!(out, "t,x,xeps")?;
        for ((t, x), y) in p.times().iter().zip(p.values()).zip(e.env.values()) {
            writeln!(out, "{},{},{}", fmt_f64(*t), fmt_f64(*x), fmt_f64(*y))?;
        }
        out.flush()?;
    }
    if a.audit {
        let audit = audit_backlash(&p, a.halfwidth, 1e-12)?;
        let energy = envelope_energy(&e, p.horizon())?;
        print_json(&serde_json::json!({ "audit": audit, "all_pass": audit.all_pass(), "energy": energy }))?;
    }
    Ok(())
}

fn crossings(a: CrossingsArgs) -> Result<()> {
    let p = CadlagPath::from_csv_file(&a.input)?;
    let window = (a.from, a.to.unwrap_or(p.horizon()));
    match (a.level, &a.integral) {
        (Some(y), None) => print_json(&crossing_counts(&p, y, a.eps, window)?),
        (None, Some(kind)) => {
            let kind: CrossingKind = kind.parse()?;
            let value = crossing_integral(&p, a.eps, kind, window)?;
            print_json(&serde_json::json!({ "kind": kind, "eps": a.eps, "window": window, "value": value }))
        }
        _ => Err(Error::InvalidParameter("pass exactly one of --level or --integral".into())),
    }
}

fn qv(a: QvArgs) -> Result<()> {
    let p = CadlagPath::from_csv_file(&a.input)?;
    let grid = grid_or_samples(a.grid.as_deref(), &p)?;
    let q = qv_bracket(&p, &a.eps_list, &grid)?;
    for w in &q.warnings {
        eprintln!("warning: {w}");
    }
    let mut out = sink(a.output.as_deref())?;
    writeln!(out, "t,eps,qv")?;
    for level in &q.levels {
        for (t, v) in q.grid.iter().zip(&level.values) {
            writeln!(out, "{},{},{}", fmt_f64(*t), fmt_f64(level.eps), fmt_f64(*v))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn integrate(a: IntegrateArgs) -> Result<()> {
    let p = CadlagPath::from_csv_file(&a.input)?;
    let f: Preset = a.integrand.parse()?;
    let family: &dyn ApproximationFamily = match a.family.as_str() {
        "backlash" => &BacklashFamily,
        "identity" => &IdentityFamily,
        other => return Err(Error::InvalidParameter(format!("unknown family `{other}`"))),
    };
    let t = a.t.unwrap_or(p.horizon());
    let approx = Approximation::new(&p, family, a.eps)?;
    let report = approx.report(&f, t)?;
    if a.report {
        print_json(&report)
    } else {
        print_json(&serde_json::json!({
            "eps": report.eps,
            "t": report.t,
            "I_X": report.i_x,
            "I_Xprime": report.i_x_prime,
            "I_Xsecond": report.i_x_second,
        }))
    }
}

fn covar(a: CovarArgs) -> Result<()> {
    let x = CadlagPath::from_csv_file(&a.x)?;
    let y = CadlagPath::from_csv_file(&a.y)?;
    let grid = grid_or_samples(a.grid.as_deref(), &x)?;
    let c = covariation(&x, &y, a.eps, &grid)?;
    let mut out = sink(a.output.as_deref())?;
    writeln!(out, "t,covariation")?;
    for (t, v) in c.grid.iter().zip(&c.values) {
        writeln!(out, "{},{}", fmt_f64(*t), fmt_f64(*v))?;
    }
    out.flush()?;
    Ok(())
}

fn experiment_config(a: ExperimentArgs) -> Result<ExperimentConfig> {
    let mut cfg = match (&a.config, &a.experiment) {
        (Some(path), _) => ExperimentConfig::from_json_file(path)?,
        (None, Some(id)) => ExperimentConfig::new(id.parse::<ExperimentKind>()?),
        (None, None) => return Err(Error::InvalidParameter("pass --config or --experiment".into())),
    };
    if let (Some(_), Some(id)) = (&a.config, &a.experiment) {
        cfg.experiment = id.parse()?;
    }
    if a.input.is_some() {
        cfg.input = a.input;
    }
    if a.eps_list.is_some() {
        cfg.eps_list = a.eps_list;
    }
    if a.grid.is_some() {
        cfg.grid = a.grid;
    }
    if let Some(r) = a.replicates {
        cfg.replicates = r;
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
        cfg.sim = Some(SimConfig { seed, ..cfg.sim() });
    }
    if let Some(n) = a.n {
        cfg.sim = Some(SimConfig { steps: n, ..cfg.sim() });
    }
    if let Some(p) = a.paths {
        cfg.paths = p;
    }
    if let Some(m) = a.max_len {
        cfg.max_len = m;
    }
    if a.tolerance.is_some() {
        cfg.tolerance = a.tolerance;
    }
    if a.output_dir.is_some() {
        cfg.output_dir = a.output_dir;
    }
    Ok(cfg)
}

fn experiment(a: ExperimentArgs) -> Result<bool> {
    let cfg = experiment_config(a)?;
    let out = harness::run(&cfg)?;
    let mut stdout = io::stdout().lock();
    for a in &out.assertions {
        writeln!(stdout, "{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail)?;
    }
    writeln!(stdout, "{}", serde_json::to_string(&out.summary)?)?;
    Ok(out.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a).map(|_| true),
        Command::Compute(a) => compute(a).map(|_| true),
        Command::Envelope(a) => envelope(a).map(|_| true),
        Command::Crossings(a) => crossings(a).map(|_| true),
        Command::Qv(a) => qv(a).map(|_| true),
        Command::Integrate(a) => integrate(a).map(|_| true),
        Command::Covar(a) => covar(a).map(|_| true),
        Command::Experiment(a) => experiment(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
