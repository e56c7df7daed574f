//! `kcontract`: compound matrices, k-contraction certificates and trajectory
//! simulations from the command line.
//!
//! Exit codes: 0 certified / success, 1 certification failed, 2 unreadable or
//! invalid input, 3 compound too large, 4 nonlinearity lacks a certified
//! Jacobian bound, 5 internal error.

mod io;
mod report;
mod sim;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use kcontract::certify::find_scalar_gamma_p;
use kcontract::simulate::{hopfield_symmetric_equilibria, max_residual, random_initial_conditions, DEFAULT_SKIP_FRACTION};
use kcontract::{additive_compound, hopfield_config, multiplicative_compound, Dynamics, Error, ScalingQ, System, SystemConfig};
use serde_json::json;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Input(String),
    Output(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(m) => write!(f, "input: {m}"),
            CliError::Output(m) => write!(f, "output: {m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Output(_) => 5,
            CliError::Core(e) => match e {
                Error::Capacity { .. } => 3,
                Error::UnboundedNonlinearity(_) => 4,
                Error::Parse(_)
                | Error::InvalidDimension { .. }
                | Error::InvalidTuple(_)
                | Error::InvalidRank { .. }
                | Error::Shape(_)
                | Error::NonFinite { .. }
                | Error::SingularScaling { .. }
                | Error::NotPositiveDefinite(_)
                | Error::NotSymmetric { .. }
                | Error::InvalidParameter(_)
                | Error::WrongStructure(_) => 2,
                Error::Singular
                | Error::NoFeasibleGamma(_)
                | Error::InsufficientData { .. }
                | Error::Divergence { .. }
                | Error::NoConvergence(_) => 5,
            },
        }
    }
}

#[derive(Parser)]
#[command(name = "kcontract", version, about = "k-contraction analysis of Lurie and networked systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Multiplicative or additive k-th compound of a matrix (JSON or CSV input).
    Compound(CompoundArgs),
    /// Check the k-contraction conditions for a system description.
    Certify(CertifyArgs),
    /// Integrate trajectories, optionally with k-dimensional volume tracking.
    Simulate(SimulateArgs),
    /// Certification and simulation of the built-in 10-neuron Hopfield network.
    DemoHopfield(DemoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Mult,
    Add,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(clap::Args)]
struct CompoundArgs {
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "mult")]
    mode: Mode,
    /// Output format; defaults to CSV for `--out *.csv`, JSON otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CertifyArgs {
    config: PathBuf,
    /// Overrides `analysis.k`.
    #[arg(long)]
    k: Option<usize>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SimulateArgs {
    config: PathBuf,
    /// Initial state as comma-separated numbers, or `zeros`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "random")]
    x0: Option<String>,
    /// Number of random initial states in `[-radius, radius]^n`.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 3.0)]
    radius: f64,
    /// Track k-dimensional volumes (defaults to `analysis.k` when present).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 50.0)]
    tend: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    /// Record every n-th integration step.
    #[arg(long, default_value_t = 100)]
    sample_every: usize,
    /// Distance to an equilibrium counted as converged.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Directory for `traj_NNN.csv` files and `summary.json`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(clap::Args)]
struct DemoArgs {
    #[arg(long, default_value_t = 100)]
    trajectories: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 200.0)]
    tend: f64,
    #[arg(long, default_value_t = 1e-3)]
    dt: f64,
    #[arg(long, default_value_t = 100)]
    sample_every: usize,
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compound(a) => cmd_compound(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::DemoHopfield(a) => cmd_demo(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn cmd_compound(a: CompoundArgs) -> Result<u8, CliError> {
    let m = io::read_matrix(&a.input)?;
    let c = match a.mode {
        Mode::Mult => multiplicative_compound(&m, a.k)?,
        Mode::Add => additive_compound(&m, a.k)?,
    };
    let csv_out = match a.format {
        Some(Format::Csv) => true,
        Some(Format::Json) => false,
        None => a.out.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))),
    };
    let text = if csv_out { io::matrix_csv(c.body()) } else { io::matrix_json(c.body()) };
    match a.out {
        Some(path) => io::write_atomic(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn load_config(path: &Path) -> Result<SystemConfig, CliError> {
    let text = io::read_text(path)?;
    Ok(SystemConfig::from_json(&text)?)
}

fn kind_name(s: &System<f64>) -> &'static str {
    match s {
        System::Lurie(_) => "lurie",
        System::Network(_) => "network",
    }
}

fn cmd_certify(a: CertifyArgs) -> Result<u8, CliError> {
    let cfg = load_config(&a.config)?;
    let sys = cfg.build()?;
    let outcome = cfg.certify(a.k)?;
    let report = json!({
        "tool": "kcontract",
        "version": version(),
        "config": a.config.display().to_string(),
        "system": kind_name(&sys),
        "n": sys.dim(),
        "passed": outcome.certificate.passed,
        "outcome": outcome,
    });
    if let Some(out) = &a.out {
        io::write_atomic(out, &pretty(&report))?;
    }
    if a.json {
        print!("{}", pretty(&report));
    } else {
        print!("{}", report::certification_text(kind_name(&sys), sys.dim(), &outcome));
    }
    Ok(if outcome.certificate.passed { 0 } else { 1 })
}

fn parse_x0(text: &str, n: usize) -> Result<Vec<f64>, CliError> {
    if text.trim() == "zeros" {
        return Ok(vec![0.0; n]);
    }
    let x: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Input(format!("--x0: {s:?} is not a number"))))
        .collect::<Result<_, _>>()?;
    if x.len() != n {
        return Err(CliError::Input(format!("--x0 has {} entries, system dimension is {n}", x.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input("--x0 entries must be finite".into()));
    }
    Ok(x)
}

fn cmd_simulate(a: SimulateArgs) -> Result<u8, CliError> {
    let cfg = load_config(&a.config)?;
    let sys = cfg.build()?;
    let n = sys.dim();
    let initial = match (&a.x0, a.random) {
        (Some(x), _) => vec![parse_x0(x, n)?],
        (None, Some(count)) => random_initial_conditions(n, count, a.radius, a.seed),
        (None, None) => return Err(CliError::Input("give --x0 or --random N".into())),
    };
    let k = a.k.or(cfg.analysis().map(|an| an.k));

    // Volumes are measured in the certificate's metric when one is found.
    let mut certificate = None;
    let mut scaling = ScalingQ::identity(n);
    if let Some(k) = k {
        match cfg.certify(Some(k)) {
            Ok(out) => {
                if out.certificate.passed {
                    scaling = out.certificate.scaling.clone();
                }
                certificate = Some(out.certificate);
            }
            Err(Error::UnboundedNonlinearity(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    let equilibria = match &sys {
        System::Network(net) => hopfield_symmetric_equilibria(net).ok(),
        System::Lurie(_) => None,
    };

    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    }
    let records = sim::run_batch(&sim::BatchSpec {
        system: &sys,
        initial,
        k,
        scaling: scaling.clone(),
        t_end: a.tend,
        dt: a.dt,
        sample_every: a.sample_every,
        frame_seed: a.seed,
        equilibria: equilibria.as_ref(),
        tol: a.tol,
        out_dir: a.out_dir.as_deref(),
    })?;
    let counts = sim::counts(&records, equilibria.as_ref());
    let summary = json!({
        "tool": "kcontract",
        "version": version(),
        "config": a.config.display().to_string(),
        "seed": a.seed,
        "radius": a.radius,
        "dt": a.dt,
        "t_end": a.tend,
        "sample_every": a.sample_every,
        "k": k,
        "skip_fraction": DEFAULT_SKIP_FRACTION,
        "classification_tol": a.tol,
        "scaling_P": scaling.p(),
        "certificate": certificate,
        "equilibria": equilibria,
        "counts": counts,
        "trajectories": records,
    });
    if let Some(dir) = &a.out_dir {
        io::write_atomic(&dir.join("summary.json"), &pretty(&summary))?;
    }
    if a.json {
        print!("{}", pretty(&summary));
        return Ok(0);
    }
    println!(
        "system: {} (n = {n}), {} trajectories, t_end = {}, dt = {}",
        kind_name(&sys),
        records.len(),
        report::num(a.tend),
        report::num(a.dt)
    );
    if let Some(c) = &certificate {
        println!(
            "certificate for k = {}: {} (rate bound {})",
            c.k,
            if c.passed { "passed" } else { "not passed" },
            report::num(c.rate_bound)
        );
    }
    for r in &records {
        let mut line = format!("#{:03} {}", r.index, r.status);
        if let Some(i) = r.equilibrium {
            line += &format!(" -> e{}", i + 1);
        }
        if let Some(rate) = r.fitted_rate {
            line += &format!(", fitted log-volume slope {}", report::num(rate));
        }
        if let Some(t) = r.diverged_at {
            line += &format!(" at t = {}", report::num(t));
        }
        if let Some(res) = r.final_residual {
            line += &format!(", final |F| = {}", report::num(res));
        }
        println!("{line}");
    }
    if equilibria.is_some() {
        println!(
            "converged: {}/{} (per equilibrium {:?}), unclassified {}, diverged {}",
            counts.converged, counts.total, counts.per_equilibrium, counts.unclassified, counts.diverged
        );
    }
    Ok(0)
}

fn cmd_demo(a: DemoArgs) -> Result<u8, CliError> {
    let cfg = hopfield_config(2);
    let System::Network(net) = cfg.build()? else { unreachable!("the demo config is a network") };
    let n = net.dim();
    let out1 = cfg.certify(Some(1))?;
    let out2 = cfg.certify(Some(2))?;
    let search = find_scalar_gamma_p(&net, 2)?;
    let eq = hopfield_symmetric_equilibria(&net)?;
    let residual = max_residual(&net, &eq.points)?;
    let magnitude = eq.points.get(1).map(|p| p[0]);

    let scaling = ScalingQ::scalar(n, search.p)?;
    if let Some(dir) = &a.out_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
    }
    let system = System::Network(net.clone());
    let records = sim::run_batch(&sim::BatchSpec {
        system: &system,
        initial: random_initial_conditions(n, a.trajectories, 3.0, a.seed),
        k: Some(2),
        scaling,
        t_end: a.tend,
        dt: a.dt,
        sample_every: a.sample_every,
        frame_seed: a.seed,
        equilibria: Some(&eq),
        tol: 1e-4,
        out_dir: a.out_dir.as_deref(),
    })?;
    let counts = sim::counts(&records, Some(&eq));
    let rate = out2.certificate.rate_bound;
    let slopes: Vec<f64> = records.iter().filter_map(|r| r.fitted_rate).collect();
    let worst = slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let best = slopes.iter().copied().fold(f64::INFINITY, f64::min);
    let decay_ok = !slopes.is_empty() && slopes.len() == records.len() && worst <= -rate + 0.01;

    let summary = json!({
        "tool": "kcontract",
        "version": version(),
        "seed": a.seed,
        "dt": a.dt,
        "t_end": a.tend,
        "sample_every": a.sample_every,
        "radius": 3.0,
        "classification_tol": 1e-4,
        "skip_fraction": DEFAULT_SKIP_FRACTION,
        "k1": out1,
        "k2": out2,
        "scalar_search": search,
        "equilibria": eq,
        "equilibrium_residual": residual,
        "decay": { "rate_bound": rate, "slowest_slope": worst, "fastest_slope": best, "within_bound": decay_ok },
        "counts": counts,
        "trajectories": records,
    });
    if let Some(dir) = &a.out_dir {
        io::write_atomic(&dir.join("summary.json"), &pretty(&summary))?;
    }
    if a.json {
        print!("{}", pretty(&summary));
        return Ok(0);
    }

    use report::num;
    println!("Hopfield network: n = {n}, alpha = 0.5, W = 1 1^T, f = 0.07 tanh");
    for out in [&out1, &out2] {
        let c = &out.certificate;
        let cond = out.network_condition.as_ref().expect("network outcome");
        let verdict = if c.passed { format!("certified {}-contractive", c.k) } else { "not certified".into() };
        println!("k = {}: {} -> {verdict}", c.k, report::condition_line(cond, c.k));
    }
    println!(
        "gamma = {}, p = {}, eta1 = {}, eta2 = {}, rate bound (eta1 + eta2)/2 = {}",
        num(search.gamma),
        num(search.p),
        num(search.eta1),
        num(search.eta2),
        num(rate)
    );
    if let Some(m) = magnitude {
        println!("equilibria: e1 = 0, e2 = {} * 1, e3 = -e2 (max |F| = {})", num(m), num(residual));
    }
    println!(
        "log-volume slopes (k = 2, P = p I): slowest {}, fastest {}; all <= -rate bound + 0.01: {}",
        num(worst),
        num(best),
        if decay_ok { "yes" } else { "no" }
    );
    println!(
        "convergence: {}/{} converged (e1: {}, e2: {}, e3: {}), unclassified {}, diverged {}",
        counts.converged,
        counts.total,
        counts.per_equilibrium.first().copied().unwrap_or(0),
        counts.per_equilibrium.get(1).copied().unwrap_or(0),
        counts.per_equilibrium.get(2).copied().unwrap_or(0),
        counts.unclassified,
        counts.diverged
    );
    Ok(0)
}
