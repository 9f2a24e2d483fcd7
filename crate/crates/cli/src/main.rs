//! `intensity`: reconstructions, calibration curves, method comparisons and
//! the oracle-bound check, all written as CSV.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use intensity_core::experiments::{
    check_bound, config_line, default_calibration_reps, default_j0, run_calibrate, run_compare, run_reconstruct,
    samples_csv, compare_csv, BoundConfig, CalibrateConfig, CompareConfig, ExternalEstimates, Method,
    ReconstructConfig, DEFAULT_GAMMA_CAP, DEFAULT_GRID,
};
use intensity_core::baselines::DEFAULT_BINS;
use intensity_core::{BasisKind, Error, SignalKind, SignalSpec, Variant};

#[derive(Parser)]
#[command(name = "intensity", version, about = "Poisson intensity estimation by random wavelet thresholding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Built-in signals.
    Signals {
        #[command(subcommand)]
        action: SignalsAction,
    },
    /// One sample, one thresholded estimate, evaluated on a grid.
    Reconstruct(ReconstructArgs),
    /// Average risk-ratio curve over replications and its minimizer.
    Calibrate(CalibrateArgs),
    /// Per-replication squared L2 error of several methods on common samples.
    Compare(CompareArgs),
    /// Monte-Carlo check of the oracle inequality.
    CheckBound(BoundArgs),
    /// Write the simulated points of each replication.
    Sample(SampleArgs),
}

#[derive(Subcommand)]
enum SignalsAction {
    List,
}

#[derive(Args)]
struct Common {
    /// Signal name (haar1, haar2, blocks, comb, gauss1, gauss2, beta0.5, beta4, bumps, fd).
    #[arg(long)]
    signal: String,
    /// Distance between the modes of the `fd` mixture.
    #[arg(long)]
    d: Option<f64>,
    /// Intensity scale n.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn signal(&self) -> Result<SignalSpec, Failure> {
        Ok(SignalSpec::new(SignalKind::from_name(&self.signal, self.d)?))
    }

    fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut p = vec![("signal", self.signal.clone())];
        if let Some(d) = self.d {
            p.push(("d", d.to_string()));
        }
        p.push(("n", self.n.to_string()));
        p.push(("seed", self.seed.to_string()));
        p
    }
}

#[derive(Args)]
struct ReconstructArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "haar")]
    basis: BasisKind,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    j0: i32,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value = "simulation")]
    variant: Variant,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    /// Ignored beyond 1: a reconstruction uses replication 0 only.
    #[arg(long, default_value_t = 1)]
    reps: u64,
    /// Also write the kept coefficients as `j,k,value`.
    #[arg(long)]
    coeffs_out: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "haar")]
    basis: BasisKind,
    /// Finest level; defaults to floor(log2 n).
    #[arg(long, allow_negative_numbers = true)]
    j0: Option<i32>,
    /// Replications; 1000 for haar1, gauss1 and bumps, 100 otherwise.
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_GAMMA_CAP)]
    gamma_cap: f64,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 10, allow_negative_numbers = true)]
    j0: i32,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long, default_value_t = 100)]
    reps: u64,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    grid: usize,
    #[arg(long, default_value_t = DEFAULT_BINS)]
    bins: usize,
    /// Decomposition depth of the binned Haar transform; full depth when absent.
    #[arg(long)]
    levels: Option<u32>,
    /// Comma-separated methods; external methods are named by --external.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// External estimates as NAME=PATH, a CSV of `rep,x,estimate` rows.
    #[arg(long)]
    external: Vec<String>,
}

#[derive(Args)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value = "haar")]
    basis: BasisKind,
    /// Finest level; defaults to floor(log2 n).
    #[arg(long, allow_negative_numbers = true)]
    j0: Option<i32>,
    /// Defaults to 1 + sqrt(2).
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value = "theoretical")]
    variant: Variant,
    #[arg(long, default_value_t = 200)]
    reps: u64,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 1)]
    reps: u64,
}

enum Failure {
    Config(String),
    Numeric(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ZeroOracleRisk { .. } => Failure::Numeric(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn signals_list() -> String {
    let mut out = String::from("name,support_lo,support_hi,l1_norm,sup_norm\n");
    for s in SignalSpec::builtin() {
        let w = s.support();
        out.push_str(&format!("{},{},{},{},{}\n", s.name(), w.lo, w.hi, s.l1_norm(), s.sup_norm()));
    }
    out.push_str("fd,-inf,inf,1,mixture of N(0,1) and N(d,1) with weights 1/2 (needs --d)\n");
    out
}

fn reconstruct(a: &ReconstructArgs) -> Result<(), Failure> {
    if a.reps > 1 {
        eprintln!("warning: reconstruct uses a single replication; --reps {} ignored", a.reps);
    }
    let cfg = ReconstructConfig {
        signal: a.common.signal()?,
        basis: a.basis,
        n: a.common.n,
        j0: a.j0,
        gamma: a.gamma,
        variant: a.variant,
        seed: a.common.seed,
        grid: a.grid,
    };
    let r = run_reconstruct(&cfg)?;
    let mut pairs = a.common.pairs();
    pairs.extend([
        ("basis", a.basis.to_string()),
        ("j0", a.j0.to_string()),
        ("gamma", a.gamma.to_string()),
        ("variant", a.variant.to_string()),
        ("grid", a.grid.to_string()),
    ]);
    let config = config_line(&pairs);
    write_output(&a.common.out, &r.to_csv(&config))?;
    if let Some(path) = &a.coeffs_out {
        write_output(&Some(path.clone()), &format!("{config}{}", r.coeffs.to_csv()))?;
    }
    Ok(())
}

fn calibrate(a: &CalibrateArgs) -> Result<(), Failure> {
    let signal = a.common.signal()?;
    let cfg = CalibrateConfig {
        reps: a.reps.unwrap_or_else(|| default_calibration_reps(signal.kind())),
        j0: a.j0.unwrap_or_else(|| default_j0(a.common.n)),
        signal,
        basis: a.basis,
        n: a.common.n,
        seed: a.common.seed,
        gamma_cap: a.gamma_cap,
    };
    let c = run_calibrate(&cfg)?;
    let mut pairs = a.common.pairs();
    pairs.extend([
        ("basis", a.basis.to_string()),
        ("j0", cfg.j0.to_string()),
        ("reps", cfg.reps.to_string()),
        ("gamma_cap", a.gamma_cap.to_string()),
        ("variant", Variant::Simulation.to_string()),
    ]);
    eprintln!("n={} gamma_min={}", cfg.n, c.gamma_min);
    write_output(&a.common.out, &c.to_csv(&config_line(&pairs)))
}

fn compare(a: &CompareArgs) -> Result<(), Failure> {
    let mut externals = BTreeMap::new();
    for spec in &a.external {
        let (name, path) = spec
            .split_once('=')
            .ok_or_else(|| Failure::Config(format!("--external expects NAME=PATH, got '{spec}'")))?;
        let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {path}: {e}")))?;
        externals.insert(name.to_string(), ExternalEstimates::from_csv(&text)?);
    }
    let methods: Vec<Method> = match &a.methods {
        None => Method::BUILTIN.to_vec(),
        Some(names) => names
            .iter()
            .map(|m| match m.parse::<Method>() {
                Ok(method) => Ok(method),
                Err(_) if externals.contains_key(m) => Ok(Method::External(m.clone())),
                Err(_) => Err(Failure::Config(format!(
                    "unknown method '{m}' (no --external {m}=PATH given)"
                ))),
            })
            .collect::<Result<_, _>>()?,
    };
    let cfg = CompareConfig {
        signal: a.common.signal()?,
        n: a.common.n,
        j0: a.j0,
        gamma: a.gamma,
        reps: a.reps,
        seed: a.common.seed,
        grid: a.grid,
        bins: a.bins,
        levels: a.levels,
        methods,
        externals,
    };
    let rows = run_compare(&cfg)?;
    let mut pairs = a.common.pairs();
    pairs.extend([
        ("j0", a.j0.to_string()),
        ("gamma", a.gamma.to_string()),
        ("reps", a.reps.to_string()),
        ("grid", a.grid.to_string()),
        ("bins", a.bins.to_string()),
        ("levels", a.levels.map_or("all".to_string(), |l| l.to_string())),
        (
            "methods",
            cfg.methods.iter().map(Method::to_string).collect::<Vec<_>>().join(";"),
        ),
    ]);
    write_output(&a.common.out, &compare_csv(&rows, &config_line(&pairs)))
}

fn bound(a: &BoundArgs) -> Result<(), Failure> {
    let cfg = BoundConfig {
        signal: a.common.signal()?,
        basis: a.basis,
        n: a.common.n,
        j0: a.j0.unwrap_or_else(|| default_j0(a.common.n)),
        gamma: a.gamma.unwrap_or(1.0 + 2f64.sqrt()),
        variant: a.variant,
        reps: a.reps,
        seed: a.common.seed,
    };
    let b = check_bound(&cfg)?;
    let mut pairs = a.common.pairs();
    pairs.extend([
        ("basis", a.basis.to_string()),
        ("j0", cfg.j0.to_string()),
        ("gamma", cfg.gamma.to_string()),
        ("variant", a.variant.to_string()),
        ("reps", a.reps.to_string()),
    ]);
    write_output(&a.common.out, &b.to_csv(&config_line(&pairs)))
}

fn sample(a: &SampleArgs) -> Result<(), Failure> {
    let signal = a.common.signal()?;
    let mut pairs = a.common.pairs();
    pairs.push(("reps", a.reps.to_string()));
    let text = samples_csv(&signal, a.common.n, a.common.seed, a.reps, &config_line(&pairs))?;
    write_output(&a.common.out, &text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Signals { action: SignalsAction::List } => {
            print!("{}", signals_list());
            Ok(())
        }
        Command::Reconstruct(a) => reconstruct(a),
        Command::Calibrate(a) => calibrate(a),
        Command::Compare(a) => compare(a),
        Command::CheckBound(a) => bound(a),
        Command::Sample(a) => sample(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
