//! `rblab`: generate, solve, analyse and sweep model RB instances.
//!
//! Exit codes: 0 success, 1 usage or configuration, 2 computation, 3 I/O.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use rblab::exp::{
    curve_columns, read_results, scaling_fit, sizes_in, sweep_to_file, width_columns, window_from_results,
    SweepConfig,
};
use rblab::gen::{generate, write_batch, SeedPolicy};
use rblab::pool::default_workers;
use rblab::report::fmt_float;
use rblab::solve::{count, count_record, solve, solve_record, Budget, SolverConfig};
use rblab::theory::{
    critical_p, critical_r, epsilon_of, in_p_regime, in_r_regime, window, window_constant_p, window_constant_r,
    Axis, EvalMode, MomentModel,
};
use rblab::{decode_instance, derive, encode_instance, DerivedSizes, RbError, RbParams};

#[derive(Parser)]
#[command(name = "rblab", version, about = "Model RB random CSP laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one instance, or a seeded batch with a manifest
    Gen(GenArgs),
    /// Decide satisfiability of an instance file
    Solve(SolveArgs),
    /// Count the solutions of an instance file
    Count(SolveArgs),
    /// Thresholds, window constants and exact moments
    Theory(TheoryArgs),
    /// Finite-n scaling-window endpoints
    Window(WindowArgs),
    /// Monte Carlo phase-transition sweep driven by a config file
    Sweep(SweepArgs),
    /// Empirical windows and a scaling fit from a results file
    Fit(FitArgs),
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    r: f64,
}

impl ModelArgs {
    fn params(&self) -> rblab::Result<RbParams> {
        RbParams::new(self.n, self.k, self.alpha, self.p, self.r)
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    seed: u64,
    /// Instance file, or the output directory when --count is given
    #[arg(long)]
    out: PathBuf,
    /// Number of instances; trial seeds derive from --seed
    #[arg(long)]
    count: Option<usize>,
}

#[derive(Args)]
struct BudgetArgs {
    /// Search-node limit
    #[arg(long, default_value_t = rblab::solve::DEFAULT_NODE_BUDGET)]
    node_budget: u64,
    /// Wall-clock limit in milliseconds (makes outcomes machine-dependent)
    #[arg(long)]
    time_budget_ms: Option<u64>,
}

impl BudgetArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig::from(Budget {
            max_nodes: Some(self.node_budget),
            max_time: self.time_budget_ms.map(Duration::from_millis),
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    /// RBCSP instance file
    #[arg(long)]
    instance: PathBuf,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct TheoryArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    /// Override the derived domain size
    #[arg(long, requires_all = ["m", "q"])]
    d: Option<u64>,
    /// Override the derived constraint count
    #[arg(long, requires_all = ["d", "q"])]
    m: Option<u64>,
    /// Override the derived number of illegal tuples
    #[arg(long, requires_all = ["d", "m"])]
    q: Option<u64>,
    /// Moment evaluation mode: integerized or continuous
    #[arg(long, default_value = "integerized", value_parser = parse_mode)]
    mode: EvalMode,
    /// Print every pair term
    #[arg(long)]
    pair_terms: bool,
}

#[derive(Args)]
struct WindowArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    delta: f64,
    #[arg(long, value_parser = parse_axis)]
    axis: Axis,
}

#[derive(Args)]
struct SweepArgs {
    /// key=value sweep configuration
    #[arg(long)]
    config: PathBuf,
    /// Results CSV; overrides `output` in the config
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Results CSV written by `sweep`
    #[arg(long)]
    results: PathBuf,
    #[arg(long)]
    delta: f64,
    /// Exponent for the lower-rate comparator 1/(n^(1-epsilon) ln n)
    #[arg(long, default_value_t = 0.0)]
    epsilon: f64,
    /// Directory for plot-ready curve and width columns
    #[arg(long)]
    export: Option<PathBuf>,
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    s.parse().map_err(|e: RbError| e.to_string())
}

fn parse_mode(s: &str) -> Result<EvalMode, String> {
    match s {
        "integerized" => Ok(EvalMode::Integerized),
        "continuous" => Ok(EvalMode::Continuous),
        other => Err(format!("expected `integerized` or `continuous`, found `{other}`")),
    }
}

enum Failure {
    Usage(String),
    Compute(RbError),
    Io(String),
}

impl From<RbError> for Failure {
    fn from(e: RbError) -> Self {
        match e {
            RbError::Io(msg) => Failure::Io(msg),
            RbError::Config(msg) => Failure::Usage(msg),
            other => Failure::Compute(other),
        }
    }
}

fn io_at(path: &Path) -> impl Fn(std::io::Error) -> Failure + '_ {
    move |e| Failure::Io(format!("{}: {e}", path.display()))
}

type Outcome = Result<String, Failure>;

fn cmd_gen(a: &GenArgs) -> Outcome {
    let params = a.model.params()?;
    match a.count {
        None => {
            let inst = generate(&params, a.seed)?;
            std::fs::write(&a.out, encode_instance(&inst)).map_err(io_at(&a.out))?;
            Ok(format!("wrote {}\n", a.out.display()))
        }
        Some(count) => {
            let entries = write_batch(&params, &SeedPolicy::new(a.seed), count, &a.out, default_workers())?;
            Ok(format!("wrote {} instances and manifest.tsv to {}\n", entries.len(), a.out.display()))
        }
    }
}

fn read_instance(path: &Path) -> Result<rblab::Instance, Failure> {
    let text = std::fs::read_to_string(path).map_err(io_at(path))?;
    Ok(decode_instance(&text)?)
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let inst = read_instance(&a.instance)?;
    let out = solve(&inst, &a.budget.config())?;
    let mut text = solve_record(&out);
    text.push('\n');
    if let Some(w) = &out.witness {
        let values: Vec<String> = w.values.iter().map(u64::to_string).collect();
        let _ = writeln!(text, "witness={}", values.join(" "));
    }
    Ok(text)
}

fn cmd_count(a: &SolveArgs) -> Outcome {
    let inst = read_instance(&a.instance)?;
    Ok(format!("{}\n", count_record(&count(&inst, &a.budget.config())?)))
}

fn cmd_theory(a: &TheoryArgs) -> Outcome {
    let mut out = String::new();
    let k = a.k;
    if let (Some(alpha), Some(p)) = (a.alpha, a.p) {
        let regime = in_r_regime(alpha, k, p);
        let _ = writeln!(out, "r_cr={}", fmt_float(critical_r(alpha, p)));
        let _ = writeln!(out, "r_regime={regime}");
        if regime {
            let c = window_constant_r(alpha, k, p);
            let _ = writeln!(out, "r_c={} r_epsilon={}", fmt_float(c), fmt_float(epsilon_of(c)));
        }
    }
    if let (Some(alpha), Some(r)) = (a.alpha, a.r) {
        let regime = in_p_regime(alpha, k, r);
        let _ = writeln!(out, "p_cr={}", fmt_float(critical_p(alpha, r)));
        let _ = writeln!(out, "p_regime={regime}");
        if regime {
            let c = window_constant_p(alpha, k, r);
            let _ = writeln!(out, "p_c={} p_epsilon={}", fmt_float(c), fmt_float(epsilon_of(c)));
        }
    }
    let model = match (a.n, a.d, a.m, a.q, a.alpha, a.p, a.r) {
        (Some(n), Some(d), Some(m), Some(q), ..) => {
            if a.mode == EvalMode::Continuous {
                return Err(Failure::Usage("--d/--m/--q give integer sizes; drop --mode continuous".into()));
            }
            Some(MomentModel::integerized(&DerivedSizes::from_integers(n, k, d, m, q)?)?)
        }
        (Some(n), None, None, None, Some(alpha), Some(p), Some(r)) => {
            Some(MomentModel::for_params(&RbParams::new(n, k, alpha, p, r)?, a.mode)?)
        }
        _ => None,
    };
    if let Some(model) = model {
        if let (Some(n), Some(alpha), Some(p), Some(r), None) = (a.n, a.alpha, a.p, a.r, a.d) {
            let s = derive(&RbParams::new(n, k, alpha, p, r)?)?;
            let _ = writeln!(out, "d={} m={} q={}", s.d, s.m, s.q);
        }
        let rep = model.second_moment();
        let _ = writeln!(out, "log_E_N={}", fmt_float(rep.log_en));
        let _ = writeln!(out, "log_E_N2={}", fmt_float(rep.log_en2));
        let _ = writeln!(out, "E_N={} E_N2={}", fmt_float(rep.en), fmt_float(rep.en2));
        let _ = writeln!(out, "markov_upper={}", fmt_float(rep.markov_upper_bound));
        let _ = writeln!(out, "cauchy_lower={}", fmt_float(rep.ratio_lower_bound));
        if a.pair_terms {
            for (s, t) in rep.pair_terms.iter().enumerate() {
                let _ = writeln!(out, "pair_term[{s}]={}", fmt_float(*t));
            }
        }
    }
    if out.is_empty() {
        return Err(Failure::Usage("nothing to report: give --alpha with --p and/or --r".into()));
    }
    Ok(out)
}

fn cmd_window(a: &WindowArgs) -> Outcome {
    Ok(window(&a.model.params()?, a.delta, a.axis)?.to_string())
}

fn cmd_sweep(a: &SweepArgs, invocation: &str) -> Outcome {
    let text = std::fs::read_to_string(&a.config).map_err(io_at(&a.config))?;
    let mut cfg = SweepConfig::parse(&text)?;
    if let Some(path) = &a.output {
        cfg.output = Some(path.clone());
    }
    cfg.workers = std::env::var(rblab::pool::WORKERS_ENV).ok().map_or(cfg.workers, |_| default_workers());
    let output = cfg
        .output
        .clone()
        .ok_or_else(|| Failure::Usage("no results path: set `output` in the config or pass --output".into()))?;
    // sidecar with the exact invocation and effective config
    let sidecar = output.with_extension("config");
    let log = format!("# {invocation}\n{}", cfg.to_text());
    std::fs::write(&sidecar, log).map_err(io_at(&sidecar))?;
    let results = sweep_to_file(&cfg, &output)?;
    let mut out = format!("wrote {} grid points to {}\n", results.len(), output.display());
    for r in &results {
        let _ = writeln!(
            out,
            "n={} {}={} prsat={} sat={} unsat={} timeout={}",
            r.n,
            r.axis,
            fmt_float(r.value),
            fmt_float(r.prsat),
            r.sat,
            r.unsat,
            r.timeout
        );
    }
    Ok(out)
}

fn cmd_fit(a: &FitArgs) -> Outcome {
    let results = read_results(&a.results)?;
    let mut out = String::new();
    let mut windows = Vec::new();
    for n in sizes_in(&results) {
        match window_from_results(&results, n, a.delta) {
            Ok(w) => {
                let _ = writeln!(
                    out,
                    "n={n} lower={} upper={} width={} fit_residual={}",
                    fmt_float(w.lower),
                    fmt_float(w.upper),
                    fmt_float(w.width),
                    fmt_float(w.fit_residual)
                );
                windows.push(w);
            }
            Err(e) => {
                let _ = writeln!(out, "n={n} window=none reason=\"{e}\"");
            }
        }
    }
    if windows.is_empty() {
        return Err(Failure::Compute(RbError::InsufficientData("no size yields a window".into())));
    }
    let ns: Vec<usize> = windows.iter().map(|w| w.n).collect();
    let widths: Vec<f64> = windows.iter().map(|w| w.width).collect();
    match scaling_fit(&ns, &widths, a.epsilon) {
        Ok(fit) => {
            let _ = writeln!(
                out,
                "slope={} stderr={} intercept={}",
                fmt_float(fit.fit.slope),
                fmt_float(fit.fit.slope_stderr),
                fmt_float(fit.fit.intercept)
            );
            for (i, n) in fit.ns.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "n={n} width={} upper_rate={} lower_rate={}",
                    fmt_float(fit.widths[i]),
                    fmt_float(fit.upper_rate[i]),
                    fmt_float(fit.lower_rate[i])
                );
            }
        }
        Err(e) => {
            let _ = writeln!(out, "scaling_fit=none reason=\"{e}\"");
        }
    }
    if let Some(dir) = &a.export {
        std::fs::create_dir_all(dir).map_err(io_at(dir))?;
        for n in sizes_in(&results) {
            let path = dir.join(format!("curve_n{n}.dat"));
            std::fs::write(&path, curve_columns(&results, n)).map_err(io_at(&path))?;
        }
        let path = dir.join("widths.dat");
        std::fs::write(&path, width_columns(&windows)).map_err(io_at(&path))?;
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let invocation = std::env::args().collect::<Vec<_>>().join(" ");
    let outcome = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Count(a) => cmd_count(a),
        Command::Theory(a) => cmd_theory(a),
        Command::Window(a) => cmd_window(a),
        Command::Sweep(a) => cmd_sweep(a, &invocation),
        Command::Fit(a) => cmd_fit(a),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
