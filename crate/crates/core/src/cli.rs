//! Command-line front end. Every command renders its whole output into a
//! string before writing, so reruns with the same arguments are
//! byte-identical regardless of the thread count.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::cap_uniform::{exact_bipartite_count, mckay_estimate, CapGibbsSampler, DegreeSequence, WeightMode};
use crate::dynamics::{chain_rng, run_chain_with_rng, ChainConfig, Dynamics};
use crate::error::{Error, Result};
use crate::game::parse::parse_game;
use crate::game::{CongestionGame, StrategyProfile};
use crate::gibbs_ep::{EpGibbsSampler, PneSampler};
use crate::matroid::DEFAULT_MIX_CONSTANT;
use crate::numeric::ln_biguint;
use crate::verify::{
    logit_kernel, max_potential, relaxed_logit_kernel, relaxed_mixing_budget, verify_game, worst_case_mixing_time,
    KernelMatrix,
};

/// Seed used when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_VERIFY: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "congestion-gibbs", version, about = "Gibbs sampling in congestion games")]
struct Cli {
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Approximate Gibbs samples from an extension-parallel or capacitated
    /// k-uniform game.
    SampleGibbs(SampleGibbsArgs),
    /// Approximately uniform pure Nash equilibria of an extension-parallel game.
    SamplePne(SamplePneArgs),
    /// Simulate logit or relaxed logit dynamics.
    RunDynamics(RunDynamicsArgs),
    /// Brute-force structural checks on a small game.
    Verify(VerifyArgs),
    /// Exact mixing times and spectral gaps of the dynamics.
    Mixing(MixingArgs),
    /// Exact number of simple bipartite graphs with the given degrees.
    CountBipartite(DegreeArgs),
    /// Asymptotic bipartite count estimate next to the exact count.
    Mckay(DegreeArgs),
}

#[derive(Debug, Args)]
struct GameArg {
    /// Game description file.
    #[arg(long)]
    game: PathBuf,
}

#[derive(Debug, Args)]
struct SeedArg {
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct SampleGibbsArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long = "T", default_value_t = 1.0)]
    temperature: f64,
    #[arg(long, default_value_t = 0.01)]
    eps: f64,
    /// Number of samples.
    #[arg(long = "n", default_value_t = 1000)]
    count: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = DEFAULT_MIX_CONSTANT)]
    mix_constant: f64,
    /// Second-stage weights for k-uniform games.
    #[arg(long, default_value = "exact")]
    mode: WeightMode,
}

#[derive(Debug, Args)]
struct SamplePneArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long = "n", default_value_t = 1000)]
    count: usize,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long, default_value_t = DEFAULT_MIX_CONSTANT)]
    mix_constant: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DynamicsArg {
    Logit,
    Relaxed,
}

impl From<DynamicsArg> for Dynamics {
    fn from(d: DynamicsArg) -> Self {
        match d {
            DynamicsArg::Logit => Dynamics::Logit,
            DynamicsArg::Relaxed => Dynamics::RelaxedLogit,
        }
    }
}

#[derive(Debug, Args)]
struct RunDynamicsArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long = "T", default_value_t = 1.0)]
    temperature: f64,
    #[arg(long, value_enum, default_value = "relaxed")]
    dynamics: DynamicsArg,
    /// Steps per chain.
    #[arg(long, default_value_t = 1000)]
    steps: u64,
    /// Number of independent chains.
    #[arg(long = "n", default_value_t = 1)]
    count: usize,
    /// Also record every k-th state; 0 keeps only the final one.
    #[arg(long, default_value_t = 0)]
    thinning: u64,
    #[command(flatten)]
    seed: SeedArg,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long = "T", default_value_t = 1.0)]
    temperature: f64,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
}

#[derive(Debug, Args)]
struct MixingArgs {
    #[command(flatten)]
    game: GameArg,
    #[arg(long = "T", default_value_t = 1.0)]
    temperature: f64,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
}

#[derive(Debug, Args)]
struct DegreeArgs {
    /// Row degrees (resources per player).
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<usize>,
    /// Column degrees (players per resource).
    #[arg(long, value_delimiter = ',', required = true)]
    alpha: Vec<usize>,
}

/// The knobs that determine a run, echoed as `#` lines ahead of any CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: String,
    pub game: Option<PathBuf>,
    pub temperature: Option<f64>,
    pub eps: Option<f64>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub mode: Option<WeightMode>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    fn new(command: &str) -> Self {
        ExperimentConfig {
            command: command.to_string(),
            game: None,
            temperature: None,
            eps: None,
            count: None,
            seed: None,
            mode: None,
            output: None,
        }
    }

    fn validate(&self) -> Result<()> {
        if let Some(eps) = self.eps {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidArgument(format!("--eps must lie in (0, 1), got {eps}")));
            }
        }
        if let Some(t) = self.temperature {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!("--T must be finite and non-negative, got {t}")));
            }
        }
        if self.count == Some(0) {
            return Err(Error::InvalidArgument("--n must be at least 1".into()));
        }
        Ok(())
    }

    /// `# key=value` lines; `extra` adds run-specific facts such as step
    /// counts.
    pub fn metadata(&self, extra: &[(&str, String)]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# command={}", self.command);
        if let Some(g) = &self.game {
            let _ = writeln!(out, "# game={}", g.display());
        }
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        if let Some(t) = self.temperature {
            let _ = writeln!(out, "# T={t}");
        }
        if let Some(eps) = self.eps {
            let _ = writeln!(out, "# eps={eps}");
        }
        if let Some(n) = self.count {
            let _ = writeln!(out, "# n={n}");
        }
        if let Some(mode) = self.mode {
            let _ = writeln!(out, "# mode={mode}");
        }
        for (k, v) in extra {
            let _ = writeln!(out, "# {k}={v}");
        }
        out
    }
}

enum Report {
    Done(String),
    Failed(String),
}

/// Runs the command line `argv` (program name first). Returns the process
/// exit code: 0 on success, 1 on an input error, 2 when a verification
/// check fails.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(stderr, "{}", e.render())
            } else {
                write!(stdout, "{}", e.render())
            };
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: cannot start worker threads: {e}");
            return EXIT_INPUT;
        }
    };
    let result = pool.install(|| dispatch(&cli));
    let (text, code) = match result {
        Ok(Report::Done(text)) => (text, EXIT_OK),
        Ok(Report::Failed(text)) => (text, EXIT_VERIFY),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => stdout.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: cannot write output: {e}");
        return EXIT_INPUT;
    }
    code
}

fn dispatch(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::SampleGibbs(a) => sample_gibbs(a, cli.output.clone()),
        Command::SamplePne(a) => sample_pne(a, cli.output.clone()),
        Command::RunDynamics(a) => run_dynamics(a, cli.output.clone()),
        Command::Verify(a) => verify(a, cli.output.clone()),
        Command::Mixing(a) => mixing(a, cli.output.clone()),
        Command::CountBipartite(a) => count_bipartite(a),
        Command::Mckay(a) => mckay(a),
    }
}

/// Reads and parses a game file, prefixing diagnostics with its path.
pub fn load_game(path: &Path) -> Result<CongestionGame> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
    parse_game(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::InvalidArgument(format!("{}:{line}: {message}", path.display())),
        other => other,
    })
}

fn profile_header(game: &CongestionGame, leading: &[&str], trailing: &[&str]) -> String {
    let mut cols: Vec<String> = leading.iter().map(|s| s.to_string()).collect();
    cols.extend((1..=game.players()).map(|i| format!("player_{i}")));
    cols.extend(trailing.iter().map(|s| s.to_string()));
    cols.join(",")
}

fn profile_cells(game: &CongestionGame, s: &StrategyProfile) -> String {
    s.choices()
        .iter()
        .enumerate()
        .map(|(i, &t)| game.describe_strategy(i, t))
        .collect::<Vec<_>>()
        .join(",")
}

fn sample_gibbs(a: &SampleGibbsArgs, output: Option<PathBuf>) -> Result<Report> {
    let config = ExperimentConfig {
        game: Some(a.game.game.clone()),
        temperature: Some(a.temperature),
        eps: Some(a.eps),
        count: Some(a.count),
        seed: Some(a.seed.seed),
        output,
        ..ExperimentConfig::new("sample-gibbs")
    };
    config.validate()?;
    let game = load_game(&a.game.game)?;
    let (samples, sampler, steps, mode) = if game.is_ep() {
        let s = EpGibbsSampler::new(&game, a.temperature, a.eps, a.mix_constant)?;
        (s.sample_many(a.count, a.seed.seed)?, "extension-parallel", s.steps(), None)
    } else if game.k_uniform().is_some() {
        let s = CapGibbsSampler::new(&game, a.temperature, a.eps, a.mix_constant, a.mode)?;
        (s.sample_many(a.count, a.seed.seed)?, "capacitated-k-uniform", s.steps(), Some(a.mode))
    } else {
        return Err(Error::Unsupported(
            "sample-gibbs needs an ep or kuniform structure; use run-dynamics for explicit games".into(),
        ));
    };
    let config = ExperimentConfig { mode, ..config };
    let mut out = config.metadata(&[
        ("sampler", sampler.to_string()),
        ("mix_constant", a.mix_constant.to_string()),
        ("chain_steps", steps.to_string()),
    ]);
    let _ = writeln!(out, "{}", profile_header(&game, &["sample"], &["potential"]));
    for (c, s) in samples.iter().enumerate() {
        let _ = writeln!(out, "{c},{},{}", profile_cells(&game, s), game.potential(s));
    }
    Ok(Report::Done(out))
}

fn sample_pne(a: &SamplePneArgs, output: Option<PathBuf>) -> Result<Report> {
    let config = ExperimentConfig {
        game: Some(a.game.game.clone()),
        eps: Some(a.eps),
        count: Some(a.count),
        seed: Some(a.seed.seed),
        output,
        ..ExperimentConfig::new("sample-pne")
    };
    config.validate()?;
    let game = load_game(&a.game.game)?;
    let sampler = PneSampler::new(&game, a.eps, a.mix_constant)?;
    let draws = sampler.sample_many(a.count, a.seed.seed)?;
    let mut out = config.metadata(&[
        ("T_base2", sampler.temperature().to_string()),
        ("min_potential", sampler.min_potential().to_string()),
        ("rerun_cap", sampler.rerun_cap().to_string()),
        ("mix_constant", a.mix_constant.to_string()),
        ("chain_steps", sampler.steps().to_string()),
    ]);
    let _ = writeln!(out, "{}", profile_header(&game, &["sample"], &["attempts"]));
    for (c, (s, attempts)) in draws.iter().enumerate() {
        let _ = writeln!(out, "{c},{},{attempts}", profile_cells(&game, s));
    }
    Ok(Report::Done(out))
}

fn run_dynamics(a: &RunDynamicsArgs, output: Option<PathBuf>) -> Result<Report> {
    let config = ExperimentConfig {
        game: Some(a.game.game.clone()),
        temperature: Some(a.temperature),
        count: Some(a.count),
        seed: Some(a.seed.seed),
        output,
        ..ExperimentConfig::new("run-dynamics")
    };
    config.validate()?;
    let game = load_game(&a.game.game)?;
    let chain = ChainConfig::new(a.temperature, a.seed.seed, a.steps)?.with_thinning(a.thinning);
    let dynamics = Dynamics::from(a.dynamics);
    let traces = (0..a.count as u64)
        .into_par_iter()
        .map(|c| run_chain_with_rng(&game, &chain, dynamics, None, chain_rng(a.seed.seed, c)))
        .collect::<Result<Vec<_>>>()?;
    let name = match dynamics {
        Dynamics::Logit => "logit",
        Dynamics::RelaxedLogit => "relaxed",
    };
    let mut out = config.metadata(&[
        ("dynamics", name.to_string()),
        ("steps", a.steps.to_string()),
        ("thinning", a.thinning.to_string()),
    ]);
    let _ = writeln!(out, "{}", profile_header(&game, &["chain", "step"], &["potential"]));
    for (c, trace) in traces.iter().enumerate() {
        let last = trace.samples.len() - 1;
        for (k, s) in trace.samples.iter().enumerate() {
            let step = if k == last { a.steps } else { (k as u64 + 1) * a.thinning };
            let _ = writeln!(out, "{c},{step},{},{}", profile_cells(&game, s), game.potential(s));
        }
    }
    Ok(Report::Done(out))
}

fn verify(a: &VerifyArgs, output: Option<PathBuf>) -> Result<Report> {
    let config = ExperimentConfig {
        game: Some(a.game.game.clone()),
        temperature: Some(a.temperature),
        eps: Some(a.eps),
        output,
        ..ExperimentConfig::new("verify")
    };
    config.validate()?;
    let game = load_game(&a.game.game)?;
    let findings = verify_game(&game, a.temperature, a.eps)?;
    let mut out = config.metadata(&[]);
    for f in &findings {
        let _ = writeln!(out, "{f}");
    }
    let failed = findings.iter().filter(|f| !f.passed).count();
    let _ = writeln!(out, "{} checks, {failed} failed", findings.len());
    Ok(if failed == 0 { Report::Done(out) } else { Report::Failed(out) })
}

fn mixing_row(name: &str, kernel: &KernelMatrix<StrategyProfile>, eps: f64, budget: Option<f64>) -> Result<String> {
    let t = worst_case_mixing_time(kernel, eps)?;
    let budget = budget.map_or(String::new(), |b| format!("{b:.3}"));
    Ok(format!("{name},{},{:.6e},{t},{budget}", kernel.len(), kernel.spectral_gap()))
}

fn mixing(a: &MixingArgs, output: Option<PathBuf>) -> Result<Report> {
    let config = ExperimentConfig {
        game: Some(a.game.game.clone()),
        temperature: Some(a.temperature),
        eps: Some(a.eps),
        output,
        ..ExperimentConfig::new("mixing")
    };
    config.validate()?;
    let game = load_game(&a.game.game)?;
    let mut out = config.metadata(&[]);
    let _ = writeln!(out, "dynamics,states,spectral_gap,mixing_time,budget");
    let _ = writeln!(out, "{}", mixing_row("logit", &logit_kernel(&game, a.temperature)?, a.eps, None)?);
    if game.is_symmetric() {
        let budget = relaxed_mixing_budget(
            game.players(),
            game.common_strategy_count()?,
            a.temperature,
            max_potential(&game)?,
            a.eps,
        );
        let kernel = relaxed_logit_kernel(&game, a.temperature)?;
        let _ = writeln!(out, "{}", mixing_row("relaxed", &kernel, a.eps, Some(budget))?);
    }
    Ok(Report::Done(out))
}

fn degree_sequence(a: &DegreeArgs) -> Result<DegreeSequence> {
    let seq = DegreeSequence::new(a.k.clone(), a.alpha.clone());
    if seq.row_total() != seq.col_total() {
        return Err(Error::InvalidArgument(format!(
            "degree sums differ: k sums to {}, alpha to {}",
            seq.row_total(),
            seq.col_total()
        )));
    }
    Ok(seq)
}

fn count_bipartite(a: &DegreeArgs) -> Result<Report> {
    let count = exact_bipartite_count(&degree_sequence(a)?)?;
    Ok(Report::Done(format!("{count}\n")))
}

fn mckay(a: &DegreeArgs) -> Result<Report> {
    let seq = degree_sequence(a)?;
    let estimate = mckay_estimate(&seq);
    let mut out = String::from("estimate,exact,ratio\n");
    match exact_bipartite_count(&seq) {
        Ok(exact) => {
            let ratio = if exact == 0u32.into() {
                "nan".to_string()
            } else {
                format!("{:.6}", (estimate - ln_biguint(&exact)).exp())
            };
            let _ = writeln!(out, "{:.6},{exact},{ratio}", estimate.exp());
        }
        Err(Error::GuardExceeded(_)) => {
            let _ = writeln!(out, "{:.6},,", estimate.exp());
        }
        Err(e) => return Err(e),
    }
    Ok(Report::Done(out))
}
