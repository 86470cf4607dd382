use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blits::graph_gen::assign_uniform_weights;
use blits_cli::experiment::{run_experiment, TraceFile};
use blits_cli::io::write_edge_list;
use blits_cli::plot::{emit_plot_data, per_seed_csv, per_seed_series, plot_csv};
use blits_cli::spec::{model_from_settings, parse_settings, ExperimentSpec, Settings};
use blits_cli::{CliError, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blits", version, about = "Low-adaptivity submodular maximization experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph and write it as an edge list.
    Generate(GenerateArgs),
    /// Run an experiment and write its trace.
    Run(Box<RunArgs>),
    /// Aggregate a trace into mean and standard-error series per round.
    PlotData(PlotArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// er, sbm, ba or configuration.
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    clusters: Option<String>,
    #[arg(long)]
    size_lo: Option<String>,
    #[arg(long)]
    size_hi: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    exponent: Option<String>,
    /// unit or uniform.
    #[arg(long, default_value = "unit")]
    weights: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Spec keys settable from the command line. These win over the config file.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    experiment_id: Option<String>,
    #[arg(long)]
    objective: Option<String>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    p: Option<String>,
    #[arg(long)]
    clusters: Option<String>,
    #[arg(long)]
    size_lo: Option<String>,
    #[arg(long)]
    size_hi: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    exponent: Option<String>,
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    input: Option<String>,
    #[arg(long)]
    matrix: Option<String>,
    /// Comma-separated: blits, blits_plus, greedy, random_greedy, random.
    #[arg(long)]
    algorithms: Option<String>,
    #[arg(long)]
    k: Option<String>,
    #[arg(long)]
    r: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    /// grid, fixed:V, greedy[:C] or geometric:BASE:FACTOR:COUNT.
    #[arg(long)]
    opt_guess: Option<String>,
    /// sampled or exact.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    rho_cap: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    instance_seed: Option<String>,
    #[arg(long)]
    reps: Option<String>,
    /// Trace destination.
    #[arg(long)]
    out: Option<String>,
}

impl Overrides {
    fn apply(self, settings: &mut Settings) {
        let pairs = [
            ("experiment_id", self.experiment_id),
            ("objective", self.objective),
            ("model", self.model),
            ("n", self.n),
            ("p", self.p),
            ("clusters", self.clusters),
            ("size_lo", self.size_lo),
            ("size_hi", self.size_hi),
            ("m", self.m),
            ("exponent", self.exponent),
            ("weights", self.weights),
            ("input", self.input),
            ("matrix", self.matrix),
            ("algorithms", self.algorithms),
            ("k", self.k),
            ("r", self.r),
            ("epsilon", self.epsilon),
            ("samples", self.samples),
            ("opt_guess", self.opt_guess),
            ("mode", self.mode),
            ("rho_cap", self.rho_cap),
            ("seed", self.seed),
            ("instance_seed", self.instance_seed),
            ("reps", self.reps),
            ("out", self.out),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                settings.insert(key.to_string(), v);
            }
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// A file of key=value lines.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(long)]
    trace: PathBuf,
    /// Destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the aligned per-seed series here.
    #[arg(long)]
    per_seed: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let mut settings = Settings::new();
    settings.insert("model".into(), args.model);
    let optional = [
        ("n", args.n),
        ("p", args.p),
        ("clusters", args.clusters),
        ("size_lo", args.size_lo),
        ("size_hi", args.size_hi),
        ("m", args.m),
        ("exponent", args.exponent),
    ];
    for (key, value) in optional {
        if let Some(v) = value {
            settings.insert(key.into(), v);
        }
    }
    let graph = model_from_settings(&settings)?.generate(args.seed)?;
    let graph = match args.weights.as_str() {
        "unit" => graph,
        "uniform" => assign_uniform_weights(&graph, args.seed)?,
        other => return Err(CliError::Spec(format!("unknown weights {other:?}"))),
    };
    let mut buf = Vec::new();
    write_edge_list(&graph, &mut buf).map_err(|e| CliError::io(Path::new("<buffer>"), e))?;
    emit(args.out.as_deref(), &String::from_utf8_lossy(&buf))
}

/// Returns whether every job succeeded.
fn run(args: RunArgs) -> Result<bool> {
    let mut settings = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            parse_settings(&text, path)?
        }
        None => Settings::new(),
    };
    args.overrides.apply(&mut settings);
    let spec = ExperimentSpec::from_settings(&settings)?;
    let output = run_experiment(&spec)?;
    emit(spec.out.as_deref(), &output.trace.to_csv())?;
    eprint!("{}", output.summary_table());
    for e in &output.trace.errors {
        eprintln!("error: {} (seed {}): {}", e.algorithm, e.seed, e.message);
    }
    Ok(!output.failed())
}

fn plot_data(args: PlotArgs) -> Result<()> {
    let trace = TraceFile::read(&args.trace)?;
    let points = emit_plot_data(&trace)?;
    if let Some(path) = &args.per_seed {
        emit(Some(path), &per_seed_csv(&per_seed_series(&trace)?))?;
    }
    emit(args.out.as_deref(), &plot_csv(&points))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => generate(args).map(|()| true),
        Command::Run(args) => run(*args),
        Command::PlotData(args) => plot_data(args).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
