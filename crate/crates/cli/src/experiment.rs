//! Runs every (algorithm, repetition) job of a spec and collects the traces.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use blits::baselines::{greedy, random_greedy, random_subset};
use blits::engine::{blits, blits_plus, BlitsConfig};
use blits::graph_gen::assign_uniform_weights;
use blits::objectives::{CutGraph, ImageSummarization, Modular, MovieRecommendation, RevenueWeights};
use blits::oracle::{Oracle, SetFunction};
use blits::trace::Run;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::io::{load_edge_list, load_similarity_matrix, load_weights};
use crate::spec::{Algorithm, ExperimentSpec, InstanceSource, ObjectiveKind, WeightScheme};

pub const TRACE_HEADER: &str =
    "experiment_id,algorithm,seed,adaptive_round,cumulative_queries,solution_size,value";
const ERROR_MARKER: &str = "#error";

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub experiment_id: String,
    pub algorithm: String,
    pub seed: u64,
    pub adaptive_round: usize,
    pub cumulative_queries: u64,
    pub solution_size: usize,
    pub value: f64,
}

/// A job that failed, kept in the trace file as a marker line.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorMarker {
    pub algorithm: String,
    pub seed: u64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TraceFile {
    pub records: Vec<TraceRecord>,
    pub errors: Vec<ErrorMarker>,
}

impl TraceFile {
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(TRACE_HEADER);
        out.push('\n');
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.experiment_id, r.algorithm, r.seed, r.adaptive_round, r.cumulative_queries, r.solution_size, r.value
            );
        }
        for e in &self.errors {
            let message = e.message.replace(['\n', '\r'], " ");
            let _ = writeln!(out, "{ERROR_MARKER},{},{},{message}", e.algorithm, e.seed);
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let parse_err = |line: u64, message: String| CliError::Parse { path: path.to_path_buf(), line, message };
        let mut errors = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if let Some(rest) = line.strip_prefix(ERROR_MARKER).and_then(|r| r.strip_prefix(',')) {
                let mut parts = rest.splitn(3, ',');
                let (Some(algorithm), Some(seed), Some(message)) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(parse_err(idx as u64 + 1, "malformed error marker".into()));
                };
                let seed = seed.parse().map_err(|_| parse_err(idx as u64 + 1, format!("bad seed {seed:?}")))?;
                errors.push(ErrorMarker { algorithm: algorithm.into(), seed, message: message.into() });
            }
        }

        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| parse_err(1, e.to_string()))?;
        if headers.iter().collect::<Vec<_>>().join(",") != TRACE_HEADER {
            return Err(parse_err(1, format!("expected header {TRACE_HEADER:?}")));
        }
        let mut records = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| parse_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            let field = |i: usize| record.get(i).unwrap_or("");
            let num_err = |name: &str, i: usize| parse_err(line, format!("bad {name} {:?}", field(i)));
            let rec = TraceRecord {
                experiment_id: field(0).to_string(),
                algorithm: field(1).to_string(),
                seed: field(2).parse().map_err(|_| num_err("seed", 2))?,
                adaptive_round: field(3).parse().map_err(|_| num_err("adaptive_round", 3))?,
                cumulative_queries: field(4).parse().map_err(|_| num_err("cumulative_queries", 4))?,
                solution_size: field(5).parse().map_err(|_| num_err("solution_size", 5))?,
                value: field(6).parse().map_err(|_| num_err("value", 6))?,
            };
            if !(rec.value >= 0.0) {
                return Err(parse_err(line, format!("negative value {}", rec.value)));
            }
            records.push(rec);
        }
        Ok(Self { records, errors })
    }
}

/// Per-algorithm averages over the successful repetitions.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub algorithm: String,
    pub runs: usize,
    pub mean_value: f64,
    pub mean_rounds: f64,
    pub mean_queries: f64,
    pub mean_size: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutput {
    pub trace: TraceFile,
    pub summary: Vec<Summary>,
}

impl ExperimentOutput {
    pub fn failed(&self) -> bool {
        !self.trace.errors.is_empty()
    }

    pub fn summary_table(&self) -> String {
        let mut out = String::from("algorithm        runs  mean_value    mean_rounds  mean_queries  mean_size\n");
        for s in &self.summary {
            let _ = writeln!(
                out,
                "{:<16} {:>4}  {:>12.4}  {:>11.1}  {:>12.1}  {:>9.2}",
                s.algorithm, s.runs, s.mean_value, s.mean_rounds, s.mean_queries, s.mean_size
            );
        }
        out
    }
}

/// Builds the objective a spec describes.
pub fn build_objective(spec: &ExperimentSpec) -> Result<Box<dyn SetFunction>> {
    let graph = |spec: &ExperimentSpec| -> Result<CutGraph> {
        let g = match &spec.source {
            InstanceSource::Generate(model) => model.generate(spec.instance_seed)?,
            InstanceSource::File(path) => return Ok(load_edge_list(path)?.graph),
            InstanceSource::RandomWeights { .. } => unreachable!("rejected for graph objectives"),
        };
        Ok(match spec.weights {
            WeightScheme::Unit => g,
            WeightScheme::Uniform => assign_uniform_weights(&g, spec.instance_seed)?,
        })
    };
    let f: Box<dyn SetFunction> = match (spec.objective, &spec.source) {
        (ObjectiveKind::Cut, _) => Box::new(graph(spec)?),
        (ObjectiveKind::Revenue, _) => Box::new(RevenueWeights::from_graph(&graph(spec)?)?),
        (ObjectiveKind::Image, InstanceSource::File(path)) => {
            Box::new(ImageSummarization::new(load_similarity_matrix(path, spec.matrix)?)?)
        }
        (ObjectiveKind::Movie, InstanceSource::File(path)) => {
            Box::new(MovieRecommendation::new(load_similarity_matrix(path, spec.matrix)?))
        }
        (ObjectiveKind::Modular, InstanceSource::File(path)) => Box::new(Modular::new(load_weights(path)?)?),
        (ObjectiveKind::Modular, InstanceSource::RandomWeights { n }) => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.instance_seed);
            Box::new(Modular::new((0..*n).map(|_| rng.gen::<f64>()).collect())?)
        }
        (objective, source) => {
            return Err(CliError::Spec(format!("{objective:?} cannot be built from {source:?}")))
        }
    };
    if spec.k > f.ground_size() {
        return Err(CliError::Spec(format!("k = {} exceeds the ground set size {}", spec.k, f.ground_size())));
    }
    Ok(f)
}

fn blits_config(spec: &ExperimentSpec, seed: u64) -> BlitsConfig {
    let mut cfg = BlitsConfig::new(spec.k)
        .with_epsilon(spec.epsilon)
        .with_samples(spec.samples)
        .with_opt_guess(spec.opt_guess.clone())
        .with_mode(spec.mode)
        .with_seed(seed);
    if let Some(r) = spec.r {
        cfg = cfg.with_r(r);
    }
    if let Some(cap) = spec.rho_cap {
        cfg = cfg.with_rho_cap(cap);
    }
    cfg
}

/// One algorithm run with its own seed.
pub fn run_job(f: &dyn SetFunction, spec: &ExperimentSpec, algorithm: Algorithm, seed: u64) -> blits::Result<Run> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match algorithm {
        Algorithm::Blits => Ok(blits(f, &blits_config(spec, seed))?.run),
        Algorithm::BlitsPlus => Ok(blits_plus(f, &blits_config(spec, seed))?.run),
        Algorithm::Greedy => greedy(&mut Oracle::new(f)?, spec.k),
        Algorithm::RandomGreedy => random_greedy(&mut Oracle::new(f)?, spec.k, &mut rng),
        Algorithm::Random => random_subset(&mut Oracle::new(f)?, spec.k, &mut rng),
    }
}

/// Runs every job. Instance problems are errors; a failing job is recorded
/// as a marker in the trace and the remaining jobs still run.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutput> {
    let f = build_objective(spec)?;
    let jobs: Vec<(Algorithm, u64)> = spec
        .algorithms
        .iter()
        .flat_map(|&a| (0..spec.reps as u64).map(move |rep| (a, spec.seed.wrapping_add(rep))))
        .collect();
    let results: Vec<(Algorithm, u64, blits::Result<Run>)> = jobs
        .par_iter()
        .map(|&(a, seed)| (a, seed, run_job(f.as_ref(), spec, a, seed)))
        .collect();

    let mut trace = TraceFile::default();
    let mut per_algorithm: BTreeMap<&'static str, Vec<&Run>> = BTreeMap::new();
    for (algorithm, seed, result) in &results {
        match result {
            Ok(run) => {
                per_algorithm.entry(algorithm.name()).or_default().push(run);
                trace.records.extend(run.trace.rows.iter().map(|row| TraceRecord {
                    experiment_id: spec.experiment_id.clone(),
                    algorithm: algorithm.name().to_string(),
                    seed: *seed,
                    adaptive_round: row.adaptive_round,
                    cumulative_queries: row.cumulative_queries,
                    solution_size: row.solution_size,
                    value: row.value,
                }));
            }
            Err(e) => trace.errors.push(ErrorMarker {
                algorithm: algorithm.name().to_string(),
                seed: *seed,
                message: e.to_string(),
            }),
        }
    }
    trace
        .records
        .sort_by(|a, b| (&a.algorithm, a.seed, a.adaptive_round).cmp(&(&b.algorithm, b.seed, b.adaptive_round)));
    trace.errors.sort_by(|a, b| (&a.algorithm, a.seed).cmp(&(&b.algorithm, b.seed)));

    let summary = per_algorithm
        .into_iter()
        .map(|(name, runs)| {
            let mean = |g: &dyn Fn(&Run) -> f64| runs.iter().map(|r| g(r)).sum::<f64>() / runs.len() as f64;
            Summary {
                algorithm: name.to_string(),
                runs: runs.len(),
                mean_value: mean(&|r| r.value),
                mean_rounds: mean(&|r| r.ledger.adaptive_rounds() as f64),
                mean_queries: mean(&|r| r.ledger.total_queries() as f64),
                mean_size: mean(&|r| r.solution.len() as f64),
            }
        })
        .collect();
    Ok(ExperimentOutput { trace, summary })
}
