//! Experiment descriptions: flat `key=value` files merged with command-line
//! overrides.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use blits::engine::{EstimationMode, OptGuess};
use blits::graph_gen::GraphModel;

use crate::error::{CliError, Result};
use crate::io::MatrixKind;

pub type Settings = BTreeMap<String, String>;

/// Every key a spec may set.
pub const KEYS: &[&str] = &[
    "experiment_id",
    "objective",
    "model",
    "n",
    "p",
    "clusters",
    "size_lo",
    "size_hi",
    "m",
    "exponent",
    "weights",
    "input",
    "matrix",
    "algorithms",
    "k",
    "r",
    "epsilon",
    "samples",
    "opt_guess",
    "mode",
    "rho_cap",
    "seed",
    "instance_seed",
    "reps",
    "out",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Cut,
    Image,
    Movie,
    Revenue,
    Modular,
}

impl ObjectiveKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "cut" => Some(Self::Cut),
            "image" => Some(Self::Image),
            "movie" => Some(Self::Movie),
            "revenue" => Some(Self::Revenue),
            "modular" => Some(Self::Modular),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Algorithm {
    Blits,
    BlitsPlus,
    Greedy,
    RandomGreedy,
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] =
        [Self::Blits, Self::BlitsPlus, Self::Greedy, Self::RandomGreedy, Self::Random];

    pub fn name(self) -> &'static str {
        match self {
            Self::Blits => "blits",
            Self::BlitsPlus => "blits_plus",
            Self::Greedy => "greedy",
            Self::RandomGreedy => "random_greedy",
            Self::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_").replace('+', "_plus");
        match s.as_str() {
            "blitsplus" => Some(Self::BlitsPlus),
            _ => Self::ALL.into_iter().find(|a| a.name() == s),
        }
    }
}

/// Edge weights of a generated graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightScheme {
    Unit,
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    Generate(GraphModel),
    File(PathBuf),
    /// `n` independent U(0, 1) weights, for the modular objective.
    RandomWeights { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub experiment_id: String,
    pub objective: ObjectiveKind,
    pub source: InstanceSource,
    pub weights: WeightScheme,
    pub matrix: MatrixKind,
    pub algorithms: Vec<Algorithm>,
    pub k: usize,
    pub r: Option<usize>,
    pub epsilon: f64,
    pub samples: usize,
    pub opt_guess: OptGuess,
    pub mode: EstimationMode,
    pub rho_cap: Option<usize>,
    pub seed: u64,
    pub instance_seed: u64,
    pub reps: usize,
    pub out: Option<PathBuf>,
}

/// Parses `key=value` lines; blank lines and `#` comments are ignored.
pub fn parse_settings(text: &str, path: &Path) -> Result<Settings> {
    let mut settings = Settings::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| CliError::Parse {
            path: path.to_path_buf(),
            line: idx as u64 + 1,
            message: format!("expected key=value, found {line:?}"),
        })?;
        let key = normalize_key(key);
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Parse {
                path: path.to_path_buf(),
                line: idx as u64 + 1,
                message: format!("unknown key {key:?}"),
            });
        }
        settings.insert(key, value.trim().to_string());
    }
    Ok(settings)
}

pub fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

fn spec_err(msg: impl Into<String>) -> CliError {
    CliError::Spec(msg.into())
}

struct Reader<'a>(&'a Settings);

impl Reader<'_> {
    fn raw(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|_| spec_err(format!("{key}: cannot parse {v:?}"))))
            .transpose()
    }

    fn or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn required<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?.ok_or_else(|| spec_err(format!("missing required key {key:?}")))
    }
}

/// `grid`, `fixed:V`, `greedy:C` or `geometric:BASE:FACTOR:COUNT`.
pub fn parse_opt_guess(s: &str) -> Result<OptGuess> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let num = |x: &str| x.parse::<f64>().map_err(|_| spec_err(format!("opt_guess: bad number {x:?}")));
    let guess = match parts.as_slice() {
        ["grid"] => OptGuess::SingletonGrid,
        ["fixed", v] => OptGuess::Fixed(num(v)?),
        ["greedy"] => OptGuess::GreedyMultiple(1.0),
        ["greedy", c] => OptGuess::GreedyMultiple(num(c)?),
        ["geometric", base, factor, count] => OptGuess::Geometric {
            base: num(base)?,
            factor: num(factor)?,
            count: count.parse().map_err(|_| spec_err(format!("opt_guess: bad count {count:?}")))?,
        },
        _ => return Err(spec_err(format!("opt_guess: unrecognized {s:?}"))),
    };
    Ok(guess)
}

/// The graph model named by the `model` key, with its parameters.
pub fn model_from_settings(settings: &Settings) -> Result<GraphModel> {
    let r = Reader(settings);
    let name: String = r.required("model")?;
    parse_model(&r, &name)
}

fn parse_model(r: &Reader<'_>, name: &str) -> Result<GraphModel> {
    let model = match name {
        "er" | "erdos_renyi" => GraphModel::ErdosRenyi { n: r.required("n")?, p: r.or("p", 0.5)? },
        "sbm" => GraphModel::StochasticBlock {
            clusters: r.or("clusters", 7)?,
            size_lo: r.or("size_lo", 30)?,
            size_hi: r.or("size_hi", 120)?,
            p_in: r.or("p", 0.8)?,
        },
        "ba" | "barabasi_albert" => GraphModel::BarabasiAlbert { n: r.required("n")?, m: r.or("m", 100)? },
        "configuration" | "config" => {
            GraphModel::Configuration { n: r.required("n")?, exponent: r.or("exponent", 2.0)? }
        }
        other => return Err(spec_err(format!("unknown model {other:?}"))),
    };
    model.validate().map_err(|e| spec_err(e.to_string()))?;
    Ok(model)
}

impl ExperimentSpec {
    pub fn from_settings(settings: &Settings) -> Result<Self> {
        if let Some(key) = settings.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(spec_err(format!("unknown key {key:?}")));
        }
        let r = Reader(settings);
        let objective_name: String = r.required("objective")?;
        let objective = ObjectiveKind::parse(&objective_name)
            .ok_or_else(|| spec_err(format!("unknown objective {objective_name:?}")))?;

        let source = match (r.raw("input"), r.raw("model")) {
            (Some(_), Some(_)) => return Err(spec_err("give either input or model, not both")),
            (Some(path), None) => InstanceSource::File(PathBuf::from(path)),
            (None, None) if objective == ObjectiveKind::Modular => InstanceSource::RandomWeights { n: r.required("n")? },
            (None, Some(_)) if objective == ObjectiveKind::Modular => {
                return Err(spec_err("the modular objective takes input or n, not a graph model"))
            }
            (None, Some(model)) => InstanceSource::Generate(parse_model(&r, model)?),
            (None, None) => return Err(spec_err("an instance needs input or model")),
        };
        if matches!(objective, ObjectiveKind::Image | ObjectiveKind::Movie)
            && !matches!(source, InstanceSource::File(_))
        {
            return Err(spec_err("image and movie objectives read their matrix from input"));
        }

        let weights = match r.raw("weights") {
            None if objective == ObjectiveKind::Revenue => WeightScheme::Uniform,
            None | Some("unit") => WeightScheme::Unit,
            Some("uniform") => WeightScheme::Uniform,
            Some(other) => return Err(spec_err(format!("unknown weights {other:?}"))),
        };
        let matrix = match r.raw("matrix") {
            None => MatrixKind::default(),
            Some(m) => MatrixKind::parse(m).ok_or_else(|| spec_err(format!("unknown matrix kind {m:?}")))?,
        };
        let algorithms = match r.raw("algorithms") {
            None => Algorithm::ALL.to_vec(),
            Some(list) => {
                let mut algs = list
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| Algorithm::parse(s).ok_or_else(|| spec_err(format!("unknown algorithm {s:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                algs.sort();
                algs.dedup();
                algs
            }
        };
        if algorithms.is_empty() {
            return Err(spec_err("no algorithms selected"));
        }
        let mode = match r.raw("mode") {
            None | Some("sampled") => EstimationMode::Sampled,
            Some("exact") => EstimationMode::Exact,
            Some(other) => return Err(spec_err(format!("unknown mode {other:?}"))),
        };
        let opt_guess = match r.raw("opt_guess") {
            None => OptGuess::SingletonGrid,
            Some(s) => parse_opt_guess(s)?,
        };

        let seed: u64 = r.or("seed", 0)?;
        let spec = Self {
            experiment_id: r.or("experiment_id", "experiment".to_string())?,
            objective,
            source,
            weights,
            matrix,
            algorithms,
            k: r.required("k")?,
            r: r.get("r")?,
            epsilon: r.or("epsilon", 0.3)?,
            samples: r.or("samples", 30)?,
            opt_guess,
            mode,
            rho_cap: r.get("rho_cap")?,
            seed,
            instance_seed: r.or("instance_seed", seed)?,
            reps: r.or("reps", 1)?,
            out: r.get::<String>("out")?.map(PathBuf::from),
        };
        if spec.reps == 0 {
            return Err(spec_err("reps must be at least 1"));
        }
        if spec.experiment_id.contains([',', '\n', '"']) {
            return Err(spec_err("experiment_id may not contain commas, quotes or newlines"));
        }
        Ok(spec)
    }
}
