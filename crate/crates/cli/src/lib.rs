//! Library side of the `trajmetric` command-line tool: option handling and
//! the `generate`, `eval` and `batch` commands.

pub mod output;
pub mod scenario;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;
use serde_json::json;

use trajmetric::analysis::{batch_metric, evaluate, make_schedule, rank, ScheduleSpec};
use trajmetric::lp::{build_lp, to_lp_format};
use trajmetric::{MetricKind, MetricParams, Normalization, TrajectorySet};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] trajmetric::Error),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 3 for LP solver failures, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(trajmetric::Error::Solver { .. }) => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    Uniform,
    OnlineExp,
    OnlineExpNormalized,
    PredictorExp,
    PredictorExpNormalized,
    SamplingProportional,
    Custom,
}

impl WeightKind {
    const NAMES: [(&'static str, WeightKind); 7] = [
        ("uniform", WeightKind::Uniform),
        ("online-exp", WeightKind::OnlineExp),
        ("online-exp-normalized", WeightKind::OnlineExpNormalized),
        ("predictor-exp", WeightKind::PredictorExp),
        ("predictor-exp-normalized", WeightKind::PredictorExpNormalized),
        ("sampling-proportional", WeightKind::SamplingProportional),
        ("custom", WeightKind::Custom),
    ];
}

impl FromStr for WeightKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::NAMES
            .iter()
            .find(|(name, _)| *name == s)
            .map(|(_, kind)| *kind)
            .ok_or_else(|| {
                let names: Vec<_> = Self::NAMES.iter().map(|(n, _)| *n).collect();
                format!("unknown weight schedule '{s}' (expected one of {})", names.join(", "))
            })
    }
}

pub fn parse_normalization(s: &str) -> Result<Normalization, String> {
    match s {
        "none" => Ok(Normalization::None),
        "window" => Ok(Normalization::Window),
        _ => Err(format!("unknown normalisation '{s}' (expected none or window)")),
    }
}

/// Comma-separated sampling times, e.g. `0.5,1,2.5`.
pub fn parse_times(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad time '{t}': {e}")))
        .collect()
}

/// `NAME=PATH`
pub fn parse_named_path(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
        _ => Err(format!("expected NAME=PATH, got '{s}'")),
    }
}

#[derive(Clone, Debug)]
pub struct MetricOptions {
    pub metric: MetricKind,
    pub c: f64,
    pub p: f64,
    pub gamma: Option<f64>,
    pub weights: WeightKind,
    pub rho: Option<f64>,
    pub sampling_times: Option<Vec<f64>>,
    pub custom_weights: Option<PathBuf>,
    pub normalize: Normalization,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomWeightsFile {
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl MetricOptions {
    pub fn params(&self) -> CliResult<MetricParams> {
        let gamma = match (self.metric, self.gamma) {
            (MetricKind::Tm | MetricKind::TmLp, None) => {
                return Err(usage(format!("--gamma is required for metric {}", self.metric)))
            }
            (_, gamma) => gamma.unwrap_or(1.0),
        };
        Ok(MetricParams::new(self.c, self.p, gamma)?.with_normalization(self.normalize))
    }

    pub fn schedule(&self) -> CliResult<ScheduleSpec> {
        let exponential = matches!(
            self.weights,
            WeightKind::OnlineExp | WeightKind::OnlineExpNormalized | WeightKind::PredictorExp | WeightKind::PredictorExpNormalized
        );
        if self.rho.is_some() && !exponential {
            return Err(usage("--rho only applies to the exponential schedules"));
        }
        if self.sampling_times.is_some() && self.weights != WeightKind::SamplingProportional {
            return Err(usage("--sampling-times requires --weights sampling-proportional"));
        }
        if self.custom_weights.is_some() && self.weights != WeightKind::Custom {
            return Err(usage("--custom-weights requires --weights custom"));
        }
        let rho = || self.rho.ok_or_else(|| usage("--rho is required for exponential schedules"));
        Ok(match self.weights {
            WeightKind::Uniform => ScheduleSpec::Uniform,
            WeightKind::OnlineExp => ScheduleSpec::OnlineExp { rho: rho()?, normalized: false },
            WeightKind::OnlineExpNormalized => ScheduleSpec::OnlineExp { rho: rho()?, normalized: true },
            WeightKind::PredictorExp => ScheduleSpec::PredictorExp { rho: rho()?, normalized: false },
            WeightKind::PredictorExpNormalized => ScheduleSpec::PredictorExp { rho: rho()?, normalized: true },
            WeightKind::SamplingProportional => ScheduleSpec::SamplingProportional {
                times: self
                    .sampling_times
                    .clone()
                    .ok_or_else(|| usage("--sampling-times is required for sampling-proportional weights"))?,
            },
            WeightKind::Custom => {
                let path = self
                    .custom_weights
                    .as_ref()
                    .ok_or_else(|| usage("--custom-weights is required for custom weights"))?;
                let file: CustomWeightsFile =
                    serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                ScheduleSpec::Custom { w1: file.w1, w2: file.w2 }
            }
        })
    }
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_set(path: &Path) -> CliResult<TrajectorySet> {
    TrajectorySet::from_json(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("JSON values serialise");
    text.push('\n');
    text
}

/// Writes `truth.json` and `e1.json`..`e4.json`; returns the written paths.
pub fn run_generate(out_dir: &Path, separation: f64, c: f64, seed: u64) -> CliResult<Vec<PathBuf>> {
    let scenario = scenario::benchmark_scenario(separation, c, seed)?;
    fs::create_dir_all(out_dir).map_err(|source| CliError::Io { path: out_dir.to_path_buf(), source })?;
    let mut written = Vec::new();
    let files = std::iter::once(("truth", &scenario.truth))
        .chain(scenario.estimates.iter().map(|(name, set)| (name.as_str(), set)));
    for (name, set) in files {
        let path = out_dir.join(format!("{name}.json"));
        write(&path, &set.to_json())?;
        written.push(path);
    }
    Ok(written)
}

#[derive(Clone, Debug)]
pub struct EvalRequest {
    pub truth: PathBuf,
    pub estimate: PathBuf,
    pub options: MetricOptions,
    pub decompose: Option<PathBuf>,
    pub json: Option<PathBuf>,
    pub dump_lp: Option<PathBuf>,
}

/// Runs one evaluation, writes the requested files and returns the table
/// for standard output.
pub fn run_eval(req: &EvalRequest) -> CliResult<String> {
    let metric = req.options.metric;
    if req.decompose.is_some() && metric == MetricKind::Ospa2 {
        return Err(usage("ospa2 has no per-time decomposition; drop --decompose"));
    }
    if req.dump_lp.is_some() && metric != MetricKind::TmLp {
        return Err(usage("--dump-lp requires --metric tm-lp"));
    }
    let params = req.options.params()?;
    let spec = req.options.schedule()?;
    let truth = load_set(&req.truth)?;
    let estimate = load_set(&req.estimate)?;
    let weights = make_schedule(&spec, truth.window())?;

    if let Some(path) = &req.dump_lp {
        write(path, &to_lp_format(&build_lp(&truth, &estimate, &params, &weights)?))?;
    }
    let report = evaluate(metric, &truth, &estimate, &params, &weights)?;
    if let Some(path) = &req.json {
        write(path, &pretty(&output::summary_json(&report, truth.window(), params.p)))?;
    }
    if let Some(path) = &req.decompose {
        write(path, &output::per_time_csv(&report))?;
    }
    Ok(output::eval_table(&report, truth.window()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestScenario {
    truth: PathBuf,
    estimates: BTreeMap<String, PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    scenarios: Vec<ManifestScenario>,
}

#[derive(Clone, Debug)]
pub struct BatchRequest {
    /// JSON file `{"scenarios": [{"truth": path, "estimates": {name: path}}]}`;
    /// relative paths are resolved against the manifest's directory.
    pub manifest: Option<PathBuf>,
    /// Single-scenario alternative to a manifest.
    pub truth: Option<PathBuf>,
    pub estimates: Vec<(String, PathBuf)>,
    pub options: MetricOptions,
    pub p_prime: Option<f64>,
    pub json: Option<PathBuf>,
}

fn scenarios(req: &BatchRequest) -> CliResult<Vec<ManifestScenario>> {
    match (&req.manifest, &req.truth) {
        (Some(path), None) if req.estimates.is_empty() => {
            let manifest: Manifest =
                serde_json::from_str(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let base = path.parent().unwrap_or(Path::new("."));
            Ok(manifest
                .scenarios
                .into_iter()
                .map(|s| ManifestScenario {
                    truth: base.join(s.truth),
                    estimates: s.estimates.into_iter().map(|(n, p)| (n, base.join(p))).collect(),
                })
                .collect())
        }
        (None, Some(truth)) if !req.estimates.is_empty() => {
            let mut estimates = BTreeMap::new();
            for (name, path) in &req.estimates {
                if estimates.insert(name.clone(), path.clone()).is_some() {
                    return Err(usage(format!("estimate name '{name}' given twice")));
                }
            }
            Ok(vec![ManifestScenario { truth: truth.clone(), estimates }])
        }
        _ => Err(usage("give either --manifest, or --truth with at least one --estimate NAME=PATH")),
    }
}

pub fn run_batch(req: &BatchRequest) -> CliResult<String> {
    let params = req.options.params()?;
    let spec = req.options.schedule()?;
    let scenarios = scenarios(req)?;
    let Some(first) = scenarios.first() else {
        return Err(trajmetric::Error::EmptyBatch.into());
    };
    let names: Vec<String> = first.estimates.keys().cloned().collect();
    if names.is_empty() {
        return Err(usage("no algorithms to rank"));
    }
    for s in &scenarios {
        if !s.estimates.keys().eq(names.iter()) {
            return Err(usage("every scenario must list the same algorithms"));
        }
    }
    let mut loaded = Vec::with_capacity(scenarios.len());
    for s in &scenarios {
        let truth = load_set(&s.truth)?;
        let estimates = s.estimates.values().map(|p| load_set(p)).collect::<CliResult<Vec<_>>>()?;
        loaded.push((truth, estimates));
    }

    let mut results = Vec::with_capacity(names.len());
    let mut algorithms = Vec::with_capacity(names.len());
    for (a, name) in names.iter().enumerate() {
        let pairs: Vec<_> = loaded.iter().map(|(t, e)| (t.clone(), e[a].clone())).collect();
        let batch = batch_metric(&pairs, req.options.metric, &params, &spec, req.p_prime)?;
        results.push((name.clone(), batch.aggregate));
        algorithms.push(json!({"name": name, "values": batch.values, "aggregate": batch.aggregate}));
    }
    let ranking = rank(&results);
    if let Some(path) = &req.json {
        let summary = json!({
            "metric": req.options.metric.name(),
            "p_prime": req.p_prime.unwrap_or(params.p),
            "algorithms": algorithms,
            "ranking": ranking,
        });
        write(path, &pretty(&summary))?;
    }
    Ok(output::ranking_table(&ranking))
}
