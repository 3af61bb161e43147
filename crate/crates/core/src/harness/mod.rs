//! Replicated experiments: presets, seeded episodes, aggregation and CSV.
//!
//! Replication `r` of an experiment runs on seed
//! `replication_seed(base_seed, r)` at every horizon, so curves over T use
//! common random numbers and adding replications never disturbs earlier ones.

pub mod calibrate;
pub mod presets;
pub mod tail;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::{summarize, Phase, RewardModel, RunTrace};
use crate::error::{Error, Result};
use crate::oracles::{new_session, OracleConfig};
use crate::rng::{replication_seed, stream, Stream};
use crate::select::{run_select, Ablation, SelectConfig};
use crate::select_lite::{lite_radius_constant, run_select_lite, LiteConfig};
use crate::select_lite_plus::run_select_lite_plus;

pub use presets::{preset, Preset, PRESET_NAMES};

/// Version of the CSV and manifest layouts.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Select,
    SelectLite,
    SelectLitePlus,
    /// The learning oracle alone, run for the whole horizon.
    OracleOnly,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Select => "select",
            Algorithm::SelectLite => "select_lite",
            Algorithm::SelectLitePlus => "select_lite_plus",
            Algorithm::OracleOnly => "oracle_only",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "select" => Ok(Algorithm::Select),
            "select_lite" | "lite" => Ok(Algorithm::SelectLite),
            "select_lite_plus" | "lite_plus" => Ok(Algorithm::SelectLitePlus),
            "oracle_only" | "oracle" => Ok(Algorithm::OracleOnly),
            _ => Err(Error::Config(format!("unknown algorithm {s:?}"))),
        }
    }
}

fn default_zeta() -> f64 {
    0.1
}

fn default_gamma_scale() -> f64 {
    1.0
}

/// A fully resolved experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    /// Instance label written to every CSV row.
    pub preset: String,
    pub model: RewardModel,
    pub satisficing_level: f64,
    pub algorithm: Algorithm,
    pub oracle: OracleConfig,
    pub horizons: Vec<u64>,
    pub replications: u32,
    pub base_seed: u64,
    #[serde(default = "default_zeta")]
    pub zeta: f64,
    #[serde(default = "default_gamma_scale")]
    pub gamma_scale: f64,
    #[serde(default)]
    pub ablation: Ablation,
}

impl Experiment {
    /// Experiment for a named preset with its default horizons, 100 replications
    /// and base seed 0.
    pub fn from_preset(name: &str, algorithm: Algorithm) -> Result<Self> {
        let p = preset(name)?;
        Ok(Experiment {
            preset: p.name.to_string(),
            model: p.model,
            satisficing_level: p.satisficing_level,
            algorithm,
            oracle: p.oracle,
            horizons: p.horizons,
            replications: 100,
            base_seed: 0,
            zeta: p.zeta,
            gamma_scale: 1.0,
            ablation: Ablation::Full,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.oracle.check_compatible(&self.model)?;
        if self.replications < 1 {
            return Err(Error::Config("replications must be at least 1".into()));
        }
        if self.horizons.is_empty() || self.horizons.contains(&0) {
            return Err(Error::Config("horizons must be a non-empty list of positive integers".into()));
        }
        if !self.satisficing_level.is_finite() {
            return Err(Error::Config("satisficing level must be finite".into()));
        }
        if !(self.gamma_scale > 0.0 && self.gamma_scale.is_finite()) {
            return Err(Error::Config("gamma scale must be positive".into()));
        }
        if matches!(self.algorithm, Algorithm::SelectLite | Algorithm::SelectLitePlus) {
            lite_radius_constant(self.zeta)?;
        }
        if self.algorithm == Algorithm::SelectLitePlus && self.model.num_arms().is_none() {
            return Err(Error::Config("select_lite_plus needs a finite arm set".into()));
        }
        Ok(())
    }

    /// Algorithm column: the algorithm name plus any non-default variant
    /// settings, e.g. `select/skip_step2` or `select_lite/zeta=0.4`.
    pub fn label(&self) -> String {
        let mut s = self.algorithm.name().to_string();
        match self.algorithm {
            Algorithm::SelectLite | Algorithm::SelectLitePlus => {
                s.push_str(&format!("/zeta={}", self.zeta));
            }
            Algorithm::OracleOnly => {
                s.push('/');
                s.push_str(self.oracle.kind.name());
                return s;
            }
            Algorithm::Select => {}
        }
        if self.ablation != Ablation::Full && self.algorithm == Algorithm::Select {
            s.push('/');
            s.push_str(self.ablation.name());
        }
        if self.gamma_scale != 1.0 {
            s.push_str(&format!("/lambda={}", self.gamma_scale));
        }
        s
    }

    fn select_config(&self, horizon: u64) -> Result<SelectConfig> {
        let mut cfg = SelectConfig::with_oracle(&self.model, self.oracle, self.satisficing_level, horizon)?;
        cfg.gamma_scale = self.gamma_scale;
        cfg.ablation = self.ablation;
        Ok(cfg)
    }

    /// One episode at `horizon` on the given stream.
    pub fn run_trace(&self, horizon: u64, rng: &mut Stream) -> Result<RunTrace> {
        match self.algorithm {
            Algorithm::Select => run_select(&self.model, &self.select_config(horizon)?, rng),
            Algorithm::SelectLite => {
                let cfg = LiteConfig::new(self.select_config(horizon)?, self.zeta)?;
                run_select_lite(&self.model, &cfg, rng)
            }
            Algorithm::SelectLitePlus => {
                let cfg = LiteConfig::new(self.select_config(horizon)?, self.zeta)?;
                run_select_lite_plus(&self.model, &cfg, rng)
            }
            Algorithm::OracleOnly => run_oracle_only(&self.model, &self.oracle, horizon, rng),
        }
    }
}

/// The oracle alone for `horizon` steps, labelled as one oracle round.
pub fn run_oracle_only(
    model: &RewardModel,
    oracle: &OracleConfig,
    horizon: u64,
    rng: &mut Stream,
) -> Result<RunTrace> {
    let mut session = new_session(oracle, model, horizon.max(2), rng)?;
    let mut trace = RunTrace::new(horizon);
    while !trace.is_complete() {
        let arm = session.select_arm()?;
        let y = model.pull_unchecked(&arm, rng);
        session.observe(y)?;
        trace.push(arm, y, Phase::OracleStep, 1);
    }
    Ok(trace)
}

/// One raw CSV row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub algorithm: String,
    pub preset: String,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub rep: u32,
    pub satisficing_regret: f64,
    pub standard_regret: f64,
    pub rounds_used: u32,
    pub seed: u64,
}

/// Runs replication `rep` of `exp` at `horizon`.
pub fn run_episode(exp: &Experiment, horizon: u64, rep: u32) -> Result<EpisodeRecord> {
    let seed = replication_seed(exp.base_seed, rep as u64);
    let mut rng = stream(seed);
    let trace = exp.run_trace(horizon, &mut rng)?;
    let summary = summarize(&exp.model, &trace, exp.satisficing_level)?;
    Ok(EpisodeRecord {
        algorithm: exp.label(),
        preset: exp.preset.clone(),
        horizon,
        rep,
        satisficing_regret: summary.satisficing_regret,
        standard_regret: summary.standard_regret,
        rounds_used: trace.rounds_used(),
        seed,
    })
}

/// All (horizon, replication) episodes, in horizon-major order. Episodes run
/// on the rayon pool (size set by `RAYON_NUM_THREADS`).
pub fn run_replications(exp: &Experiment) -> Result<Vec<EpisodeRecord>> {
    exp.validate()?;
    let jobs: Vec<(u64, u32)> = exp
        .horizons
        .iter()
        .flat_map(|&t| (0..exp.replications).map(move |r| (t, r)))
        .collect();
    jobs.par_iter()
        .map(|&(t, r)| run_episode(exp, t, r))
        .collect()
}

/// Mean and standard error per (algorithm, preset, T).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub preset: String,
    #[serde(rename = "T")]
    pub horizon: u64,
    pub replications: u32,
    pub mean_satisficing_regret: f64,
    pub stderr_satisficing_regret: f64,
    pub mean_standard_regret: f64,
    pub stderr_standard_regret: f64,
    pub mean_rounds_used: f64,
}

/// Sample mean and standard error s/√n (0 when n = 1), two-pass.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Groups records by (algorithm, preset, T). Records are ordered by
/// replication inside each group before summing, so the result does not
/// depend on the input order.
pub fn aggregate(records: &[EpisodeRecord]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(String, String, u64), Vec<&EpisodeRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.algorithm.clone(), r.preset.clone(), r.horizon))
            .or_default()
            .push(r);
    }
    groups
        .into_iter()
        .map(|((algorithm, preset, horizon), mut rs)| {
            rs.sort_by_key(|r| (r.rep, r.seed));
            let sat: Vec<f64> = rs.iter().map(|r| r.satisficing_regret).collect();
            let std: Vec<f64> = rs.iter().map(|r| r.standard_regret).collect();
            let rounds: Vec<f64> = rs.iter().map(|r| r.rounds_used as f64).collect();
            let (ms, ss) = mean_stderr(&sat);
            let (mr, sr) = mean_stderr(&std);
            AggregateRow {
                algorithm,
                preset,
                horizon,
                replications: rs.len() as u32,
                mean_satisficing_regret: ms,
                stderr_satisficing_regret: ss,
                mean_standard_regret: mr,
                stderr_standard_regret: sr,
                mean_rounds_used: mean_stderr(&rounds).0,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub records: Vec<EpisodeRecord>,
    pub aggregate: Vec<AggregateRow>,
}

impl ExperimentResult {
    /// Aggregate row at horizon `t`, if present.
    pub fn at(&self, t: u64) -> Option<&AggregateRow> {
        self.aggregate.iter().find(|r| r.horizon == t)
    }

    /// Satisficing regrets of all replications at horizon `t`, by replication.
    pub fn satisficing_regrets(&self, t: u64) -> Vec<f64> {
        let mut rs: Vec<&EpisodeRecord> = self.records.iter().filter(|r| r.horizon == t).collect();
        rs.sort_by_key(|r| r.rep);
        rs.iter().map(|r| r.satisficing_regret).collect()
    }
}

pub fn run_experiment(exp: &Experiment) -> Result<ExperimentResult> {
    let records = run_replications(exp)?;
    let aggregate = aggregate(&records);
    Ok(ExperimentResult { records, aggregate })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Serializes rows with a header line. The output is a pure function of the
/// rows, so identical runs produce identical bytes.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// Raw rows file name, aggregate file name.
pub const RAW_CSV: &str = "raw.csv";
pub const AGGREGATE_CSV: &str = "aggregate.csv";
pub const MANIFEST_JSON: &str = "manifest.json";

/// Everything needed to reproduce an output directory.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub tool_version: String,
    pub git_describe: Option<String>,
    pub command: String,
    pub experiments: Vec<Experiment>,
    pub outputs: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, experiments: Vec<Experiment>) -> Self {
        Manifest {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            git_describe: git_describe(),
            command: command.to_string(),
            experiments,
            outputs: Vec::new(),
        }
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = File::create(path).map_err(io_err(path))?;
        let json = serde_json::to_string_pretty(self).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        f.write_all(json.as_bytes()).map_err(io_err(path))?;
        f.write_all(b"\n").map_err(io_err(path))
    }
}

/// `git describe --always --dirty --tags` of the working directory, if any.
pub fn git_describe() -> Option<String> {
    let out = std::process::Command::new("git")
        .args(["describe", "--always", "--dirty", "--tags"])
        .output()
        .ok()?;
    if !out.status.success() {
        return None;
    }
    let s = String::from_utf8(out.stdout).ok()?.trim().to_string();
    (!s.is_empty()).then_some(s)
}

/// Optional-field config file; missing fields come from `preset` when given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<String>,
    pub model: Option<RewardModel>,
    pub satisficing_level: Option<f64>,
    pub algorithm: Option<Algorithm>,
    pub oracle: Option<OracleConfig>,
    pub horizons: Option<Vec<u64>>,
    pub replications: Option<u32>,
    pub base_seed: Option<u64>,
    pub zeta: Option<f64>,
    pub gamma_scale: Option<f64>,
    pub ablation: Option<Ablation>,
    pub output: Option<PathBuf>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Fills gaps from the preset (if any) and validates the result.
    pub fn resolve(&self) -> Result<Experiment> {
        let algorithm = self.algorithm.unwrap_or(Algorithm::Select);
        let mut exp = match (&self.preset, &self.model) {
            (Some(name), _) => Experiment::from_preset(name, algorithm)?,
            (None, Some(model)) => {
                let level = self.satisficing_level.ok_or_else(|| {
                    Error::Config("an inline model needs a satisficing_level".into())
                })?;
                let horizons = self
                    .horizons
                    .clone()
                    .ok_or_else(|| Error::Config("an inline model needs horizons".into()))?;
                Experiment {
                    preset: "custom".into(),
                    model: model.clone(),
                    satisficing_level: level,
                    algorithm,
                    oracle: OracleConfig::default_for(model),
                    horizons,
                    replications: 100,
                    base_seed: 0,
                    zeta: default_zeta(),
                    gamma_scale: 1.0,
                    ablation: Ablation::Full,
                }
            }
            (None, None) => {
                return Err(Error::Config("config needs a preset or a model".into()));
            }
        };
        if let (Some(_), Some(model)) = (&self.preset, &self.model) {
            exp.model = model.clone();
            exp.oracle = OracleConfig::default_for(model);
        }
        if let Some(v) = self.satisficing_level {
            exp.satisficing_level = v;
        }
        if let Some(v) = self.oracle {
            exp.oracle = v;
        }
        if let Some(v) = &self.horizons {
            exp.horizons = v.clone();
        }
        if let Some(v) = self.replications {
            exp.replications = v;
        }
        if let Some(v) = self.base_seed {
            exp.base_seed = v;
        }
        if let Some(v) = self.zeta {
            exp.zeta = v;
        }
        if let Some(v) = self.gamma_scale {
            exp.gamma_scale = v;
        }
        if let Some(v) = self.ablation {
            exp.ablation = v;
        }
        exp.validate()?;
        Ok(exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(algorithm: Algorithm) -> Experiment {
        let mut s = Experiment::from_preset("karm-realizable", algorithm).unwrap();
        s.horizons = vec![200, 400];
        s.replications = 6;
        s.base_seed = 11;
        s
    }

    #[test]
    fn records_are_horizon_major_and_seeded_per_replication() {
        let res = run_experiment(&small(Algorithm::Select)).unwrap();
        assert_eq!(res.records.len(), 12);
        assert_eq!(res.records[0].horizon, 200);
        assert_eq!(res.records[6].horizon, 400);
        assert_eq!(res.records[1].seed, replication_seed(11, 1));
        assert_eq!(res.records[1].seed, res.records[7].seed);
        assert_eq!(res.aggregate.len(), 2);
    }

    #[test]
    fn all_algorithms_run() {
        for a in [
            Algorithm::Select,
            Algorithm::SelectLite,
            Algorithm::SelectLitePlus,
            Algorithm::OracleOnly,
        ] {
            let res = run_experiment(&small(a)).unwrap();
            assert!(res.records.iter().all(|r| r.satisficing_regret >= 0.0));
        }
    }

    #[test]
    fn labels() {
        let mut s = small(Algorithm::Select);
        assert_eq!(s.label(), "select");
        s.ablation = Ablation::SkipStep2;
        s.gamma_scale = 2.0;
        assert_eq!(s.label(), "select/skip_step2/lambda=2");
        let s = small(Algorithm::SelectLite);
        assert_eq!(s.label(), "select_lite/zeta=0.1");
        assert_eq!(small(Algorithm::OracleOnly).label(), "oracle_only/thompson");
    }

    #[test]
    fn mean_stderr_matches_hand_values() {
        let (m, se) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_stderr(&[7.0]), (7.0, 0.0));
    }

    #[test]
    fn validation() {
        let mut s = small(Algorithm::Select);
        s.replications = 0;
        assert!(s.validate().is_err());
        let mut s = small(Algorithm::Select);
        s.horizons = vec![];
        assert!(s.validate().is_err());
        let mut s = Experiment::from_preset("concave-realizable", Algorithm::SelectLitePlus).unwrap();
        s.replications = 1;
        assert!(s.validate().is_err());
        let mut s = small(Algorithm::SelectLite);
        s.zeta = 1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn config_file_resolution() {
        let f: ConfigFile = serde_json::from_str(
            r#"{"preset": "tail", "algorithm": "select_lite", "zeta": 0.4, "horizons": [100], "replications": 3}"#,
        )
        .unwrap();
        let s = f.resolve().unwrap();
        assert_eq!((s.zeta, s.replications, s.satisficing_level), (0.4, 3, 0.7));

        let f: ConfigFile = serde_json::from_str(
            r#"{"model": {"kind": "finite", "means": [0.1, 0.9]}, "satisficing_level": 0.5, "horizons": [50]}"#,
        )
        .unwrap();
        let s = f.resolve().unwrap();
        assert_eq!(s.preset, "custom");
        assert_eq!(s.model.noise_std, 1.0);

        let f: ConfigFile = serde_json::from_str(r#"{"model": {"kind": "finite", "means": [0.1]}}"#).unwrap();
        assert!(f.resolve().is_err());
        assert!(serde_json::from_str::<ConfigFile>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn csv_and_manifest_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let res = run_experiment(&small(Algorithm::Select)).unwrap();
        let raw = dir.path().join("sub").join(RAW_CSV);
        write_csv(&raw, &res.records).unwrap();
        let text = std::fs::read_to_string(&raw).unwrap();
        assert!(text.starts_with(
            "algorithm,preset,T,rep,satisficing_regret,standard_regret,rounds_used,seed\n"
        ));
        let mut rdr = csv::Reader::from_path(&raw).unwrap();
        let back: Vec<EpisodeRecord> = rdr.deserialize().map(|r| r.unwrap()).collect();
        assert_eq!(back, res.records);

        let m = Manifest::new("run", vec![small(Algorithm::Select)]);
        let mp = dir.path().join(MANIFEST_JSON);
        m.write(&mp).unwrap();
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&mp).unwrap()).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["experiments"][0]["preset"], "karm-realizable");
    }
}
