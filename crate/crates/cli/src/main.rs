use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use satisficing::harness::calibrate::{calibrate_pricing, read_price_volume_csv};
use satisficing::harness::presets::{preset, PRESET_NAMES};
use satisficing::harness::tail::{fit_tail_exponent, histogram, quantile, tail_exceedance, x_grid};
use satisficing::harness::{
    aggregate, run_replications, write_csv, AggregateRow, Algorithm, EpisodeRecord, Experiment,
    Manifest, ConfigFile, AGGREGATE_CSV, MANIFEST_JSON, RAW_CSV,
};
use satisficing::{Ablation, OracleConfig, OracleKind};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "satisficing", version, about = "Satisficing bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment over its horizon grid.
    Run(ExperimentArgs),
    /// Compare several algorithms over a horizon grid.
    Sweep {
        #[command(flatten)]
        args: ExperimentArgs,
        /// Algorithms to compare.
        #[arg(long, value_delimiter = ',', default_value = "select,select_lite")]
        algorithms: Vec<Algorithm>,
    },
    /// Regret distribution at one horizon: histograms and exceedance curves.
    Tail {
        #[command(flatten)]
        args: ExperimentArgs,
        #[arg(long, value_delimiter = ',', default_value = "select,select_lite")]
        algorithms: Vec<Algorithm>,
        /// Horizon T (overrides --horizons).
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 10.0)]
        bin_width: f64,
        /// Spacing of the exceedance x grid.
        #[arg(long, default_value_t = 10.0)]
        grid_step: f64,
    },
    /// SELECT with each of its three steps removed in turn, plus the full algorithm.
    Ablation(ExperimentArgs),
    /// SELECT over a grid of schedule scales λ.
    Robustness {
        #[command(flatten)]
        args: ExperimentArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,5")]
        lambdas: Vec<f64>,
    },
    /// Fit a linear-demand pricing model to (price, volume) rows.
    Calibrate {
        /// CSV with `price` and `volume` columns (else the first two columns).
        input: PathBuf,
        /// Write the fit as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets.
    Presets,
}

/// Experiment configuration. Flags override the config file, which overrides
/// the preset.
#[derive(Args, Debug, Clone, Default)]
struct ExperimentArgs {
    /// Built-in instance; see `satisficing presets`.
    #[arg(long)]
    preset: Option<String>,
    /// JSON config file with any subset of the experiment fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long)]
    oracle: Option<OracleKind>,
    /// Satisficing level S.
    #[arg(long)]
    level: Option<f64>,
    /// Tail parameter of SELECT-LITE and SELECT-LITE+.
    #[arg(long)]
    zeta: Option<f64>,
    /// Schedule scale λ.
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    ablation: Option<Ablation>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<u32>,
    /// Comma-separated horizons.
    #[arg(long, value_delimiter = ',')]
    horizons: Option<Vec<u64>>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    /// Merges config file, flags and the command's default preset into an experiment
    /// and an output directory.
    fn resolve(&self, default_preset: &str, default_out: &str) -> Result<(Experiment, PathBuf)> {
        self.resolve_with(default_preset, default_out, None)
    }

    /// As `resolve`, with a replication count used when neither the flags
    /// nor the config file set one.
    fn resolve_with(
        &self,
        default_preset: &str,
        default_out: &str,
        default_reps: Option<u32>,
    ) -> Result<(Experiment, PathBuf)> {
        let mut file = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        if let Some(p) = &self.preset {
            file.preset = Some(p.clone());
            file.model = None;
        }
        if file.preset.is_none() && file.model.is_none() {
            file.preset = Some(default_preset.to_string());
        }
        if let Some(kind) = self.oracle {
            file.oracle = Some(match file.oracle {
                Some(cfg) => OracleConfig { kind, ..cfg },
                None => OracleConfig::new(kind),
            });
        }
        file.algorithm = self.algorithm.or(file.algorithm);
        file.satisficing_level = self.level.or(file.satisficing_level);
        file.zeta = self.zeta.or(file.zeta);
        file.gamma_scale = self.lambda.or(file.gamma_scale);
        file.ablation = self.ablation.or(file.ablation);
        file.base_seed = self.seed.or(file.base_seed);
        file.replications = self.reps.or(file.replications).or(default_reps);
        if let Some(h) = &self.horizons {
            file.horizons = Some(h.clone());
        }
        let out = self
            .out
            .clone()
            .or(file.output.take())
            .unwrap_or_else(|| Path::new("results").join(default_out));
        let experiment = file.resolve().context("invalid experiment configuration")?;
        Ok((experiment, out))
    }
}

#[derive(Serialize)]
struct HistogramRow<'a> {
    algorithm: &'a str,
    bin_start: f64,
    bin_end: f64,
    count: u64,
}

#[derive(Serialize)]
struct ExceedanceRow<'a> {
    algorithm: &'a str,
    x: f64,
    count: u64,
    probability: f64,
    lower: f64,
    upper: f64,
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let (experiment, out) = args.resolve("karm-realizable", "run")?;
            run_experiments("run", vec![experiment], &out)
        }
        Command::Sweep { args, algorithms } => {
            let (base, out) = args.resolve("karm-realizable", "sweep")?;
            run_experiments("sweep", with_algorithms(&base, &algorithms)?, &out)
        }
        Command::Tail {
            args,
            algorithms,
            horizon,
            bin_width,
            grid_step,
        } => {
            let (mut base, out) = args.resolve_with("tail", "tail", Some(5000))?;
            base.horizons = vec![horizon];
            let experiments = with_algorithms(&base, &algorithms)?;
            tail(experiments, horizon, bin_width, grid_step, &out)
        }
        Command::Ablation(args) => {
            let (base, out) = args.resolve("lipschitz-ablation", "ablation")?;
            if base.algorithm != Algorithm::Select {
                bail!("the ablation study runs SELECT only");
            }
            let experiments = Ablation::ALL
                .into_iter()
                .map(|ablation| Experiment { ablation, ..base.clone() })
                .collect();
            run_experiments("ablation", experiments, &out)
        }
        Command::Robustness { args, lambdas } => {
            let (base, out) = args.resolve("lipschitz-ablation", "robustness")?;
            let experiments = lambdas
                .iter()
                .map(|&gamma_scale| {
                    let s = Experiment { gamma_scale, ..base.clone() };
                    s.validate().map(|_| s)
                })
                .collect::<satisficing::Result<Vec<_>>>()?;
            run_experiments("robustness", experiments, &out)
        }
        Command::Calibrate { input, out } => calibrate(&input, out.as_deref()),
        Command::Presets => {
            for name in PRESET_NAMES {
                let p = preset(name)?;
                println!("{name:<24} {}", p.description);
            }
            Ok(())
        }
    }
}

fn with_algorithms(base: &Experiment, algorithms: &[Algorithm]) -> Result<Vec<Experiment>> {
    if algorithms.is_empty() {
        bail!("no algorithms given");
    }
    algorithms
        .iter()
        .map(|&algorithm| {
            let s = Experiment { algorithm, ..base.clone() };
            s.validate()?;
            Ok(s)
        })
        .collect()
}

fn command_line() -> String {
    std::env::args().collect::<Vec<_>>().join(" ")
}

fn run_all(experiments: &[Experiment]) -> Result<Vec<EpisodeRecord>> {
    let mut records = Vec::new();
    for experiment in experiments {
        records.extend(run_replications(experiment).with_context(|| format!("running {}", experiment.label()))?);
    }
    Ok(records)
}

/// Writes raw, aggregate and manifest files for `experiments` and prints the
/// aggregate table.
fn run_experiments(command: &str, experiments: Vec<Experiment>, out: &Path) -> Result<()> {
    let records = run_all(&experiments)?;
    let rows = aggregate(&records);
    write_csv(&out.join(RAW_CSV), &records)?;
    write_csv(&out.join(AGGREGATE_CSV), &rows)?;
    let mut manifest = Manifest::new(&command_line(), experiments);
    manifest.command = format!("{command}: {}", manifest.command);
    manifest.outputs = vec![RAW_CSV.into(), AGGREGATE_CSV.into()];
    manifest.write(&out.join(MANIFEST_JSON))?;
    print_table(&rows);
    println!("wrote {}", out.display());
    Ok(())
}

fn print_table(rows: &[AggregateRow]) {
    println!(
        "{:<36} {:>7} {:>6} {:>22} {:>22} {:>7}",
        "algorithm", "T", "reps", "satisficing regret", "standard regret", "rounds"
    );
    for r in rows {
        println!(
            "{:<36} {:>7} {:>6} {:>13.3} ± {:<6.3} {:>13.3} ± {:<6.3} {:>7.2}",
            r.algorithm,
            r.horizon,
            r.replications,
            r.mean_satisficing_regret,
            r.stderr_satisficing_regret,
            r.mean_standard_regret,
            r.stderr_standard_regret,
            r.mean_rounds_used
        );
    }
}

fn tail(experiments: Vec<Experiment>, horizon: u64, bin_width: f64, grid_step: f64, out: &Path) -> Result<()> {
    let records = run_all(&experiments)?;
    let rows = aggregate(&records);
    let labels: Vec<String> = experiments.iter().map(Experiment::label).collect();
    let sample = |label: &str| -> Vec<f64> {
        records
            .iter()
            .filter(|r| r.algorithm == label && r.horizon == horizon)
            .map(|r| r.satisficing_regret)
            .collect()
    };
    let max = records.iter().map(|r| r.satisficing_regret).fold(0.0, f64::max);
    let grid = x_grid(max, grid_step);

    let mut hist_rows = Vec::new();
    let mut exc_rows = Vec::new();
    let mut curves = Vec::new();
    for label in &labels {
        let xs = sample(label);
        let h = histogram(&xs, bin_width)?;
        for (j, &count) in h.counts.iter().enumerate() {
            hist_rows.push(HistogramRow {
                algorithm: label,
                bin_start: h.edge(j),
                bin_end: h.edge(j + 1),
                count,
            });
        }
        let curve = tail_exceedance(&xs, &grid)?;
        for p in &curve {
            exc_rows.push(ExceedanceRow {
                algorithm: label,
                x: p.x,
                count: p.count,
                probability: p.probability,
                lower: p.lower,
                upper: p.upper,
            });
        }
        curves.push((label, xs, curve));
    }
    write_csv(&out.join(RAW_CSV), &records)?;
    write_csv(&out.join(AGGREGATE_CSV), &rows)?;
    write_csv(&out.join("histogram.csv"), &hist_rows)?;
    write_csv(&out.join("exceedance.csv"), &exc_rows)?;
    let mut manifest = Manifest::new(&command_line(), experiments);
    manifest.command = format!("tail: {}", manifest.command);
    manifest.outputs = [RAW_CSV, AGGREGATE_CSV, "histogram.csv", "exceedance.csv"]
        .map(String::from)
        .to_vec();
    manifest.write(&out.join(MANIFEST_JSON))?;

    print_table(&rows);
    // exceedance of every algorithm at the first one's 95th percentile
    let q95 = quantile(&curves[0].1, 0.95)?;
    println!("95th percentile of {}: {q95:.3}", curves[0].0);
    for (label, xs, curve) in &curves {
        let p = tail_exceedance(xs, &[q95])?[0];
        let fit = fit_tail_exponent(curve)
            .map(|f| format!("fitted tail exponent {:.3} over {} points", f.zeta, f.points))
            .unwrap_or_else(|| "too few points for a tail fit".into());
        println!(
            "{label}: P(Regret_S > {q95:.3}) = {:.4} [{:.4}, {:.4}]; {fit}",
            p.probability, p.lower, p.upper
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}

fn calibrate(input: &Path, out: Option<&Path>) -> Result<()> {
    let rows = read_price_volume_csv(input)?;
    let fit = calibrate_pricing(&rows)?;
    println!("rows: {}", fit.rows);
    println!("volume ≈ {:.6} − {:.6}·price, residual σ = {:.6}", fit.g, fit.h, fit.sigma);
    for w in &fit.warnings {
        eprintln!("warning: {w}");
    }
    let json = serde_json::to_string_pretty(&fit)?;
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => println!("{json}"),
    }
    Ok(())
}
