// SPDX-License-Identifier: Apache-2.0

//! `connmod`: cluster a network, audit cluster connectivity, run the
//! Connectivity Modifier, score clusterings and estimate LFR parameters.
//!
//! Exit codes: 0 success, 2 I/O or malformed input, 3 bad configuration,
//! 4 clustering does not match the graph, 5 a postcondition failed.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use connmod_core::{ClustererConfig, ClustererKind, ThresholdFn};

/// Resolutions of the standard CPM sweep.
pub const RESOLUTION_SWEEP: [f64; 5] = [0.5, 0.1, 0.01, 0.001, 0.0001];

#[derive(Parser, Debug, Serialize)]
#[command(name = "connmod", version, about = "Well-connected graph clustering toolkit")]
pub struct Cli {
    /// Worker threads (default: available parallelism). Results do not
    /// depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Cluster a graph and write the clustering TSV plus a summary.
    Cluster(ClusterArgs),
    /// Report minimum cuts and well-connectedness of every cluster.
    Profile(ProfileArgs),
    /// Run the Connectivity Modifier pipeline.
    Cm(CmArgs),
    /// Compare two clusterings with NMI, AMI and ARI.
    Eval(EvalArgs),
    /// Estimate LFR generator parameters from a graph and clustering.
    LfrParams(LfrArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClustererName {
    Cpm,
    Modularity,
    Ikc,
}

#[derive(Args, Debug, Serialize)]
pub struct ClustererArgs {
    #[arg(long, value_enum)]
    pub clusterer: Option<ClustererName>,
    /// CPM resolution.
    #[arg(long, default_value_t = 0.01)]
    pub resolution: f64,
    /// IKC minimum core number.
    #[arg(long, default_value_t = 10)]
    pub k: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run CPM at r = 0.5, 0.1, 0.01, 0.001, 0.0001 instead of
    /// `--resolution`, writing one set of outputs per value.
    #[arg(long)]
    pub resolution_sweep: bool,
}

impl ClustererArgs {
    fn config(&self, name: ClustererName, resolution: f64) -> ClustererConfig {
        match name {
            ClustererName::Cpm => ClustererConfig::cpm(resolution, self.seed),
            ClustererName::Modularity => ClustererConfig::modularity(self.seed),
            ClustererName::Ikc => ClustererConfig::ikc(self.k),
        }
    }

    /// `(suffix, config)` per run; the suffix is empty without a sweep.
    pub fn runs(&self, name: ClustererName) -> Result<Vec<(String, ClustererConfig)>, String> {
        if !self.resolution_sweep {
            return Ok(vec![(String::new(), self.config(name, self.resolution))]);
        }
        if name != ClustererName::Cpm {
            return Err("--resolution-sweep needs --clusterer cpm".into());
        }
        Ok(RESOLUTION_SWEEP
            .iter()
            .map(|&r| (format!(".r{r}"), self.config(name, r)))
            .collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdName {
    Log10,
    Log2,
    SqrtDiv5,
    /// `r (n - 1)`, with `--r`.
    Traag,
    /// `a n + b log10 n + c`, with `--coef-a`, `--coef-b`, `--coef-c`.
    Custom,
}

#[derive(Args, Debug, Serialize)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, default_value_t = ThresholdName::Log10)]
    pub threshold: ThresholdName,
    #[arg(long, default_value_t = 0.01)]
    pub r: f64,
    #[arg(long, default_value_t = 0.0)]
    pub coef_a: f64,
    #[arg(long, default_value_t = 0.0)]
    pub coef_b: f64,
    #[arg(long, default_value_t = 0.0)]
    pub coef_c: f64,
}

impl ThresholdArgs {
    pub fn resolve(&self) -> ThresholdFn {
        match self.threshold {
            ThresholdName::Log10 => ThresholdFn::Log10,
            ThresholdName::Log2 => ThresholdFn::Log2,
            ThresholdName::SqrtDiv5 => ThresholdFn::SqrtDiv5,
            ThresholdName::Traag => ThresholdFn::TraagLinear { r: self.r },
            ThresholdName::Custom => ThresholdFn::Custom {
                a: self.coef_a,
                b: self.coef_b,
                c: self.coef_c,
            },
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct ClusterArgs {
    /// Edge list, one `u<TAB>v` pair per line.
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub clusterer: ClustererArgs,
    /// Output prefix: writes `<out>.tsv` and `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct ProfileArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Clustering TSV, `node<TAB>cluster_id`; any tool's output works.
    #[arg(long)]
    pub clustering: PathBuf,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    /// Only clusters of at least this size are profiled.
    #[arg(long, default_value_t = 11)]
    pub min_size: usize,
    /// Output prefix: writes `<out>.json` and `<out>.scatter.tsv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct CmArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Starting clustering; without it stage 1 runs `--clusterer`. With it
    /// and no `--clusterer`, pieces are not re-clustered after a cut.
    #[arg(long)]
    pub clustering: Option<PathBuf>,
    #[command(flatten)]
    pub clusterer: ClustererArgs,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    /// Minimum cluster size B.
    #[arg(long = "b", default_value_t = 11)]
    pub min_size: usize,
    #[arg(long)]
    pub max_depth: Option<usize>,
    /// Output prefix: writes `<out>.tsv` and `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
}

impl CmArgs {
    /// `(suffix, clusterer)` per run.
    pub fn runs(&self) -> Result<Vec<(String, ClustererConfig)>, String> {
        match (self.clusterer.clusterer, &self.clustering) {
            (Some(name), _) => self.clusterer.runs(name),
            (None, Some(path)) => Ok(vec![(
                String::new(),
                ClustererConfig {
                    kind: ClustererKind::External { path: path.clone() },
                    seed: self.clusterer.seed,
                },
            )]),
            (None, None) => Err("cm needs --clusterer or --clustering".into()),
        }
    }
}

#[derive(Args, Debug, Serialize)]
pub struct EvalArgs {
    /// First clustering TSV (e.g. the ground truth).
    #[arg(long)]
    pub truth: PathBuf,
    /// Second clustering TSV.
    #[arg(long)]
    pub candidate: PathBuf,
    /// Graph whose nodes form the universe.
    #[arg(long, conflicts_with = "nodes", required_unless_present = "nodes")]
    pub graph: Option<PathBuf>,
    /// Universe of nodes labelled 0..N-1, instead of `--graph`.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct LfrArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub clustering: PathBuf,
    /// Write the JSON here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("connmod: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
