// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use connmod_core::cm::{node_coverage, CmSummary};
use connmod_core::{
    agreement, estimate_params, load_clustering, load_edge_list, profile_clustering, run_clusterer, run_pipeline,
    write_clustering, ClustererConfig, Clustering, CmParams, Error, Graph,
};

use crate::{Cli, ClusterArgs, CmArgs, Command, EvalArgs, LfrArgs, ProfileArgs};

pub const EXIT_IO: u8 = 2;
pub const EXIT_CONFIG: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;
pub const EXIT_POSTCONDITION: u8 = 5;

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn config(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    fn in_file(path: &Path, e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse { .. } | Error::Format { .. } => EXIT_IO,
            Error::UnknownLabel { .. } | Error::Consistency(_) => EXIT_MISMATCH,
            Error::RecursionDepth { .. } => EXIT_POSTCONDITION,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::Parse { .. } | Error::Format { .. } => EXIT_IO,
            Error::UnknownLabel { .. } | Error::Consistency(_) => EXIT_MISMATCH,
            Error::RecursionDepth { .. } => EXIT_POSTCONDITION,
            _ => EXIT_CONFIG,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

type Outcome<T = ()> = Result<T, Failure>;

/// Common header of every JSON report.
#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema_version: u32,
    tool: &'static str,
    tool_version: &'static str,
    config: &'a Cli,
    #[serde(flatten)]
    body: T,
}

pub fn run(cli: &Cli) -> Outcome {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::config("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::config(e.to_string()))?;
    }
    match &cli.command {
        Command::Cluster(a) => cluster(cli, a),
        Command::Profile(a) => profile(cli, a),
        Command::Cm(a) => cm(cli, a),
        Command::Eval(a) => eval(cli, a),
        Command::LfrParams(a) => lfr(cli, a),
    }
}

fn read_graph(path: &Path) -> Outcome<Graph> {
    let file = File::open(path).map_err(|e| io_failure(path, e))?;
    let (g, stats) = load_edge_list(BufReader::new(file)).map_err(|e| Failure::in_file(path, e))?;
    log::info!(
        "{}: {} nodes, {} edges ({} self-loops, {} duplicate edges dropped)",
        path.display(),
        g.node_count(),
        g.edge_count(),
        stats.self_loops,
        stats.duplicates
    );
    Ok(g)
}

fn read_clustering(path: &Path, g: &Graph) -> Outcome<Clustering> {
    let file = File::open(path).map_err(|e| io_failure(path, e))?;
    load_clustering(BufReader::new(file), g).map_err(|e| Failure::in_file(path, e))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s: OsString = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn write_json<T: Serialize>(cli: &Cli, body: T, path: Option<&Path>) -> Outcome {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        tool: "connmod",
        tool_version: env!("CARGO_PKG_VERSION"),
        config: cli,
        body,
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| io_failure(p, e)),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}").map_err(|e| io_failure(Path::new("<stdout>"), e))
        }
    }
}

fn write_tsv(g: &Graph, c: &Clustering, path: &Path) -> Outcome {
    let file = File::create(path).map_err(|e| io_failure(path, e))?;
    let mut w = BufWriter::new(file);
    write_clustering(g, c, &mut w).map_err(|e| Failure::in_file(path, e))?;
    w.flush().map_err(|e| io_failure(path, e))
}

fn coverage(c: &Clustering, n: usize, min_size: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        node_coverage(c, n, min_size).unwrap_or(0.0)
    }
}

#[derive(Serialize)]
struct ClusterSummary {
    clusterer: ClustererConfig,
    node_count: usize,
    edge_count: usize,
    clusters: usize,
    nodes_clustered: usize,
    /// cluster size -> number of clusters
    size_histogram: BTreeMap<usize, usize>,
    coverage_ge2: f64,
    coverage_ge11: f64,
    clustering_path: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<&'static str>,
}

fn cluster(cli: &Cli, a: &ClusterArgs) -> Outcome {
    let name = a
        .clusterer
        .clusterer
        .ok_or_else(|| Failure::config("cluster needs --clusterer"))?;
    let runs = a.clusterer.runs(name).map_err(Failure::config)?;
    for (_, config) in &runs {
        config.validate()?;
    }
    let g = read_graph(&a.graph)?;
    for (suffix, config) in runs {
        let c = run_clusterer(&g, &config)?;
        let tsv = with_suffix(&a.out, &format!("{suffix}.tsv"));
        write_tsv(&g, &c, &tsv)?;
        let mut size_histogram = BTreeMap::new();
        for cl in c.clusters() {
            *size_histogram.entry(cl.nodes.len()).or_insert(0) += 1;
        }
        let n = g.node_count();
        let summary = ClusterSummary {
            clusterer: config,
            node_count: n,
            edge_count: g.edge_count(),
            clusters: c.len(),
            nodes_clustered: c.assigned_count(),
            size_histogram,
            coverage_ge2: coverage(&c, n, 2),
            coverage_ge11: coverage(&c, n, 11),
            clustering_path: tsv,
            note: c.is_empty().then_some("the clusterer returned no clusters"),
        };
        write_json(cli, summary, Some(&with_suffix(&a.out, &format!("{suffix}.json"))))?;
    }
    Ok(())
}

fn profile(cli: &Cli, a: &ProfileArgs) -> Outcome {
    let t = a.threshold.resolve();
    t.validate()?;
    let g = read_graph(&a.graph)?;
    let c = read_clustering(&a.clustering, &g)?;
    let report = profile_clustering(&g, &c, t, a.min_size)?;
    let scatter = with_suffix(&a.out, ".scatter.tsv");
    let file = File::create(&scatter).map_err(|e| io_failure(&scatter, e))?;
    let mut w = BufWriter::new(file);
    report.write_scatter(&mut w).map_err(|e| Failure::in_file(&scatter, e))?;
    w.flush().map_err(|e| io_failure(&scatter, e))?;

    #[derive(Serialize)]
    struct Body<'a> {
        threshold_formula: String,
        scatter_path: PathBuf,
        #[serde(flatten)]
        report: &'a connmod_core::ProfileReport,
    }
    let body = Body {
        threshold_formula: t.to_string(),
        scatter_path: scatter,
        report: &report,
    };
    write_json(cli, body, Some(&with_suffix(&a.out, ".json")))
}

#[derive(Serialize)]
struct CmBody<'a> {
    #[serde(flatten)]
    summary: &'a CmSummary,
    output_clustering_path: PathBuf,
}

fn cm(cli: &Cli, a: &CmArgs) -> Outcome {
    let runs = a.runs().map_err(Failure::config)?;
    let threshold = a.threshold.resolve();
    let g = read_graph(&a.graph)?;
    let input = a
        .clustering
        .as_deref()
        .map(|p| read_clustering(p, &g))
        .transpose()?;
    let mut violated = Vec::new();
    for (suffix, clusterer) in runs {
        let params = CmParams {
            min_size: a.min_size,
            threshold,
            clusterer,
            max_depth: a.max_depth,
        };
        params.validate()?;
        let report = run_pipeline(&g, &params, input.clone())?;
        let tsv = with_suffix(&a.out, &format!("{suffix}.tsv"));
        write_tsv(&g, &report.output, &tsv)?;
        let body = CmBody {
            summary: &report.summary,
            output_clustering_path: tsv,
        };
        write_json(cli, body, Some(&with_suffix(&a.out, &format!("{suffix}.json"))))?;
        violated.extend(report.summary.postcondition.violations.iter().cloned());
    }
    if violated.is_empty() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_POSTCONDITION,
            message: format!("output failed verification: {}", violated.join("; ")),
        })
    }
}

fn eval(cli: &Cli, a: &EvalArgs) -> Outcome {
    let universe = match (&a.graph, a.nodes) {
        (Some(path), _) => read_graph(path)?,
        (None, Some(n)) => Graph::from_edges(n, &[]),
        (None, None) => return Err(Failure::config("eval needs --graph or --nodes")),
    };
    let truth = read_clustering(&a.truth, &universe)?;
    let candidate = read_clustering(&a.candidate, &universe)?;
    let scores = agreement(&truth, &candidate)?;
    write_json(cli, scores, a.out.as_deref())
}

fn lfr(cli: &Cli, a: &LfrArgs) -> Outcome {
    let g = read_graph(&a.graph)?;
    let c = read_clustering(&a.clustering, &g)?;
    let params = estimate_params(&g, &c)?;
    write_json(cli, params, a.out.as_deref())
}
