//! The `g2recon` command line.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 malformed input or
//! arguments, 3 inputs that contradict each other, 4 ambiguity over budget
//! (output is still written).

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cosquare::{CosquareSummary, DISCONNECTED_OR_BIPARTITE};
use crate::error::{ReconError, Result};
use crate::graph::BinaryGraph;
use crate::io;
use crate::knowledge::{sample_knowledge, KnowledgeSet};
use crate::metrics::{evaluate, MetricsReport};
use crate::pipeline::{run_pipeline, summarize, sweep, write_sweep_csv, Fallback, Fill, PipelineConfig, Stage};
use crate::spectral::{BetaConvention, SpectralConfig, Weights};
use crate::topo::{Conflict, TopoConfig};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
pub const EXIT_CAPACITY: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "g2recon",
    version,
    about = "Reconstruct a graph from its common-neighbors matrix"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write the common-neighbors matrix of a graph as MatrixMarket.
    Square {
        graph: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Rebuild a graph from a common-neighbors matrix.
    Reconstruct(ReconstructArgs),
    /// Sample known edges and non-edges from a graph.
    SampleKnowledge {
        graph: PathBuf,
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Score a reconstruction against the true graph.
    Evaluate {
        graph: PathBuf,
        reconstruction: PathBuf,
        /// JSON report path; printed to stdout when omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline and the baseline over knowledge proportions.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct AlgorithmArgs {
    /// Weight of the binariness term; defaults to 1 - beta.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Weight of the knowledge term, a number or "auto".
    #[arg(long, default_value = "auto")]
    pub beta: String,
    /// How "auto" counts determined cells.
    #[arg(long, value_enum, default_value_t = BetaArg::Literal)]
    pub beta_convention: BetaArg,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[arg(long, default_value_t = crate::topo::DEFAULT_MAX_COMBINATION_DEGREE)]
    pub max_combination_degree: usize,
    #[arg(long, default_value_t = crate::cosquare::DEFAULT_BUDGET)]
    pub cosquare_budget: usize,
    #[arg(long, value_enum, default_value_t = FillArg::Zero)]
    pub fill: FillArg,
    /// Rounds of spectral attack, forgetting and fixpoint.
    #[arg(long, default_value_t = 1)]
    pub spectral_rounds: usize,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    /// Common-neighbors matrix (MatrixMarket).
    pub g2: PathBuf,
    #[arg(long)]
    pub knowledge: Option<PathBuf>,
    /// True graph; adds metrics to the report.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    #[arg(short, long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Edgelist)]
    pub format: FormatArg,
    /// Include stage timings in the report.
    #[arg(long)]
    pub timings: bool,
    #[command(flatten)]
    pub algo: AlgorithmArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    pub graph: PathBuf,
    /// Comma-separated proportions of known pairs.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub rhos: Vec<f64>,
    /// Seeds 0..n-1 per proportion.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(short, long)]
    pub out: PathBuf,
    /// Per-proportion mean/min/max as JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
    #[command(flatten)]
    pub algo: AlgorithmArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum BetaArg {
    Literal,
    PairNormalized,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FillArg {
    Zero,
    One,
    /// Unresolved cells take the spectral guess.
    Spectral,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Edgelist,
    Mtx,
}

impl AlgorithmArgs {
    pub fn to_config(&self) -> Result<PipelineConfig> {
        let weights = if self.beta.eq_ignore_ascii_case("auto") {
            if self.alpha.is_some() {
                return Err(ReconError::InvalidParameter(
                    "--alpha needs a numeric --beta; with --beta auto alpha is 1 - beta".into(),
                ));
            }
            Weights::Auto(match self.beta_convention {
                BetaArg::Literal => BetaConvention::Literal,
                BetaArg::PairNormalized => BetaConvention::PairNormalized,
            })
        } else {
            let beta: f64 = self.beta.parse().map_err(|_| {
                ReconError::InvalidParameter(format!("--beta {:?} is neither a number nor auto", self.beta))
            })?;
            Weights::Fixed {
                alpha: self.alpha.unwrap_or(1.0 - beta),
                beta,
            }
        };
        let cfg = PipelineConfig {
            spectral: SpectralConfig {
                weights,
                threshold: self.threshold,
                ..SpectralConfig::default()
            },
            topo: TopoConfig {
                max_combination_degree: self.max_combination_degree,
                ..TopoConfig::default()
            },
            cosquare_budget: self.cosquare_budget,
            fill: match self.fill {
                FillArg::Spectral => Fill::Spectral,
                FillArg::Zero => Fill::Zero,
                FillArg::One => Fill::One,
            },
            spectral_rounds: self.spectral_rounds,
        };
        // surfaces bad weights or thresholds before any work is done
        cfg.spectral.resolve(&crate::tristate::TriStateAdjacency::unknown(0))?;
        Ok(cfg)
    }

    fn manifest(&self) -> ConfigManifest {
        ConfigManifest {
            alpha: self.alpha,
            beta: self.beta.clone(),
            beta_convention: format!("{:?}", self.beta_convention).to_lowercase(),
            threshold: self.threshold,
            max_combination_degree: self.max_combination_degree,
            cosquare_budget: self.cosquare_budget,
            fill: format!("{:?}", self.fill).to_lowercase(),
            spectral_rounds: self.spectral_rounds,
        }
    }
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct ConfigManifest {
    pub alpha: Option<f64>,
    pub beta: String,
    pub beta_convention: String,
    pub threshold: f64,
    pub max_combination_degree: usize,
    pub cosquare_budget: usize,
    pub fill: String,
    pub spectral_rounds: usize,
}

/// What produced a report.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub inputs: BTreeMap<&'static str, String>,
    pub config: Option<ConfigManifest>,
    pub seed: Option<u64>,
    pub started_unix: u64,
}

impl RunManifest {
    fn new(command: &'static str) -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            inputs: BTreeMap::new(),
            config: None,
            seed: None,
            started_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }

    fn input(mut self, key: &'static str, path: &Path) -> Self {
        self.inputs.insert(key, path.display().to_string());
        self
    }
}

#[derive(Serialize, Debug)]
struct StageSummary {
    stage: Stage,
    changes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<f64>,
}

#[derive(Serialize, Debug)]
struct ReconstructReport {
    schema_version: u32,
    manifest: RunManifest,
    vertices: usize,
    edges: usize,
    /// CNE of the output against the input matrix.
    cne: f64,
    square_matches: bool,
    unresolved_cells: usize,
    disconnected_or_bipartite: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<&'static str>,
    alpha: f64,
    beta: f64,
    stages: Vec<StageSummary>,
    spectral_overrides: usize,
    forgotten_rows: usize,
    fallback: Option<Fallback>,
    conflicts: Vec<Conflict>,
    cosquare: CosquareSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    metrics: Option<MetricsReport>,
}

#[derive(Serialize, Debug)]
struct EvaluateReport {
    schema_version: u32,
    manifest: RunManifest,
    metrics: MetricsReport,
}

#[derive(Serialize, Debug)]
struct SweepReport {
    schema_version: u32,
    manifest: RunManifest,
    summary: Vec<crate::pipeline::SweepSummary>,
}

pub fn exit_code(e: &ReconError) -> i32 {
    match e {
        ReconError::Parse { .. }
        | ReconError::Json(_)
        | ReconError::NotSymmetric(..)
        | ReconError::SelfLoop(_)
        | ReconError::SelfLoopKnowledge(_)
        | ReconError::VertexOutOfRange { .. }
        | ReconError::InvalidParameter(_)
        | ReconError::DimensionMismatch { .. } => EXIT_PARSE,
        ReconError::Inconsistent(_)
        | ReconError::ContradictoryKnowledge(..)
        | ReconError::NoConsistentCompletion { .. } => EXIT_INCONSISTENT,
        ReconError::Capacity { .. } => EXIT_CAPACITY,
        _ => EXIT_FAILURE,
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| ReconError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| ReconError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = stdout.lock();
            serde_json::to_writer_pretty(&mut w, value)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

fn labels_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".labels");
    PathBuf::from(s)
}

pub fn cmd_square(graph: &Path, out: &Path) -> Result<i32> {
    let lg = io::parse_graph(&read(graph)?)?;
    let mut w = create(out)?;
    io::write_square_mtx(&lg.graph.square(), &mut w)?;
    w.flush()?;
    if !lg.is_identity() {
        let path = labels_path(out);
        let mut w = create(&path)?;
        io::write_labels(&lg.labels, &mut w)?;
        w.flush()?;
        log::info!("vertex ids densified; mapping written to {}", path.display());
    }
    Ok(EXIT_OK)
}

pub fn cmd_reconstruct(args: &ReconstructArgs) -> Result<i32> {
    let cfg = args.algo.to_config()?;
    let g2 = io::read_square_mtx(&read(&args.g2)?)?;
    let n = g2.vertex_count();
    let knowledge = match &args.knowledge {
        Some(p) => io::read_knowledge(&read(p)?, n)?,
        None => KnowledgeSet::empty(),
    };
    let truth = match &args.truth {
        Some(p) => Some(io::parse_graph(&read(p)?)?.graph),
        None => None,
    };

    let (graph, trace) = run_pipeline(&g2, &knowledge, &cfg)?;

    let mut w = create(&args.out)?;
    match args.format {
        FormatArg::Edgelist => io::write_edge_list(&graph, &mut w)?,
        FormatArg::Mtx => io::write_graph_mtx(&graph, &mut w)?,
    }
    w.flush()?;

    let mut manifest = RunManifest::new("reconstruct").input("g2", &args.g2);
    if let Some(p) = &args.knowledge {
        manifest = manifest.input("knowledge", p);
    }
    if let Some(p) = &args.truth {
        manifest = manifest.input("truth", p);
    }
    manifest.config = Some(args.algo.manifest());
    manifest.seed = args.knowledge.as_ref().map(|_| knowledge.seed);

    let square_norm = g2.frobenius_sq();
    let diff = g2.diff_frobenius_sq(&graph.square())?;
    let cne = if square_norm == 0 {
        if diff == 0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (diff as f64 / square_norm as f64).sqrt()
    };
    let metrics = match &truth {
        Some(t) => Some(evaluate(t, &graph)?),
        None => None,
    };
    let report = ReconstructReport {
        schema_version: REPORT_SCHEMA_VERSION,
        manifest,
        vertices: n,
        edges: graph.edge_count(),
        cne,
        square_matches: trace.square_matches,
        unresolved_cells: trace.unresolved_cells,
        disconnected_or_bipartite: trace.disconnected_or_bipartite,
        diagnostic: trace.disconnected_or_bipartite.then_some(DISCONNECTED_OR_BIPARTITE),
        alpha: trace.alpha,
        beta: trace.beta,
        stages: trace
            .stages
            .iter()
            .map(|s| StageSummary {
                stage: s.stage,
                changes: s.changes,
                elapsed_ms: args.timings.then_some(s.elapsed_ms),
            })
            .collect(),
        spectral_overrides: trace.spectral_overrides,
        forgotten_rows: trace.forgotten_rows.len(),
        fallback: trace.fallback.clone(),
        conflicts: trace.conflicts.clone(),
        cosquare: trace.cosquare.clone(),
        metrics,
    };
    write_json(&report, args.report.as_deref())?;
    if trace.disconnected_or_bipartite {
        eprintln!("note: {DISCONNECTED_OR_BIPARTITE}");
    }
    if trace.unresolved_cells > 0 {
        eprintln!(
            "warning: {} cells over the co-square budget were filled with {:?}",
            trace.unresolved_cells, cfg.fill
        );
        return Ok(EXIT_CAPACITY);
    }
    Ok(EXIT_OK)
}

pub fn cmd_sample_knowledge(graph: &Path, rho: f64, seed: u64, out: &Path) -> Result<i32> {
    if !(0.0..=1.0).contains(&rho) {
        return Err(ReconError::InvalidParameter(format!("rho {rho} outside [0, 1]")));
    }
    let g = io::parse_graph(&read(graph)?)?.graph;
    let k = sample_knowledge(&g, rho, seed);
    let mut w = create(out)?;
    io::write_knowledge(&k, g.vertex_count(), &mut w)?;
    writeln!(w)?;
    w.flush()?;
    Ok(EXIT_OK)
}

pub fn cmd_evaluate(graph: &Path, recon: &Path, out: Option<&Path>) -> Result<i32> {
    let g = io::parse_graph(&read(graph)?)?.graph;
    let h = io::parse_graph(&read(recon)?)?.graph;
    let h = pad_to(h, g.vertex_count())?;
    let report = EvaluateReport {
        schema_version: REPORT_SCHEMA_VERSION,
        manifest: RunManifest::new("evaluate")
            .input("graph", graph)
            .input("reconstruction", recon),
        metrics: evaluate(&g, &h)?,
    };
    write_json(&report, out)?;
    Ok(EXIT_OK)
}

/// A reconstruction read without a vertex header only spans the vertices
/// its edges touch; extend it with isolated vertices.
fn pad_to(h: BinaryGraph, n: usize) -> Result<BinaryGraph> {
    if h.vertex_count() >= n {
        return Ok(h);
    }
    BinaryGraph::from_edges(n, h.edges())
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let cfg = args.algo.to_config()?;
    let g = io::parse_graph(&read(&args.graph)?)?.graph;
    let seeds: Vec<u64> = (0..args.seeds).collect();
    let rows = sweep(&g, &args.rhos, &seeds, &cfg)?;
    let mut w = create(&args.out)?;
    write_sweep_csv(&rows, &mut w)?;
    w.flush()?;
    let summary = summarize(&rows);
    for s in &summary {
        eprintln!(
            "{:<8} rho={:<5} rae={:.4} [{:.4}, {:.4}] cne={:.4}",
            s.method.name(),
            s.rho,
            s.rae.mean,
            s.rae.min,
            s.rae.max,
            s.cne.mean
        );
    }
    if let Some(p) = &args.summary {
        let mut manifest = RunManifest::new("sweep").input("graph", &args.graph);
        manifest.config = Some(args.algo.manifest());
        write_json(
            &SweepReport {
                schema_version: REPORT_SCHEMA_VERSION,
                manifest,
                summary,
            },
            Some(p),
        )?;
    }
    Ok(EXIT_OK)
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Square { graph, out } => cmd_square(&graph, &out),
        Command::Reconstruct(args) => cmd_reconstruct(&args),
        Command::SampleKnowledge { graph, rho, seed, out } => cmd_sample_knowledge(&graph, rho, seed, &out),
        Command::Evaluate {
            graph,
            reconstruction,
            out,
        } => cmd_evaluate(&graph, &reconstruction, out.as_deref()),
        Command::Sweep(args) => cmd_sweep(&args),
    }
}

/// Parses `std::env::args`, runs the command and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if let ReconError::Inconsistent(c) = &e {
                eprintln!("conflicting cell: ({}, {})", c.cell.0, c.cell.1);
            }
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn algo(extra: &[&str]) -> AlgorithmArgs {
        #[derive(Parser)]
        struct Wrap {
            #[command(flatten)]
            a: AlgorithmArgs,
        }
        let mut argv = vec!["x"];
        argv.extend_from_slice(extra);
        Wrap::try_parse_from(argv).unwrap().a
    }

    #[test]
    fn beta_auto_and_numeric() {
        let cfg = algo(&[]).to_config().unwrap();
        assert_eq!(cfg.spectral.weights, Weights::Auto(BetaConvention::Literal));
        let cfg = algo(&["--beta", "0.25"]).to_config().unwrap();
        assert_eq!(
            cfg.spectral.weights,
            Weights::Fixed {
                alpha: 0.75,
                beta: 0.25
            }
        );
        let cfg = algo(&["--beta", "0.5", "--alpha", "2"]).to_config().unwrap();
        assert_eq!(cfg.spectral.weights, Weights::Fixed { alpha: 2.0, beta: 0.5 });
        assert!(algo(&["--alpha", "1"]).to_config().is_err());
        assert!(algo(&["--beta", "lots"]).to_config().is_err());
        assert!(algo(&["--threshold", "1.5"]).to_config().is_err());
        let cfg = algo(&[
            "--fill",
            "one",
            "--cosquare-budget",
            "7",
            "--max-combination-degree",
            "3",
        ])
        .to_config()
        .unwrap();
        assert_eq!(
            (cfg.fill, cfg.cosquare_budget, cfg.topo.max_combination_degree),
            (Fill::One, 7, 3)
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&ReconError::parse(3, "x")), EXIT_PARSE);
        assert_eq!(exit_code(&ReconError::ContradictoryKnowledge(0, 1)), EXIT_INCONSISTENT);
        assert_eq!(
            exit_code(&ReconError::Capacity {
                what: "x",
                needed: 2,
                limit: 1
            }),
            EXIT_CAPACITY
        );
        assert_eq!(exit_code(&ReconError::Numerical), EXIT_FAILURE);
    }
}
