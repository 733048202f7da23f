//! End-to-end reconstruction, the knowledge-overwrite baseline, and sweeps
//! over knowledge proportions.
//!
//! [`run_pipeline`] runs six steps:
//!
//! 1. tri-state matrix from the knowledge,
//! 2. topological fixpoint,
//! 3. spectral attack on the result,
//! 4. targeted error forgetting,
//! 5. topological fixpoint again,
//! 6. completion of the ambiguous components.
//!
//! The spectral result is a guess, so anything built on it is checked. If
//! step 5 hits a conflict, step 6 finds no completion, or the final square
//! disagrees with G², the guess is dropped and step 6 is rerun on the
//! step 2 matrix, whose cells are all implied by the inputs. The trace
//! records when that happens.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cosquare::{bipartite_or_disconnected_check, instantiate_all, CosquareSummary, DEFAULT_BUDGET};
use crate::error::{ReconError, Result};
use crate::graph::{BinaryGraph, CommonNeighborsMatrix};
use crate::knowledge::{sample_knowledge, KnowledgeSet};
use crate::metrics::evaluate;
use crate::spectral::{
    eigendecompose, spectral_attack, targeted_error_forgetting, EigenSystem, SpectralConfig, Weights,
};
use crate::topo::{run_fixpoint, Conflict, FixpointReport, TopoConfig};
use crate::tristate::{check_same_n, init_partial, Cell, TriStateAdjacency};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub spectral: SpectralConfig,
    pub topo: TopoConfig,
    pub cosquare_budget: usize,
    /// How cells still Unknown at the end are decided.
    pub fill: Fill,
    /// Spectral, forgetting and second fixpoint are repeated this many
    /// times; the default runs them once.
    pub spectral_rounds: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            spectral: SpectralConfig::default(),
            topo: TopoConfig::default(),
            cosquare_budget: DEFAULT_BUDGET,
            fill: Fill::Zero,
            spectral_rounds: 1,
        }
    }
}

/// Decides cells the co-square step left Unknown (budget exceeded).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fill {
    #[default]
    Zero,
    One,
    /// Take the last spectral guess; Zero if no spectral round ran.
    Spectral,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Init,
    Topological,
    Spectral,
    Forgetting,
    Retopological,
    Cosquare,
    Finalize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: Stage,
    /// Cells the stage determined; for forgetting, cells reopened.
    pub changes: usize,
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fallback {
    pub stage: Stage,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineTrace {
    pub stages: Vec<StageRecord>,
    pub topological: FixpointReport,
    pub retopological: Vec<FixpointReport>,
    /// Spectral values that contradicted a determined cell and were
    /// replaced by it.
    pub spectral_overrides: usize,
    pub forgotten_rows: Vec<usize>,
    pub conflicts: Vec<Conflict>,
    pub fallback: Option<Fallback>,
    pub cosquare: CosquareSummary,
    pub unresolved_cells: usize,
    pub square_matches: bool,
    /// The nonzero pattern of G² is disconnected, so the target is
    /// disconnected or bipartite.
    pub disconnected_or_bipartite: bool,
    pub alpha: f64,
    pub beta: f64,
    #[serde(skip)]
    pub final_state: Option<TriStateAdjacency>,
}

impl PipelineTrace {
    fn new() -> Self {
        PipelineTrace {
            stages: Vec::new(),
            topological: FixpointReport::default(),
            retopological: Vec::new(),
            spectral_overrides: 0,
            forgotten_rows: Vec::new(),
            conflicts: Vec::new(),
            fallback: None,
            cosquare: CosquareSummary::default(),
            unresolved_cells: 0,
            square_matches: false,
            disconnected_or_bipartite: false,
            alpha: 0.0,
            beta: 0.0,
            final_state: None,
        }
    }

    fn record(&mut self, stage: Stage, changes: usize, since: Instant) {
        self.stages.push(StageRecord {
            stage,
            changes,
            elapsed_ms: since.elapsed().as_secs_f64() * 1e3,
        });
    }

    pub fn changes(&self, stage: Stage) -> usize {
        self.stages.iter().filter(|s| s.stage == stage).map(|s| s.changes).sum()
    }
}

pub fn run_pipeline(
    g2: &CommonNeighborsMatrix,
    knowledge: &KnowledgeSet,
    cfg: &PipelineConfig,
) -> Result<(BinaryGraph, PipelineTrace)> {
    let es = eigendecompose(g2, cfg.spectral.eigenvalue_floor)?;
    run_pipeline_with(g2, knowledge, cfg, &es)
}

/// [`run_pipeline`] with a precomputed eigendecomposition of `g2`.
pub fn run_pipeline_with(
    g2: &CommonNeighborsMatrix,
    knowledge: &KnowledgeSet,
    cfg: &PipelineConfig,
    es: &EigenSystem,
) -> Result<(BinaryGraph, PipelineTrace)> {
    let n = g2.vertex_count();
    check_same_n(n, es.dim())?;
    let mut trace = PipelineTrace::new();
    trace.disconnected_or_bipartite = bipartite_or_disconnected_check(g2);
    if trace.disconnected_or_bipartite {
        log::info!("{}", crate::cosquare::DISCONNECTED_OR_BIPARTITE);
    }

    let t = Instant::now();
    let mut topo = init_partial(n, knowledge)?;
    trace.record(Stage::Init, topo.determined_pairs(), t);

    let t = Instant::now();
    trace.topological = run_fixpoint(&mut topo, g2, &cfg.topo, true)?;
    trace.record(Stage::Topological, trace.topological.total_changes(), t);

    let mut current = topo.clone();
    let mut last_guess = None;
    for _ in 0..cfg.spectral_rounds.max(1) {
        if current.is_fully_determined() {
            break;
        }
        let t = Instant::now();
        let (alpha, beta) = cfg.spectral.resolve(&current)?;
        trace.alpha = alpha;
        trace.beta = beta;
        let guess = spectral_attack(&current, es, &cfg.spectral)?;
        let (guess, overrides) = overwrite_determined(&guess, &current);
        trace.spectral_overrides += overrides;
        last_guess = Some(guess.clone());
        trace.record(Stage::Spectral, current.unknown_pairs(), t);

        let t = Instant::now();
        let mut next = targeted_error_forgetting(&guess, &current, g2)?;
        trace.forgotten_rows = crate::spectral::mismatched_rows(&guess, g2);
        trace.record(Stage::Forgetting, next.unknown_pairs(), t);

        let t = Instant::now();
        match run_fixpoint(&mut next, g2, &cfg.topo, true) {
            Ok(report) => {
                trace.record(Stage::Retopological, report.total_changes(), t);
                trace.retopological.push(report);
                current = next;
            }
            Err(ReconError::Inconsistent(c)) => {
                trace.record(Stage::Retopological, 0, t);
                trace.fallback = Some(Fallback {
                    stage: Stage::Retopological,
                    reason: c.to_string(),
                });
                trace.conflicts.push(c);
                current = topo.clone();
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let t = Instant::now();
    let before = current.unknown_pairs();
    let (mut state, summary) = match instantiate_all(&current, g2, cfg.cosquare_budget) {
        Ok(done) => done,
        Err(ReconError::NoConsistentCompletion { vertices }) if current != topo => {
            trace.fallback = Some(Fallback {
                stage: Stage::Cosquare,
                reason: format!("no completion over vertices {vertices:?}"),
            });
            instantiate_all(&topo, g2, cfg.cosquare_budget)?
        }
        Err(e) => return Err(e),
    };
    if state.is_fully_determined() && state.finalize(Cell::Zero).square() != *g2 && current != topo {
        let (fresh, fresh_summary) = instantiate_all(&topo, g2, cfg.cosquare_budget)?;
        trace.fallback = Some(Fallback {
            stage: Stage::Finalize,
            reason: "square of the completed guess disagrees with G²".into(),
        });
        state = fresh;
        trace.cosquare = fresh_summary;
    } else {
        trace.cosquare = summary;
    }
    trace.record(Stage::Cosquare, before.saturating_sub(state.unknown_pairs()), t);

    let t = Instant::now();
    trace.unresolved_cells = state.unknown_pairs();
    if trace.unresolved_cells > 0 {
        log::warn!(
            "{} cells still unknown, filled with {:?}",
            trace.unresolved_cells,
            cfg.fill
        );
    }
    let graph = match (cfg.fill, &last_guess) {
        (Fill::One, _) => state.finalize(Cell::One),
        (Fill::Spectral, Some(guess)) => fill_from(&state, guess),
        _ => state.finalize(Cell::Zero),
    };
    trace.square_matches = graph.square() == *g2;
    trace.record(Stage::Finalize, trace.unresolved_cells, t);
    trace.final_state = Some(state);
    Ok((graph, trace))
}

fn fill_from(state: &TriStateAdjacency, guess: &BinaryGraph) -> BinaryGraph {
    let mut g = state.finalize(Cell::Zero);
    for (u, v) in state.unknown_cells() {
        if guess.has_edge(u, v) {
            g.add_edge(u, v);
        }
    }
    g
}

/// Replaces every cell of `guess` that `gstar` determines; returns the
/// result and how many cells changed.
fn overwrite_determined(guess: &BinaryGraph, gstar: &TriStateAdjacency) -> (BinaryGraph, usize) {
    let n = guess.vertex_count();
    let mut out = guess.clone();
    let mut changed = 0;
    for u in 0..n {
        for v in u + 1..n {
            let want = match gstar.get(u, v) {
                Cell::One => true,
                Cell::Zero => false,
                Cell::Unknown => continue,
            };
            if want != guess.has_edge(u, v) {
                changed += 1;
                if want {
                    out.add_edge(u, v);
                } else {
                    out.remove_edge(u, v);
                }
            }
        }
    }
    (out, changed)
}

/// Spectral attack without the knowledge term (β = 0, α = 1) whose output
/// is then overwritten with the known edges and non-edges.
pub fn run_knowledgeable_baseline(
    g2: &CommonNeighborsMatrix,
    knowledge: &KnowledgeSet,
    cfg: &SpectralConfig,
) -> Result<BinaryGraph> {
    let es = eigendecompose(g2, cfg.eigenvalue_floor)?;
    run_knowledgeable_baseline_with(g2, knowledge, cfg, &es)
}

pub fn run_knowledgeable_baseline_with(
    g2: &CommonNeighborsMatrix,
    knowledge: &KnowledgeSet,
    cfg: &SpectralConfig,
    es: &EigenSystem,
) -> Result<BinaryGraph> {
    let n = g2.vertex_count();
    let known = init_partial(n, knowledge)?;
    let plain = SpectralConfig {
        weights: Weights::Fixed { alpha: 1.0, beta: 0.0 },
        ..*cfg
    };
    let guess = spectral_attack(&TriStateAdjacency::unknown(n), es, &plain)?;
    Ok(overwrite_determined(&guess, &known).0)
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Pipeline,
    Baseline,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Pipeline => "pipeline",
            Method::Baseline => "baseline",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: Method,
    pub rho: f64,
    pub seed: u64,
    pub fpr: f64,
    pub fnr: f64,
    pub rae: f64,
    pub cne: f64,
    pub runtime_ms: f64,
    pub unresolved_cells: usize,
}

/// Samples knowledge for every `(rho, seed)`, runs both methods and scores
/// them against `g`. Rows come back ordered by rho, then seed, then method.
pub fn sweep(g: &BinaryGraph, rhos: &[f64], seeds: &[u64], cfg: &PipelineConfig) -> Result<Vec<SweepRow>> {
    if let Some(bad) = rhos.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        return Err(ReconError::InvalidParameter(format!("rho {bad} outside [0, 1]")));
    }
    let g2 = g.square();
    let es = eigendecompose(&g2, cfg.spectral.eigenvalue_floor)?;
    let cells: Vec<(f64, u64)> = rhos.iter().flat_map(|&r| seeds.iter().map(move |&s| (r, s))).collect();
    let rows: Vec<Result<[SweepRow; 2]>> = cells
        .par_iter()
        .map(|&(rho, seed)| {
            let knowledge = sample_knowledge(g, rho, seed);
            let t = Instant::now();
            let (out, trace) = run_pipeline_with(&g2, &knowledge, cfg, &es)?;
            let pipeline_ms = t.elapsed().as_secs_f64() * 1e3;
            let t = Instant::now();
            let base = run_knowledgeable_baseline_with(&g2, &knowledge, &cfg.spectral, &es)?;
            let base_ms = t.elapsed().as_secs_f64() * 1e3;
            let row = |method, h: &BinaryGraph, ms, unresolved| -> Result<SweepRow> {
                let m = evaluate(g, h)?;
                Ok(SweepRow {
                    method,
                    rho,
                    seed,
                    fpr: m.fpr,
                    fnr: m.fnr,
                    rae: m.rae,
                    cne: m.cne,
                    runtime_ms: ms,
                    unresolved_cells: unresolved,
                })
            };
            Ok([
                row(Method::Pipeline, &out, pipeline_ms, trace.unresolved_cells)?,
                row(Method::Baseline, &base, base_ms, 0)?,
            ])
        })
        .collect();
    let mut out = Vec::with_capacity(rows.len() * 2);
    for r in rows {
        out.extend(r?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    fn of(xs: impl Iterator<Item = f64> + Clone) -> Self {
        let count = xs.clone().count().max(1) as f64;
        Spread {
            mean: xs.clone().sum::<f64>() / count,
            min: xs.clone().fold(f64::INFINITY, f64::min),
            max: xs.fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub method: Method,
    pub rho: f64,
    pub runs: usize,
    pub fpr: Spread,
    pub fnr: Spread,
    pub rae: Spread,
    pub cne: Spread,
}

/// Mean, min and max of each metric per method and rho, in first-seen rho
/// order.
pub fn summarize(rows: &[SweepRow]) -> Vec<SweepSummary> {
    let mut rhos: Vec<f64> = Vec::new();
    for r in rows {
        if !rhos.contains(&r.rho) {
            rhos.push(r.rho);
        }
    }
    let mut out = Vec::new();
    for method in [Method::Pipeline, Method::Baseline] {
        for &rho in &rhos {
            let group: Vec<&SweepRow> = rows.iter().filter(|r| r.method == method && r.rho == rho).collect();
            if group.is_empty() {
                continue;
            }
            let it = group.iter();
            out.push(SweepSummary {
                method,
                rho,
                runs: group.len(),
                fpr: Spread::of(it.clone().map(|r| r.fpr)),
                fnr: Spread::of(it.clone().map(|r| r.fnr)),
                rae: Spread::of(it.clone().map(|r| r.rae)),
                cne: Spread::of(it.clone().map(|r| r.cne)),
            });
        }
    }
    out
}

pub const SWEEP_COLUMNS: [&str; 9] = [
    "method",
    "rho",
    "seed",
    "fpr",
    "fnr",
    "rae",
    "cne",
    "runtime_ms",
    "unresolved_cells",
];

pub fn write_sweep_csv<W: std::io::Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
