//! Deterministic inference over the partially known adjacency matrix.
//!
//! Each attack reads the common-neighbors matrix and the current tri-state
//! matrix and turns Unknown cells into Zero or One only when every graph
//! consistent with the inputs agrees on the value. The attacks are composed
//! by [`run_fixpoint`], which cycles through them until a full cycle makes
//! no change.
//!
//! Writes go through a [`Writer`] that only ever changes Unknown cells. A
//! write that would flip a determined cell, or a count that no completion
//! can satisfy, is recorded as a [`Conflict`]: it proves the inputs are
//! mutually inconsistent.

mod combination;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{ReconError, Result};
use crate::graph::CommonNeighborsMatrix;
use crate::knowledge::KnowledgeSet;
use crate::tristate::{check_same_n, init_partial, Assign, Cell, TriStateAdjacency};

pub use combination::degree_combination_attack;
pub use rules::{
    biclique_attack, degree_completion_attack, degree_matching_attack, neighbor_completion_attack,
    neighbor_matching_attack, triangle_attack,
};

/// Only vertices up to this degree are examined by the degree-combination
/// attack unless configured otherwise.
pub const DEFAULT_MAX_COMBINATION_DEGREE: usize = 2;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackKind {
    DegreeCombination,
    DegreeMatching,
    NeighborMatching,
    DegreeCompletion,
    NeighborCompletion,
    Triangle,
    Biclique,
}

impl AttackKind {
    /// The cycle order used by the fixpoint driver by default.
    pub const DEFAULT_ORDER: [AttackKind; 7] = [
        AttackKind::DegreeCombination,
        AttackKind::DegreeMatching,
        AttackKind::NeighborMatching,
        AttackKind::DegreeCompletion,
        AttackKind::NeighborCompletion,
        AttackKind::Triangle,
        AttackKind::Biclique,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::DegreeCombination => "degree_combination",
            AttackKind::DegreeMatching => "degree_matching",
            AttackKind::NeighborMatching => "neighbor_matching",
            AttackKind::DegreeCompletion => "degree_completion",
            AttackKind::NeighborCompletion => "neighbor_completion",
            AttackKind::Triangle => "triangle",
            AttackKind::Biclique => "biclique",
        }
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An inference that contradicts the current matrix or the counts in G².
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Conflict {
    pub attack: AttackKind,
    /// Offending cell; `(u, u)` for a per-vertex count violation.
    pub cell: (usize, usize),
    /// Vertices whose rows the failing inference was reading.
    pub subjects: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at cell ({}, {}): {}",
            self.attack, self.cell.0, self.cell.1, self.reason
        )
    }
}

/// Result of running one attack on a copy of the matrix.
#[derive(Clone, Debug)]
pub struct AttackOutcome {
    pub updated: TriStateAdjacency,
    /// Cells turned from Unknown into Zero or One (unordered pairs).
    pub changes: usize,
    pub conflicts: Vec<Conflict>,
}

/// Monotone write access for one attack pass.
pub(crate) struct Writer<'a> {
    pub g: &'a mut TriStateAdjacency,
    attack: AttackKind,
    pub changes: usize,
    pub conflicts: Vec<Conflict>,
}

impl<'a> Writer<'a> {
    pub fn new(g: &'a mut TriStateAdjacency, attack: AttackKind) -> Self {
        Writer {
            g,
            attack,
            changes: 0,
            conflicts: Vec::new(),
        }
    }

    pub fn write(&mut self, u: usize, v: usize, value: Cell, subjects: &[usize]) {
        if u == v {
            return;
        }
        match self.g.assign(u, v, value) {
            Assign::Changed => self.changes += 1,
            Assign::Unchanged => {}
            Assign::Conflict => {
                let reason = format!("inferred {:?} but cell is {:?}", value, self.g.get(u, v));
                self.conflict((u, v), subjects, reason);
            }
        }
    }

    pub fn conflict(&mut self, cell: (usize, usize), subjects: &[usize], reason: String) {
        self.conflicts.push(Conflict {
            attack: self.attack,
            cell,
            subjects: subjects.to_vec(),
            reason,
        });
    }
}

pub(crate) fn run_on_copy<F>(
    gstar: &TriStateAdjacency,
    g2: &CommonNeighborsMatrix,
    attack: AttackKind,
    body: F,
) -> AttackOutcome
where
    F: FnOnce(&mut Writer<'_>, &CommonNeighborsMatrix),
{
    assert_eq!(
        gstar.vertex_count(),
        g2.vertex_count(),
        "tri-state matrix and G² differ in size"
    );
    let mut updated = gstar.clone();
    let (changes, conflicts) = {
        let mut w = Writer::new(&mut updated, attack);
        body(&mut w, g2);
        (w.changes, w.conflicts)
    };
    AttackOutcome {
        updated,
        changes,
        conflicts,
    }
}

/// Applies one attack in place.
pub fn apply_attack(
    attack: AttackKind,
    gstar: &mut TriStateAdjacency,
    g2: &CommonNeighborsMatrix,
    max_combination_degree: usize,
) -> (usize, Vec<Conflict>) {
    let mut w = Writer::new(gstar, attack);
    match attack {
        AttackKind::DegreeCombination => combination::apply(&mut w, g2, max_combination_degree),
        AttackKind::DegreeMatching => rules::degree_matching(&mut w, g2),
        AttackKind::NeighborMatching => rules::neighbor_matching(&mut w, g2),
        AttackKind::DegreeCompletion => rules::degree_completion(&mut w, g2),
        AttackKind::NeighborCompletion => rules::neighbor_completion(&mut w, g2),
        AttackKind::Triangle => rules::triangle(&mut w, g2),
        AttackKind::Biclique => rules::biclique(&mut w, g2),
    }
    (w.changes, w.conflicts)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopoConfig {
    pub max_combination_degree: usize,
    pub order: Vec<AttackKind>,
}

impl Default for TopoConfig {
    fn default() -> Self {
        TopoConfig {
            max_combination_degree: DEFAULT_MAX_COMBINATION_DEGREE,
            order: AttackKind::DEFAULT_ORDER.to_vec(),
        }
    }
}

/// What happened while driving the attacks to their fixpoint.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixpointReport {
    /// Cycles run, including the final one that changed nothing.
    pub rounds: usize,
    pub changes: BTreeMap<AttackKind, usize>,
    pub conflicts: Vec<Conflict>,
}

impl FixpointReport {
    pub fn total_changes(&self) -> usize {
        self.changes.values().sum()
    }
}

/// Cycles the attacks until a whole cycle changes nothing.
///
/// With `strict`, the first conflict aborts with
/// [`ReconError::Inconsistent`]. Otherwise conflicting writes are skipped
/// and every conflict is returned in the report.
pub fn run_fixpoint(
    gstar: &mut TriStateAdjacency,
    g2: &CommonNeighborsMatrix,
    cfg: &TopoConfig,
    strict: bool,
) -> Result<FixpointReport> {
    check_same_n(gstar.vertex_count(), g2.vertex_count())?;
    let mut report = FixpointReport::default();
    for &a in &cfg.order {
        report.changes.insert(a, 0);
    }
    loop {
        report.rounds += 1;
        let mut round_changes = 0;
        for &attack in &cfg.order {
            let (changes, conflicts) = apply_attack(attack, gstar, g2, cfg.max_combination_degree);
            if strict {
                if let Some(c) = conflicts.into_iter().next() {
                    return Err(ReconError::Inconsistent(c));
                }
            } else {
                report.conflicts.extend(conflicts);
            }
            *report.changes.entry(attack).or_default() += changes;
            round_changes += changes;
        }
        if round_changes == 0 {
            return Ok(report);
        }
    }
}

/// Initializes from `knowledge` and runs all attacks to their fixpoint.
pub fn topological_fixpoint(knowledge: &KnowledgeSet, g2: &CommonNeighborsMatrix) -> Result<TriStateAdjacency> {
    topological_fixpoint_with(knowledge, g2, &TopoConfig::default()).map(|(g, _)| g)
}

pub fn topological_fixpoint_with(
    knowledge: &KnowledgeSet,
    g2: &CommonNeighborsMatrix,
    cfg: &TopoConfig,
) -> Result<(TriStateAdjacency, FixpointReport)> {
    let mut gstar = init_partial(g2.vertex_count(), knowledge)?;
    let report = run_fixpoint(&mut gstar, g2, cfg, true)?;
    Ok((gstar, report))
}
