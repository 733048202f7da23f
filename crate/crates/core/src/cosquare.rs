//! Residual ambiguity: components of Unknown cells and their completion.
//!
//! Once the attacks stall, the remaining Unknown cells are grouped into
//! components that share vertices. A component is completed by exhaustive
//! search, keeping the first assignment (Zero before One, cells in
//! ascending order) whose common-neighbor counts agree with G².

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{ReconError, Result};
use crate::graph::CommonNeighborsMatrix;
use crate::tristate::{check_same_n, Cell, TriStateAdjacency};

pub const DEFAULT_BUDGET: usize = 20;

/// Printed when [`bipartite_or_disconnected_check`] fires.
pub const DISCONNECTED_OR_BIPARTITE: &str = "target is disconnected or bipartite";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguousComponent {
    /// Unknown unordered pairs `(u, v)` with `u < v`, ascending.
    pub cells: Vec<(usize, usize)>,
    /// Vertices touched by `cells`, ascending.
    pub vertices: Vec<usize>,
    /// Completions consistent with G², filled in by [`instantiate_cosquare`].
    pub solutions_found: usize,
}

/// Groups the Unknown cells of `gstar` into components linked by shared
/// vertices, smallest first.
pub fn find_ambiguous_components(gstar: &TriStateAdjacency) -> Vec<AmbiguousComponent> {
    let n = gstar.vertex_count();
    let cells = gstar.unknown_cells();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in &cells {
        let (a, b) = (root(&mut parent, u), root(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: BTreeMap<usize, AmbiguousComponent> = BTreeMap::new();
    for &(u, v) in &cells {
        let r = root(&mut parent, u);
        groups
            .entry(r)
            .or_insert_with(|| AmbiguousComponent {
                cells: Vec::new(),
                vertices: Vec::new(),
                solutions_found: 0,
            })
            .cells
            .push((u, v));
    }
    let mut comps: Vec<AmbiguousComponent> = groups
        .into_values()
        .map(|mut c| {
            let mut vs: Vec<usize> = c.cells.iter().flat_map(|&(u, v)| [u, v]).collect();
            vs.sort_unstable();
            vs.dedup();
            c.vertices = vs;
            c
        })
        .collect();
    comps.sort_by(|a, b| a.cells.len().cmp(&b.cells.len()).then(a.cells[0].cmp(&b.cells[0])));
    comps
}

/// Completes `comp` in a copy of `gstar`.
///
/// Counts on pairs involving cells outside the component that are still
/// Unknown are checked as intervals, so with several open components
/// `solutions_found` is an upper bound for this one.
pub fn instantiate_cosquare(
    gstar: &TriStateAdjacency,
    g2: &CommonNeighborsMatrix,
    comp: &mut AmbiguousComponent,
    budget: usize,
) -> Result<TriStateAdjacency> {
    check_same_n(gstar.vertex_count(), g2.vertex_count())?;
    if comp.cells.len() > budget {
        return Err(ReconError::Capacity {
            what: "unknown cells in one component",
            needed: comp.cells.len(),
            limit: budget,
        });
    }
    for &(u, v) in &comp.cells {
        if gstar.get(u, v) != Cell::Unknown {
            return Err(ReconError::InvalidParameter(format!(
                "component cell ({u}, {v}) is not Unknown"
            )));
        }
    }
    let mut search = Search {
        g: gstar.clone(),
        g2,
        cells: &comp.cells,
        first: None,
        count: 0,
    };
    let feasible = comp.vertices.iter().all(|&u| search.row_feasible(u));
    if feasible {
        search.dfs(0);
    }
    comp.solutions_found = search.count;
    match search.first {
        Some(values) => {
            let mut out = gstar.clone();
            for (&(u, v), value) in comp.cells.iter().zip(values) {
                out.set(u, v, value);
            }
            Ok(out)
        }
        None => Err(ReconError::NoConsistentCompletion {
            vertices: comp.vertices.clone(),
        }),
    }
}

struct Search<'a> {
    g: TriStateAdjacency,
    g2: &'a CommonNeighborsMatrix,
    cells: &'a [(usize, usize)],
    first: Option<Vec<Cell>>,
    count: usize,
}

impl Search<'_> {
    fn dfs(&mut self, depth: usize) {
        if depth == self.cells.len() {
            self.count += 1;
            if self.first.is_none() {
                self.first = Some(self.cells.iter().map(|&(u, v)| self.g.get(u, v)).collect());
            }
            return;
        }
        let (u, v) = self.cells[depth];
        for value in [Cell::Zero, Cell::One] {
            self.g.set(u, v, value);
            if self.row_feasible(u) && self.row_feasible(v) {
                self.dfs(depth + 1);
            }
        }
        self.g.set(u, v, Cell::Unknown);
    }

    /// Every count in row `u` of G² still lies between what the known
    /// edges give and what the possible edges could give.
    fn row_feasible(&self, u: usize) -> bool {
        let n = self.g.vertex_count();
        let known = self.g.known_degree(u);
        let degree = self.g2.degree(u);
        if degree < known || degree > known + self.g.unknown_count(u) {
            return false;
        }
        let one_u = self.g.one_row(u).words();
        let unk_u = self.g.unknown_row(u).words();
        (0..n).filter(|&x| x != u).all(|x| {
            let one_x = self.g.one_row(x).words();
            let unk_x = self.g.unknown_row(x).words();
            let mut lower = 0;
            let mut upper = 0;
            for i in 0..one_u.len() {
                lower += (one_u[i] & one_x[i]).count_ones();
                upper += ((one_u[i] | unk_u[i]) & (one_x[i] | unk_x[i])).count_ones();
            }
            let target = self.g2.get(u, x);
            lower <= target && target <= upper
        })
    }
}

/// Outcome of completing every component of a tri-state matrix.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosquareSummary {
    pub components: Vec<AmbiguousComponent>,
    /// Components over budget, left Unknown.
    pub skipped: Vec<AmbiguousComponent>,
    /// Whether a late failure forced a joint search over all components.
    pub merged: bool,
}

impl CosquareSummary {
    pub fn unresolved_cells(&self) -> usize {
        self.skipped.iter().map(|c| c.cells.len()).sum()
    }

    /// Largest number of completions found for a single component.
    pub fn max_solutions(&self) -> usize {
        self.components.iter().map(|c| c.solutions_found).max().unwrap_or(0)
    }
}

/// Completes every component within `budget`, one after the other.
///
/// Components are independent except through counts between their
/// vertices, so a canonical choice for one can rule out every completion
/// of a later one. In that case the search is redone jointly over all
/// in-budget cells if they fit the budget together.
pub fn instantiate_all(
    gstar: &TriStateAdjacency,
    g2: &CommonNeighborsMatrix,
    budget: usize,
) -> Result<(TriStateAdjacency, CosquareSummary)> {
    let mut summary = CosquareSummary::default();
    let mut g = gstar.clone();
    let mut pending = Vec::new();
    for comp in find_ambiguous_components(gstar) {
        if comp.cells.len() > budget {
            log::warn!(
                "leaving {} unknown cells over {} vertices unresolved (budget {budget})",
                comp.cells.len(),
                comp.vertices.len()
            );
            summary.skipped.push(comp);
        } else {
            pending.push(comp);
        }
    }
    for i in 0..pending.len() {
        let mut comp = pending[i].clone();
        match instantiate_cosquare(&g, g2, &mut comp, budget) {
            Ok(next) => {
                g = next;
                summary.components.push(comp);
            }
            Err(ReconError::NoConsistentCompletion { .. }) if i > 0 => {
                let mut joint = AmbiguousComponent {
                    cells: pending.iter().flat_map(|c| c.cells.iter().copied()).collect(),
                    vertices: Vec::new(),
                    solutions_found: 0,
                };
                joint.cells.sort_unstable();
                joint.vertices = pending.iter().flat_map(|c| c.vertices.iter().copied()).collect();
                joint.vertices.sort_unstable();
                let next = instantiate_cosquare(gstar, g2, &mut joint, budget)?;
                // keep the skipped components Unknown
                g = next;
                for c in &summary.skipped {
                    for &(u, v) in &c.cells {
                        g.set(u, v, Cell::Unknown);
                    }
                }
                summary.components = vec![joint];
                summary.merged = true;
                return Ok((g, summary));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((g, summary))
}

/// True when the nonzero off-diagonal entries of G² leave the vertex set
/// disconnected, which happens exactly when the target graph is
/// disconnected or bipartite. Purely diagnostic.
pub fn bipartite_or_disconnected_check(g2: &CommonNeighborsMatrix) -> bool {
    let n = g2.vertex_count();
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for (v, &c) in g2.row(u).iter().enumerate() {
            if c > 0 && v != u && !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached < n
}
