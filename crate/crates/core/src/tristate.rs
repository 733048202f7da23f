//! The partially determined adjacency matrix that the attacks refine.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{ReconError, Result};
use crate::graph::BinaryGraph;
use crate::knowledge::KnowledgeSet;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Zero,
    One,
    Unknown,
}

impl Cell {
    pub fn is_determined(self) -> bool {
        self != Cell::Unknown
    }
}

/// Result of writing a determined value into a cell.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Assign {
    /// The cell was Unknown and now holds the value.
    Changed,
    /// The cell already held the value.
    Unchanged,
    /// The cell holds the opposite value; nothing was written.
    Conflict,
}

/// Symmetric matrix over {0, 1, ?} with a forced-zero diagonal.
///
/// Stored as two bit matrices, `one` and `unknown`; a cell in neither is
/// Zero. Each row doubles as the sorted neighbor set used by the attacks.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TriStateAdjacency {
    n: usize,
    one: Vec<BitRow>,
    unknown: Vec<BitRow>,
}

impl TriStateAdjacency {
    /// Every off-diagonal cell Unknown.
    pub fn unknown(n: usize) -> Self {
        let one = (0..n).map(|_| BitRow::zeros(n)).collect();
        let unknown = (0..n)
            .map(|u| {
                let mut r = BitRow::zeros(n);
                for v in 0..n {
                    if v != u {
                        r.set(v);
                    }
                }
                r
            })
            .collect();
        TriStateAdjacency { n, one, unknown }
    }

    /// Fully determined copy of `g`.
    pub fn from_graph(g: &BinaryGraph) -> Self {
        let n = g.vertex_count();
        TriStateAdjacency {
            n,
            one: (0..n).map(|u| g.row(u).clone()).collect(),
            unknown: (0..n).map(|_| BitRow::zeros(n)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> Cell {
        if self.one[u].get(v) {
            Cell::One
        } else if self.unknown[u].get(v) {
            Cell::Unknown
        } else {
            Cell::Zero
        }
    }

    /// Overwrites a cell unconditionally. Diagonal writes are ignored.
    pub fn set(&mut self, u: usize, v: usize, cell: Cell) {
        if u == v {
            return;
        }
        for (a, b) in [(u, v), (v, u)] {
            match cell {
                Cell::Zero => {
                    self.one[a].clear(b);
                    self.unknown[a].clear(b);
                }
                Cell::One => {
                    self.one[a].set(b);
                    self.unknown[a].clear(b);
                }
                Cell::Unknown => {
                    self.one[a].clear(b);
                    self.unknown[a].set(b);
                }
            }
        }
    }

    /// Monotone write: only an Unknown cell may change.
    pub fn assign(&mut self, u: usize, v: usize, value: Cell) -> Assign {
        debug_assert!(value.is_determined());
        let current = self.get(u, v);
        if current == value {
            Assign::Unchanged
        } else if current == Cell::Unknown {
            self.set(u, v, value);
            Assign::Changed
        } else {
            Assign::Conflict
        }
    }

    /// |Γ⋆(u)|: cells of row `u` known to be One.
    #[inline]
    pub fn known_degree(&self, u: usize) -> usize {
        self.one[u].count()
    }

    #[inline]
    pub fn unknown_count(&self, u: usize) -> usize {
        self.unknown[u].count()
    }

    pub fn known_neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.one[u].iter_ones()
    }

    pub fn unknown_in_row(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.unknown[u].iter_ones()
    }

    /// |Γ⋆(u) ∩ Γ⋆(v)|.
    #[inline]
    pub fn known_common(&self, u: usize, v: usize) -> usize {
        self.one[u].and_count(&self.one[v])
    }

    pub(crate) fn one_row(&self, u: usize) -> &BitRow {
        &self.one[u]
    }

    pub(crate) fn unknown_row(&self, u: usize) -> &BitRow {
        &self.unknown[u]
    }

    /// Number of unordered off-diagonal pairs whose value is known.
    pub fn determined_pairs(&self) -> usize {
        crate::graph::pair_count(self.n) - self.unknown_pairs()
    }

    pub fn unknown_pairs(&self) -> usize {
        self.unknown.iter().map(BitRow::count).sum::<usize>() / 2
    }

    pub fn is_fully_determined(&self) -> bool {
        self.unknown.iter().all(|r| r.count() == 0)
    }

    /// Unknown cells as `(u, v)` with `u < v`, lexicographic.
    pub fn unknown_cells(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            out.extend(self.unknown[u].iter_ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Number of unordered pairs whose cell differs between the two matrices.
    pub fn diff_count(&self, other: &TriStateAdjacency) -> usize {
        assert_eq!(self.n, other.n);
        let mut d = 0;
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.get(u, v) != other.get(u, v) {
                    d += 1;
                }
            }
        }
        d
    }

    /// Replaces every Unknown with `fill`.
    pub fn finalize(&self, fill: Cell) -> BinaryGraph {
        let mut g = BinaryGraph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                match self.get(u, v) {
                    Cell::One => g.add_edge(u, v),
                    Cell::Unknown if fill == Cell::One => g.add_edge(u, v),
                    _ => {}
                }
            }
        }
        g
    }

    /// Copies rows `rows` (and the matching columns) from `source`.
    pub fn revert_rows(&mut self, source: &TriStateAdjacency, rows: &[usize]) {
        for &u in rows {
            for w in 0..self.n {
                if w != u {
                    self.set(u, w, source.get(u, w));
                }
            }
        }
    }
}

impl fmt::Debug for TriStateAdjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TriStateAdjacency(n = {})", self.n)?;
        for u in 0..self.n {
            let row: String = (0..self.n)
                .map(|v| match self.get(u, v) {
                    Cell::Zero => '0',
                    Cell::One => '1',
                    Cell::Unknown => '?',
                })
                .collect();
            writeln!(f, "  {row}")?;
        }
        Ok(())
    }
}

/// Seeds the reconstruction with prior knowledge: One on known edges, Zero
/// on known non-edges and the diagonal, Unknown elsewhere.
pub fn init_partial(n: usize, knowledge: &KnowledgeSet) -> Result<TriStateAdjacency> {
    knowledge.validate(n)?;
    let mut g = TriStateAdjacency::unknown(n);
    for &(u, v) in knowledge.known_edges() {
        g.set(u, v, Cell::One);
    }
    for &(u, v) in knowledge.known_non_edges() {
        g.set(u, v, Cell::Zero);
    }
    Ok(g)
}

/// Free-function form of [`TriStateAdjacency::finalize`].
pub fn finalize(gstar: &TriStateAdjacency, fill: Cell) -> BinaryGraph {
    gstar.finalize(fill)
}

pub(crate) fn check_same_n(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(ReconError::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn init_without_knowledge() {
        let g = init_partial(3, &KnowledgeSet::empty()).unwrap();
        for u in 0..3 {
            for v in 0..3 {
                let expected = if u == v { Cell::Zero } else { Cell::Unknown };
                assert_eq!(g.get(u, v), expected);
            }
        }
    }

    #[test]
    fn init_places_knowledge() {
        let k = KnowledgeSet::new([(0, 1)], [(1, 2)]).unwrap();
        let g = init_partial(3, &k).unwrap();
        assert_eq!(g.get(0, 1), Cell::One);
        assert_eq!(g.get(1, 0), Cell::One);
        assert_eq!(g.get(1, 2), Cell::Zero);
        assert_eq!(g.get(0, 2), Cell::Unknown);
    }

    #[test]
    fn init_rejects_contradiction() {
        assert!(matches!(
            KnowledgeSet::new([(0, 1)], [(0, 1)]),
            Err(ReconError::ContradictoryKnowledge(0, 1))
        ));
        // also caught when the set was assembled without validation
        let k: KnowledgeSet =
            serde_json::from_str(r#"{"known_edges":[[0,1]],"known_non_edges":[[1,0]],"rho":0.0,"seed":0}"#).unwrap();
        assert!(matches!(
            init_partial(3, &k),
            Err(ReconError::ContradictoryKnowledge(0, 1))
        ));
    }

    #[test]
    fn init_rejects_out_of_range() {
        let k = KnowledgeSet::new([(0, 5)], []).unwrap();
        assert!(matches!(
            init_partial(3, &k),
            Err(ReconError::VertexOutOfRange { vertex: 5, n: 3 })
        ));
    }

    #[test]
    fn finalize_fill() {
        let all_unknown = TriStateAdjacency::unknown(4);
        assert_eq!(all_unknown.finalize(Cell::Zero), BinaryGraph::empty(4));
        assert_eq!(all_unknown.finalize(Cell::One), complete(4));

        let g = six_cycle();
        let full = TriStateAdjacency::from_graph(&g);
        assert_eq!(full.finalize(Cell::Zero), g);
        assert_eq!(full.finalize(Cell::One), g);

        let mut one_gap = TriStateAdjacency::from_graph(&BinaryGraph::empty(3));
        one_gap.set(0, 2, Cell::Unknown);
        let filled = one_gap.finalize(Cell::One);
        assert_eq!(filled.edges(), vec![(0, 2)]);
    }

    #[test]
    fn assign_is_monotone() {
        let mut g = TriStateAdjacency::unknown(3);
        assert_eq!(g.assign(0, 1, Cell::One), Assign::Changed);
        assert_eq!(g.assign(1, 0, Cell::One), Assign::Unchanged);
        assert_eq!(g.assign(0, 1, Cell::Zero), Assign::Conflict);
        assert_eq!(g.get(0, 1), Cell::One);
        g.set(1, 1, Cell::One);
        assert_eq!(g.get(1, 1), Cell::Zero);
    }

    #[test]
    fn full_knowledge_reproduces_graph() {
        for seed in 0..20 {
            let g = BinaryGraph::erdos_renyi(12, 0.3, seed);
            let k = KnowledgeSet::sample(&g, 1.0, seed);
            let star = init_partial(12, &k).unwrap();
            assert!(star.is_fully_determined());
            assert_eq!(star.finalize(Cell::Zero), g);
        }
    }

    #[test]
    fn revert_rows_copies_symmetrically() {
        let mut a = TriStateAdjacency::from_graph(&complete(4));
        let b = TriStateAdjacency::unknown(4);
        a.revert_rows(&b, &[1]);
        assert_eq!(a.get(1, 3), Cell::Unknown);
        assert_eq!(a.get(3, 1), Cell::Unknown);
        assert_eq!(a.get(0, 2), Cell::One);
        assert_eq!(a.unknown_pairs(), 3);
    }
}
