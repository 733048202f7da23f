//! Concrete simple graphs and their common-neighbors matrices.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitRow;
use crate::error::{ReconError, Result};

/// Normalizes an unordered pair so that the smaller endpoint comes first.
#[inline]
pub fn pair(u: usize, v: usize) -> (usize, usize) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Number of unordered off-diagonal pairs on `n` vertices.
#[inline]
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Maps an index in `0..pair_count(n)` to the pair it denotes, in row-major
/// order of the strict upper triangle.
pub fn pair_from_index(n: usize, mut idx: usize) -> (usize, usize) {
    let mut u = 0;
    loop {
        let row_len = n - u - 1;
        if idx < row_len {
            return (u, u + 1 + idx);
        }
        idx -= row_len;
        u += 1;
    }
}

/// An undirected simple graph stored as dense bit rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryGraph {
    n: usize,
    rows: Vec<BitRow>,
}

impl BinaryGraph {
    pub fn empty(n: usize) -> Self {
        BinaryGraph {
            n,
            rows: (0..n).map(|_| BitRow::zeros(n)).collect(),
        }
    }

    /// Builds a graph from an edge list. Self-loops and out-of-range
    /// endpoints are rejected; repeated edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = BinaryGraph::empty(n);
        for (u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(ReconError::SelfLoop(u));
            }
            g.rows[u].set(v);
            g.rows[v].set(u);
        }
        Ok(g)
    }

    /// Builds a graph from a dense row-major 0/1 matrix.
    pub fn from_dense(n: usize, cells: &[u8]) -> Result<Self> {
        if cells.len() != n * n {
            return Err(ReconError::DimensionMismatch {
                expected: n * n,
                found: cells.len(),
            });
        }
        let mut g = BinaryGraph::empty(n);
        for u in 0..n {
            if cells[u * n + u] != 0 {
                return Err(ReconError::SelfLoop(u));
            }
            for v in u + 1..n {
                let a = cells[u * n + v];
                if a != cells[v * n + u] {
                    return Err(ReconError::NotSymmetric(u, v));
                }
                if a != 0 {
                    g.add_edge(u, v);
                }
            }
        }
        Ok(g)
    }

    /// G(n, p) random graph, deterministic in `seed`.
    pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = BinaryGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.random_bool(p) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(ReconError::VertexOutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert_ne!(u, v);
        self.rows[u].set(v);
        self.rows[v].set(u);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].clear(v);
        self.rows[v].clear(u);
    }

    pub(crate) fn row(&self, u: usize) -> &BitRow {
        &self.rows[u]
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].get(v)
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].count()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[u].iter_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitRow::count).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            out.extend(self.rows[u].iter_ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// Dense row-major 0/1 adjacency matrix.
    pub fn to_dense(&self) -> Vec<u8> {
        let n = self.n;
        let mut out = vec![0u8; n * n];
        for (u, v) in self.edges() {
            out[u * n + v] = 1;
            out[v * n + u] = 1;
        }
        out
    }

    /// Common-neighbors matrix: the square of the adjacency matrix.
    pub fn square(&self) -> CommonNeighborsMatrix {
        let n = self.n;
        let mut data = vec![0u32; n * n];
        for u in 0..n {
            for v in u..n {
                let c = self.rows[u].and_count(&self.rows[v]) as u32;
                data[u * n + v] = c;
                data[v * n + u] = c;
            }
        }
        CommonNeighborsMatrix { n, data }
    }
}

impl fmt::Debug for BinaryGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryGraph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

/// Free-function form of [`BinaryGraph::square`].
pub fn square(g: &BinaryGraph) -> CommonNeighborsMatrix {
    g.square()
}

/// Symmetric non-negative integer matrix of common-neighbor counts. The
/// diagonal holds vertex degrees.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CommonNeighborsMatrix {
    n: usize,
    data: Vec<u32>,
}

impl CommonNeighborsMatrix {
    /// Wraps a dense row-major matrix after checking shape and symmetry.
    pub fn from_dense(n: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != n * n {
            return Err(ReconError::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        for u in 0..n {
            for v in u + 1..n {
                if data[u * n + v] != data[v * n + u] {
                    return Err(ReconError::NotSymmetric(u, v));
                }
            }
        }
        Ok(CommonNeighborsMatrix { n, data })
    }

    pub fn zeros(n: usize) -> Self {
        CommonNeighborsMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.data[u * self.n + v]
    }

    /// Sets both `(u, v)` and `(v, u)`.
    pub fn set(&mut self, u: usize, v: usize, value: u32) {
        self.data[u * self.n + v] = value;
        self.data[v * self.n + u] = value;
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.get(u, u) as usize
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.data[u * self.n..(u + 1) * self.n]
    }

    pub fn row_sum(&self, u: usize) -> u64 {
        self.row(u).iter().map(|&x| x as u64).sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.data
    }

    /// Squared Frobenius norm, exact.
    pub fn frobenius_sq(&self) -> u128 {
        self.data.iter().map(|&x| (x as u128) * (x as u128)).sum()
    }

    /// Squared Frobenius norm of the difference, exact.
    pub fn diff_frobenius_sq(&self, other: &CommonNeighborsMatrix) -> Result<u128> {
        if self.n != other.n {
            return Err(ReconError::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| {
                let d = (a as i64 - b as i64).unsigned_abs() as u128;
                d * d
            })
            .sum())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Six-cycle 0-1-2-3-4-5-0.
    pub fn six_cycle() -> BinaryGraph {
        BinaryGraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap()
    }

    /// Triangles {0,2,4} and {1,3,5}; co-square with [`six_cycle`].
    pub fn two_triangles() -> BinaryGraph {
        BinaryGraph::from_edges(6, [(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5)]).unwrap()
    }

    pub fn complete(n: usize) -> BinaryGraph {
        BinaryGraph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn path(n: usize) -> BinaryGraph {
        BinaryGraph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_of_empty_graph_is_zero() {
        assert_eq!(BinaryGraph::empty(4).square(), CommonNeighborsMatrix::zeros(4));
    }

    #[test]
    fn square_of_triangle() {
        let sq = complete(3).square();
        for u in 0..3 {
            for v in 0..3 {
                assert_eq!(sq.get(u, v), if u == v { 2 } else { 1 });
            }
        }
    }

    #[test]
    fn six_cycle_and_two_triangles_are_co_square() {
        let a = six_cycle().square();
        let b = two_triangles().square();
        assert_eq!(a, b);
        for u in 0..6 {
            for v in 0..6 {
                let dist = (u as i32 - v as i32)
                    .rem_euclid(6)
                    .min((v as i32 - u as i32).rem_euclid(6));
                let expected = match dist {
                    0 => 2,
                    2 => 1,
                    _ => 0,
                };
                assert_eq!(a.get(u, v), expected, "({u},{v})");
            }
        }
    }

    #[test]
    fn rejects_self_loops_and_asymmetry() {
        assert!(matches!(
            BinaryGraph::from_edges(3, [(1, 1)]),
            Err(ReconError::SelfLoop(1))
        ));
        assert!(matches!(
            BinaryGraph::from_dense(2, &[0, 1, 0, 0]),
            Err(ReconError::NotSymmetric(0, 1))
        ));
        assert!(matches!(
            CommonNeighborsMatrix::from_dense(2, vec![1, 2, 3, 1]),
            Err(ReconError::NotSymmetric(0, 1))
        ));
    }

    #[test]
    fn pair_index_round_trip() {
        let n = 7;
        let mut seen = Vec::new();
        for idx in 0..pair_count(n) {
            seen.push(pair_from_index(n, idx));
        }
        let expected: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn row_sums_match_neighbor_degree_sums() {
        for seed in 0..500u64 {
            let n = 1 + (seed as usize * 7919) % 50;
            let p = [0.05, 0.1, 0.3, 0.6][seed as usize % 4];
            let g = BinaryGraph::erdos_renyi(n, p, seed);
            let sq = g.square();
            for u in 0..n {
                let nbr: u64 = g.neighbors(u).map(|w| g.degree(w) as u64).sum();
                assert_eq!(sq.row_sum(u), nbr);
                assert_eq!(sq.degree(u), g.degree(u));
            }
        }
    }

    proptest! {
        #[test]
        fn dense_round_trip(n in 1usize..20, p in 0.0f64..1.0, seed in any::<u64>()) {
            let g = BinaryGraph::erdos_renyi(n, p, seed);
            prop_assert_eq!(BinaryGraph::from_dense(n, &g.to_dense()).unwrap(), g.clone());
            prop_assert_eq!(BinaryGraph::from_edges(n, g.edges()).unwrap(), g);
        }
    }
}
