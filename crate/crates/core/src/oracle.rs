//! Exhaustive co-square enumeration for small graphs.
//!
//! This is a test oracle: it only shares [`BinaryGraph::square`] with the
//! attacks and checks every candidate against the full matrix.

use crate::error::{ReconError, Result};
use crate::graph::{BinaryGraph, CommonNeighborsMatrix};

/// Largest vertex count the oracle accepts.
pub const ORACLE_MAX_N: usize = 8;

/// All graphs `h` with `square(h) == g2`, sorted by edge list.
pub fn cosquare_oracle(g2: &CommonNeighborsMatrix, max_n: usize) -> Result<Vec<BinaryGraph>> {
    let n = g2.vertex_count();
    let limit = max_n.min(ORACLE_MAX_N);
    if n > limit {
        return Err(ReconError::Capacity {
            what: "vertices for exhaustive enumeration",
            needed: n,
            limit,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let degrees: Vec<usize> = (0..n).map(|u| g2.degree(u)).collect();
    // remaining[i][u]: pairs at index >= i touching u
    let mut remaining = vec![vec![0usize; n]; pairs.len() + 1];
    for i in (0..pairs.len()).rev() {
        remaining[i] = remaining[i + 1].clone();
        remaining[i][pairs[i].0] += 1;
        remaining[i][pairs[i].1] += 1;
    }

    let mut out = Vec::new();
    let mut current = BinaryGraph::empty(n);
    let mut deg = vec![0usize; n];
    enumerate(0, &pairs, &degrees, &remaining, &mut deg, &mut current, g2, &mut out);
    out.sort_by_key(|g| g.edges());
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    i: usize,
    pairs: &[(usize, usize)],
    target: &[usize],
    remaining: &[Vec<usize>],
    deg: &mut [usize],
    current: &mut BinaryGraph,
    g2: &CommonNeighborsMatrix,
    out: &mut Vec<BinaryGraph>,
) {
    if i == pairs.len() {
        if current.square() == *g2 {
            out.push(current.clone());
        }
        return;
    }
    let (u, v) = pairs[i];
    // skip the pair
    if deg[u] + remaining[i + 1][u] >= target[u] && deg[v] + remaining[i + 1][v] >= target[v] {
        enumerate(i + 1, pairs, target, remaining, deg, current, g2, out);
    }
    // take the pair
    if deg[u] < target[u] && deg[v] < target[v] {
        current.add_edge(u, v);
        deg[u] += 1;
        deg[v] += 1;
        enumerate(i + 1, pairs, target, remaining, deg, current, g2, out);
        deg[u] -= 1;
        deg[v] -= 1;
        current.remove_edge(u, v);
    }
}
