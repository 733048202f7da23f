//! Neighbor-set inference from row sums of G².
//!
//! Row `u` of G² sums to the total degree of the neighbors of `u`. For a
//! low-degree vertex we enumerate the vertex sets of the right size whose
//! degrees add up to that row sum; if only one such set exists it is the
//! neighborhood.

use crate::graph::CommonNeighborsMatrix;
use crate::tristate::{Cell, TriStateAdjacency};

use super::{run_on_copy, AttackKind, AttackOutcome, Writer};

pub fn degree_combination_attack(
    gstar: &TriStateAdjacency,
    g2: &CommonNeighborsMatrix,
    max_degree: usize,
) -> AttackOutcome {
    run_on_copy(gstar, g2, AttackKind::DegreeCombination, |w, g2| {
        apply(w, g2, max_degree)
    })
}

pub(super) fn apply(w: &mut Writer<'_>, g2: &CommonNeighborsMatrix, max_degree: usize) {
    let n = g2.vertex_count();
    for u in 0..n {
        let degree = g2.degree(u);
        if degree > max_degree {
            continue;
        }
        let row_sum = g2.row_sum(u);
        if degree == 0 {
            if row_sum != 0 {
                w.conflict((u, u), &[u], format!("isolated vertex with row sum {row_sum}"));
                continue;
            }
            for v in 0..n {
                w.write(u, v, Cell::Zero, &[u]);
            }
            continue;
        }
        if row_sum < degree as u64 {
            w.conflict((u, u), &[u], format!("row sum {row_sum} below degree {degree}"));
            continue;
        }
        // Every other neighbor has degree >= 1, so a neighbor's degree is at
        // most row_sum - (degree - 1).
        let bound = row_sum - degree as u64 + 1;
        for v in 0..n {
            if v != u && g2.degree(v) as u64 > bound {
                w.write(u, v, Cell::Zero, &[u]);
            }
        }

        let forced: Vec<usize> = w.g.known_neighbors(u).collect();
        if forced.len() > degree {
            continue;
        }
        let forced_sum: u64 = forced.iter().map(|&v| g2.degree(v) as u64).sum();
        if forced_sum > row_sum {
            w.conflict(
                (u, u),
                &[u],
                format!("known neighbors' degrees sum to {forced_sum} > row sum {row_sum}"),
            );
            continue;
        }
        let mut candidates: Vec<(u64, usize)> =
            w.g.unknown_in_row(u)
                .map(|v| (g2.degree(v) as u64, v))
                .filter(|&(d, _)| d >= 1 && d <= bound)
                .collect();
        candidates.sort_unstable();
        let need = degree - forced.len();
        let target = row_sum - forced_sum;
        let found = unique_subset(&candidates, need, target);
        match found {
            SubsetSearch::None => w.conflict(
                (u, u),
                &[u],
                format!("no {degree} vertices have degrees summing to row sum {row_sum}"),
            ),
            SubsetSearch::Many => {}
            SubsetSearch::Unique(chosen) => {
                // the neighborhood is exactly forced ∪ chosen
                let mut is_nbr = vec![false; n];
                for &v in forced.iter().chain(&chosen) {
                    is_nbr[v] = true;
                }
                for v in 0..n {
                    let value = if is_nbr[v] { Cell::One } else { Cell::Zero };
                    w.write(u, v, value, &[u]);
                }
            }
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub(super) enum SubsetSearch {
    None,
    Unique(Vec<usize>),
    Many,
}

/// Looks for `size`-element subsets of `items` (sorted by weight) with
/// weights summing to `target`; stops at the second hit.
pub(super) fn unique_subset(items: &[(u64, usize)], size: usize, target: u64) -> SubsetSearch {
    if size > items.len() {
        return SubsetSearch::None;
    }
    let mut prefix = vec![0u64; items.len() + 1];
    for (i, &(wt, _)) in items.iter().enumerate() {
        prefix[i + 1] = prefix[i] + wt;
    }
    let mut state = Search {
        items,
        prefix: &prefix,
        picked: Vec::with_capacity(size),
        first: None,
        hits: 0,
    };
    state.dfs(0, size, target);
    match (state.hits, state.first) {
        (0, _) => SubsetSearch::None,
        (1, Some(s)) => SubsetSearch::Unique(s),
        _ => SubsetSearch::Many,
    }
}

struct Search<'a> {
    items: &'a [(u64, usize)],
    prefix: &'a [u64],
    picked: Vec<usize>,
    first: Option<Vec<usize>>,
    hits: usize,
}

impl Search<'_> {
    fn dfs(&mut self, start: usize, need: usize, target: u64) {
        if self.hits >= 2 {
            return;
        }
        if need == 0 {
            if target == 0 {
                self.hits += 1;
                if self.first.is_none() {
                    self.first = Some(self.picked.clone());
                }
            }
            return;
        }
        let len = self.items.len();
        if len - start < need {
            return;
        }
        // the heaviest `need` items bound the reachable sum from above
        if self.prefix[len] - self.prefix[len - need] < target {
            return;
        }
        for i in start..=len - need {
            // the lightest `need` items from i bound it from below
            if self.prefix[i + need] - self.prefix[i] > target {
                break;
            }
            let (wt, v) = self.items[i];
            self.picked.push(v);
            self.dfs(i + 1, need - 1, target - wt);
            self.picked.pop();
            if self.hits >= 2 {
                return;
            }
        }
    }
}
