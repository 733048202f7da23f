//! Degree and common-neighbor counting rules.

use crate::bits::{ones_of, BitRow};
use crate::graph::CommonNeighborsMatrix;
use crate::tristate::{Cell, TriStateAdjacency};

use super::{run_on_copy, AttackKind, AttackOutcome, Writer};

/// A vertex whose known neighbors already reach its degree has no other
/// neighbor.
pub fn degree_matching_attack(gstar: &TriStateAdjacency, g2: &CommonNeighborsMatrix) -> AttackOutcome {
    run_on_copy(gstar, g2, AttackKind::DegreeMatching, degree_matching)
}

/// If `u` and `v` already show all their common neighbors, no other known
/// neighbor of one is adjacent to the other.
pub fn neighbor_matching_attack(gstar: &TriStateAdjacency, g2: &CommonNeighborsMatrix) -> AttackOutcome {
    run_on_copy(gstar, g2, AttackKind::NeighborMatching, neighbor_matching)
}

/// A vertex with exactly as many Unknown cells as missing neighbors is
/// adjacent to all of them.
pub fn degree_completion_attack(gstar: &TriStateAdjacency, g2: &CommonNeighborsMatrix) -> AttackOutcome {
    run_on_copy(gstar, g2, AttackKind::DegreeCompletion, degree_completion)
}

/// A pair with exactly as many possible new common neighbors as missing
/// ones is adjacent to all of them.
pub fn neighbor_completion_attack(gstar: &TriStateAdjacency, g2: &CommonNeighborsMatrix) -> AttackOutcome {
    run_on_copy(gstar, g2, AttackKind::NeighborCompletion, neighbor_completion)
}

/// Closes the triangles over a known edge when the vertices sharing
/// neighbors with both endpoints are exactly as many as its common
/// neighbors.
pub fn triangle_attack(gstar: &TriStateAdjacency, g2: &CommonNeighborsMatrix) -> AttackOutcome {
    run_on_copy(gstar, g2, AttackKind::Triangle, triangle)
}

/// Uses a vertex with a complete neighborhood to complete bi-cliques and
/// to rule out edges of vertices whose missing neighbors must lie in it.
pub fn biclique_attack(gstar: &TriStateAdjacency, g2: &CommonNeighborsMatrix) -> AttackOutcome {
    run_on_copy(gstar, g2, AttackKind::Biclique, biclique)
}

fn possible_row(g: &TriStateAdjacency, u: usize) -> Vec<u64> {
    g.one_row(u)
        .words()
        .iter()
        .zip(g.unknown_row(u).words())
        .map(|(a, b)| a | b)
        .collect()
}

pub(super) fn degree_matching(w: &mut Writer<'_>, g2: &CommonNeighborsMatrix) {
    for u in 0..g2.vertex_count() {
        let known = w.g.known_degree(u);
        let degree = g2.degree(u);
        if known > degree {
            w.conflict((u, u), &[u], format!("{known} known neighbors exceed degree {degree}"));
        } else if known == degree {
            let unknown: Vec<usize> = w.g.unknown_in_row(u).collect();
            for v in unknown {
                w.write(u, v, Cell::Zero, &[u]);
            }
        }
    }
}

pub(super) fn neighbor_matching(w: &mut Writer<'_>, g2: &CommonNeighborsMatrix) {
    let n = g2.vertex_count();
    for u in 0..n {
        for v in u + 1..n {
            let known = w.g.known_common(u, v);
            let target = g2.get(u, v) as usize;
            if known > target {
                w.conflict(
                    (u, v),
                    &[u, v],
                    format!("{known} known common neighbors exceed {target}"),
                );
                continue;
            }
            if known < target {
                continue;
            }
            let only_u = ones_of(w.g.one_row(u).words(), w.g.one_row(v).words(), |a, b| a & !b);
            let only_v = ones_of(w.g.one_row(v).words(), w.g.one_row(u).words(), |a, b| a & !b);
            for x in only_u {
                w.write(x, v, Cell::Zero, &[u, v]);
            }
            for x in only_v {
                w.write(x, u, Cell::Zero, &[u, v]);
            }
        }
    }
}

pub(super) fn degree_completion(w: &mut Writer<'_>, g2: &CommonNeighborsMatrix) {
    for u in 0..g2.vertex_count() {
        let reachable = w.g.known_degree(u) + w.g.unknown_count(u);
        let degree = g2.degree(u);
        if degree > reachable {
            w.conflict(
                (u, u),
                &[u],
                format!("degree {degree} unreachable, at most {reachable}"),
            );
        } else if degree == reachable && w.g.unknown_count(u) > 0 {
            let unknown: Vec<usize> = w.g.unknown_in_row(u).collect();
            for v in unknown {
                w.write(u, v, Cell::One, &[u]);
            }
        }
    }
}

pub(super) fn neighbor_completion(w: &mut Writer<'_>, g2: &CommonNeighborsMatrix) {
    let n = g2.vertex_count();
    for u in 0..n {
        let pu = possible_row(w.g, u);
        for v in u + 1..n {
            let target = g2.get(u, v) as usize;
            if target == 0 {
                continue;
            }
            let known = w.g.known_common(u, v);
            if known >= target {
                // excess is reported by neighbor matching
                continue;
            }
            let missing = target - known;
            let pv = possible_row(w.g, v);
            let both_one: Vec<u64> =
                w.g.one_row(u)
                    .words()
                    .iter()
                    .zip(w.g.one_row(v).words())
                    .map(|(a, b)| a & b)
                    .collect();
            let cand_words: Vec<u64> = pu
                .iter()
                .zip(&pv)
                .zip(&both_one)
                .map(|((a, b), c)| a & b & !c)
                .collect();
            let count: usize = cand_words.iter().map(|x| x.count_ones() as usize).sum();
            if count < missing {
                w.conflict(
                    (u, v),
                    &[u, v],
                    format!("{missing} common neighbors missing but only {count} candidates"),
                );
            } else if count == missing {
                let cands: Vec<usize> = crate::bits::Ones::new(&cand_words).collect();
                for x in cands {
                    w.write(u, x, Cell::One, &[u, v]);
                    w.write(v, x, Cell::One, &[u, v]);
                }
            }
        }
    }
}

/// Bit rows of `g2(u, w) > 0` for `w != u`.
fn positive_rows(g2: &CommonNeighborsMatrix) -> Vec<BitRow> {
    let n = g2.vertex_count();
    (0..n)
        .map(|u| {
            let mut r = BitRow::zeros(n);
            for (x, &c) in g2.row(u).iter().enumerate() {
                if c > 0 && x != u {
                    r.set(x);
                }
            }
            r
        })
        .collect()
}

pub(super) fn triangle(w: &mut Writer<'_>, g2: &CommonNeighborsMatrix) {
    let n = g2.vertex_count();
    let positive = positive_rows(g2);
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| {
            w.g.known_neighbors(u)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
                .collect::<Vec<_>>()
        })
        .collect();
    for (u, v) in edges {
        let target = g2.get(u, v) as usize;
        if target == 0 {
            continue;
        }
        let pu = possible_row(w.g, u);
        let pv = possible_row(w.g, v);
        let words: Vec<u64> = positive[u]
            .words()
            .iter()
            .zip(positive[v].words())
            .zip(pu.iter().zip(&pv))
            .map(|((a, b), (c, d))| a & b & c & d)
            .collect();
        let count: usize = words.iter().map(|x| x.count_ones() as usize).sum();
        if count < target {
            w.conflict(
                (u, v),
                &[u, v],
                format!("edge lies in {target} triangles but only {count} candidates"),
            );
        } else if count == target {
            let apexes: Vec<usize> = crate::bits::Ones::new(&words).collect();
            for x in apexes {
                w.write(u, x, Cell::One, &[u, v]);
                w.write(v, x, Cell::One, &[u, v]);
            }
        }
    }
}

pub(super) fn biclique(w: &mut Writer<'_>, g2: &CommonNeighborsMatrix) {
    let n = g2.vertex_count();
    for u in 0..n {
        let degree = g2.degree(u);
        if w.g.known_degree(u) != degree {
            continue;
        }
        for v in 0..n {
            if v == u {
                continue;
            }
            let common = g2.get(u, v) as usize;
            if common == degree {
                if degree > 0 && w.g.get(u, v) == Cell::One {
                    w.conflict(
                        (u, v),
                        &[u, v],
                        format!("neighbor shares all {degree} neighbors including itself"),
                    );
                    continue;
                }
                let nbrs: Vec<usize> = w.g.known_neighbors(u).collect();
                for x in nbrs {
                    w.write(v, x, Cell::One, &[u, v]);
                }
            } else {
                let missing_nbrs = degree_gap(g2.degree(v), w.g.known_degree(v));
                let missing_common = degree_gap(common, w.g.known_common(u, v));
                if missing_nbrs == missing_common {
                    let outside = ones_of(w.g.unknown_row(v).words(), w.g.one_row(u).words(), |a, b| a & !b);
                    for x in outside {
                        w.write(v, x, Cell::Zero, &[u, v]);
                    }
                }
            }
        }
    }
}

fn degree_gap(target: usize, known: usize) -> i64 {
    target as i64 - known as i64
}
