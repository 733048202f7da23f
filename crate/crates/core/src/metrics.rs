//! Reconstruction error against a known target graph.

use serde::{Deserialize, Serialize};

use crate::error::{ReconError, Result};
use crate::graph::{pair_count, BinaryGraph};
use crate::tristate::check_same_n;

pub const METRICS_SCHEMA_VERSION: u32 = 1;

/// Confusion counts are over unordered off-diagonal pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub schema_version: u32,
    pub fpr: f64,
    pub fnr: f64,
    /// ‖G − Ĝ‖_F / ‖G‖_F
    pub rae: f64,
    /// ‖G² − Ĝ²‖_F / ‖G²‖_F
    pub cne: f64,
    pub true_positives: u64,
    pub false_positives: u64,
    pub true_negatives: u64,
    pub false_negatives: u64,
    /// ‖G‖_F², twice the edge count.
    pub adjacency_norm_sq: u128,
    pub adjacency_diff_sq: u128,
    pub square_norm_sq: u128,
    pub square_diff_sq: u128,
}

impl MetricsReport {
    pub fn is_perfect(&self) -> bool {
        self.false_positives == 0 && self.false_negatives == 0
    }
}

pub fn evaluate(g: &BinaryGraph, ghat: &BinaryGraph) -> Result<MetricsReport> {
    let n = g.vertex_count();
    check_same_n(n, ghat.vertex_count())?;
    let edges = g.edge_count() as u64;
    if edges == 0 {
        return Err(ReconError::UndefinedMetric("target graph has no edges"));
    }
    let mut tp = 0u64;
    let mut fp = 0u64;
    for u in 0..n {
        let both = g.row(u).and_count(ghat.row(u)) as u64;
        tp += both;
        fp += ghat.degree(u) as u64 - both;
    }
    // every pair was seen from both ends
    tp /= 2;
    fp /= 2;
    let fneg = edges - tp;
    let negatives = pair_count(n) as u64 - edges;
    let tn = negatives - fp;

    let adjacency_norm_sq = 2 * edges as u128;
    let adjacency_diff_sq = 2 * (fp + fneg) as u128;
    let g2 = g.square();
    let square_norm_sq = g2.frobenius_sq();
    let square_diff_sq = g2.diff_frobenius_sq(&ghat.square())?;

    Ok(MetricsReport {
        schema_version: METRICS_SCHEMA_VERSION,
        fpr: if negatives == 0 {
            0.0
        } else {
            fp as f64 / negatives as f64
        },
        fnr: fneg as f64 / edges as f64,
        rae: ratio(adjacency_diff_sq, adjacency_norm_sq),
        cne: ratio(square_diff_sq, square_norm_sq),
        true_positives: tp,
        false_positives: fp,
        true_negatives: tn,
        false_negatives: fneg,
        adjacency_norm_sq,
        adjacency_diff_sq,
        square_norm_sq,
        square_diff_sq,
    })
}

fn ratio(diff_sq: u128, norm_sq: u128) -> f64 {
    (diff_sq as f64 / norm_sq as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::pair_from_index;
    use crate::oracle::cosquare_oracle;
    use proptest::prelude::*;

    /// Dense recount straight from the definitions.
    fn dense_counts(g: &BinaryGraph, h: &BinaryGraph) -> (u64, u64, u64, u64) {
        let (a, b) = (g.to_dense(), h.to_dense());
        let n = g.vertex_count();
        let (mut tp, mut fp, mut tn, mut fneg) = (0, 0, 0, 0);
        for u in 0..n {
            for v in u + 1..n {
                match (a[u * n + v], b[u * n + v]) {
                    (1, 1) => tp += 1,
                    (0, 1) => fp += 1,
                    (0, 0) => tn += 1,
                    _ => fneg += 1,
                }
            }
        }
        (tp, fp, tn, fneg)
    }

    #[test]
    fn identical_graphs_score_zero() {
        let g = BinaryGraph::erdos_renyi(15, 0.3, 4);
        let r = evaluate(&g, &g).unwrap();
        assert_eq!((r.fpr, r.fnr, r.rae, r.cne), (0.0, 0.0, 0.0, 0.0));
        assert!(r.is_perfect());
    }

    #[test]
    fn triangle_against_empty() {
        let r = evaluate(&complete(3), &BinaryGraph::empty(3)).unwrap();
        assert_eq!((r.fpr, r.fnr, r.rae, r.cne), (0.0, 1.0, 1.0, 1.0));
        assert_eq!(r.false_negatives, 3);
    }

    #[test]
    fn co_square_pair_has_zero_cne() {
        let r = evaluate(&six_cycle(), &two_triangles()).unwrap();
        assert_eq!(r.cne, 0.0);
        assert!(r.rae > 0.0);
        // the edge sets are disjoint: 6 misses and 6 false alarms out of 12
        assert_eq!((r.false_negatives, r.false_positives), (6, 6));
        assert!((r.rae - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn empty_target_is_rejected() {
        assert!(matches!(
            evaluate(&BinaryGraph::empty(4), &complete(4)),
            Err(ReconError::UndefinedMetric(_))
        ));
        assert!(evaluate(&complete(3), &complete(4)).is_err());
    }

    #[test]
    fn json_carries_schema_version() {
        let r = evaluate(&complete(3), &path(3)).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["schema_version"], 1);
        for key in ["fpr", "fnr", "rae", "cne", "true_positives", "false_negatives"] {
            assert!(v.get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn zero_cne_iff_co_square() {
        for n in 2..=5usize {
            let pairs = pair_count(n);
            for mask in 0u32..1 << pairs {
                let edges = (0..pairs).filter(|i| mask >> i & 1 == 1).map(|i| pair_from_index(n, i));
                let g = BinaryGraph::from_edges(n, edges).unwrap();
                if g.edge_count() == 0 || mask % 7 != 0 {
                    continue;
                }
                let sols = cosquare_oracle(&g.square(), 8).unwrap();
                for other in [BinaryGraph::erdos_renyi(n, 0.5, mask as u64), sols[0].clone()] {
                    let r = evaluate(&g, &other).unwrap();
                    assert_eq!(r.cne == 0.0, sols.contains(&other));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn counts_and_norm_identity(n in 2usize..25, p in 0.05f64..0.95, s1 in any::<u64>(), s2 in any::<u64>()) {
            let g = BinaryGraph::erdos_renyi(n, p, s1);
            prop_assume!(g.edge_count() > 0);
            let h = BinaryGraph::erdos_renyi(n, p, s2);
            let r = evaluate(&g, &h).unwrap();
            prop_assert_eq!(
                (r.true_positives, r.false_positives, r.true_negatives, r.false_negatives),
                dense_counts(&g, &h)
            );
            let dense_diff: u128 = g.to_dense().iter().zip(h.to_dense()).map(|(&a, b)| (a != b) as u128).sum();
            prop_assert_eq!(r.adjacency_diff_sq, dense_diff);
            prop_assert_eq!(r.adjacency_diff_sq, 2 * (r.false_positives + r.false_negatives) as u128);
            prop_assert!(r.fpr <= 1.0 && r.fnr <= 1.0 && r.rae >= 0.0 && r.cne >= 0.0);
        }
    }
}
