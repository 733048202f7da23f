//! Prior knowledge of an adversary: known edges and known non-edges.

use std::collections::BTreeSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ReconError, Result};
use crate::graph::{pair, pair_count, pair_from_index, BinaryGraph};

/// Known edges (E₁) and known non-edges (E₀) as normalized unordered pairs,
/// together with the sampling parameters that produced them.
#[derive(Clone, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct KnowledgeSet {
    known_edges: BTreeSet<(usize, usize)>,
    known_non_edges: BTreeSet<(usize, usize)>,
    #[serde(default)]
    pub rho: f64,
    #[serde(default)]
    pub seed: u64,
}

impl KnowledgeSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new<A, B>(edges: A, non_edges: B) -> Result<Self>
    where
        A: IntoIterator<Item = (usize, usize)>,
        B: IntoIterator<Item = (usize, usize)>,
    {
        let k = KnowledgeSet {
            known_edges: edges.into_iter().map(|(u, v)| pair(u, v)).collect(),
            known_non_edges: non_edges.into_iter().map(|(u, v)| pair(u, v)).collect(),
            rho: 0.0,
            seed: 0,
        };
        k.validate(usize::MAX)?;
        Ok(k)
    }

    /// Draws ⌊ρ·n(n−1)/2⌋ distinct unordered pairs uniformly at random and
    /// files each under E₁ or E₀ according to `g`.
    pub fn sample(g: &BinaryGraph, rho: f64, seed: u64) -> Self {
        assert!((0.0..=1.0).contains(&rho), "rho must lie in [0, 1]");
        let n = g.vertex_count();
        let total = pair_count(n);
        let amount = ((rho * total as f64).floor() as usize).min(total);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut k = KnowledgeSet {
            rho,
            seed,
            ..Default::default()
        };
        for idx in index::sample(&mut rng, total, amount) {
            let (u, v) = pair_from_index(n, idx);
            if g.has_edge(u, v) {
                k.known_edges.insert((u, v));
            } else {
                k.known_non_edges.insert((u, v));
            }
        }
        k
    }

    pub fn known_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.known_edges
    }

    pub fn known_non_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.known_non_edges
    }

    pub fn len(&self) -> usize {
        self.known_edges.len() + self.known_non_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checks disjointness, self-loops and vertex range (`n` vertices).
    pub fn validate(&self, n: usize) -> Result<()> {
        for set in [&self.known_edges, &self.known_non_edges] {
            for &(a, b) in set {
                if a == b {
                    return Err(ReconError::SelfLoopKnowledge(a));
                }
                for x in [a, b] {
                    if x >= n {
                        return Err(ReconError::VertexOutOfRange { vertex: x, n });
                    }
                }
            }
        }
        // deserialized sets may hold unnormalized pairs
        let ones: BTreeSet<_> = self.known_edges.iter().map(|&(a, b)| pair(a, b)).collect();
        for &(a, b) in &self.known_non_edges {
            let p = pair(a, b);
            if ones.contains(&p) {
                return Err(ReconError::ContradictoryKnowledge(p.0, p.1));
            }
        }
        Ok(())
    }
}

/// Free-function form of [`KnowledgeSet::sample`].
pub fn sample_knowledge(g: &BinaryGraph, rho: f64, seed: u64) -> KnowledgeSet {
    KnowledgeSet::sample(g, rho, seed)
}
