//! Scores a noisy copy of a graph: confusion counts, RAE and CNE.

use g2recon::metrics::evaluate;
use g2recon::BinaryGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> g2recon::Result<()> {
    let g = BinaryGraph::erdos_renyi(50, 0.1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let noisy: Vec<(usize, usize)> = g.edges().into_iter().filter(|_| rng.random_bool(0.9)).collect();
    let ghat = BinaryGraph::from_edges(50, noisy)?;

    let m = evaluate(&g, &ghat)?;
    println!("{}", serde_json::to_string_pretty(&m).unwrap());
    Ok(())
}
