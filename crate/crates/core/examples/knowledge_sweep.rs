//! Compares the pipeline with the overwrite baseline over knowledge
//! proportions. Pass an edge-list or MatrixMarket file to sweep it instead
//! of the built-in random graph.
//!
//! ```bash
//! cargo run --release --example knowledge_sweep -- data/netscience.edges
//! ```

use g2recon::pipeline::{summarize, sweep, PipelineConfig};
use g2recon::BinaryGraph;

fn main() -> g2recon::Result<()> {
    let g = match std::env::args().nth(1) {
        Some(path) => g2recon::io::parse_graph(&std::fs::read_to_string(path)?)?.graph,
        None => BinaryGraph::erdos_renyi(100, 0.05, 8),
    };
    let rhos = [0.0, 0.2, 0.4, 0.6, 0.8];
    let seeds: Vec<u64> = (0..5).collect();
    let rows = sweep(&g, &rhos, &seeds, &PipelineConfig::default())?;

    println!("{:>8} {:>5} {:>8} {:>8}", "method", "rho", "rae", "cne");
    for s in summarize(&rows) {
        println!(
            "{:>8} {:>5} {:>8.4} {:>8.4}",
            s.method.name(),
            s.rho,
            s.rae.mean,
            s.cne.mean
        );
    }
    Ok(())
}
