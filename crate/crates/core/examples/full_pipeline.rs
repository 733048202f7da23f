//! The whole reconstruction: topological fixpoint, spectral attack,
//! forgetting, a second fixpoint and co-square instantiation.
//!
//! ```bash
//! cargo run --example full_pipeline -- 0.2
//! ```

use g2recon::metrics::evaluate;
use g2recon::pipeline::{run_pipeline, PipelineConfig};
use g2recon::{sample_knowledge, BinaryGraph};

fn main() -> g2recon::Result<()> {
    let rho: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0.1);
    let g = BinaryGraph::erdos_renyi(80, 0.3, 21);
    let knowledge = sample_knowledge(&g, rho, 0);

    let (out, trace) = run_pipeline(&g.square(), &knowledge, &PipelineConfig::default())?;
    for s in &trace.stages {
        println!("{:>14}: {}", format!("{:?}", s.stage), s.changes);
    }
    if let Some(f) = &trace.fallback {
        println!("fell back at {:?}: {}", f.stage, f.reason);
    }
    let m = evaluate(&g, &out)?;
    println!(
        "rho = {rho}: fpr = {:.4}, fnr = {:.4}, rae = {:.4}, cne = {:.4}, unresolved = {}",
        m.fpr, m.fnr, m.rae, m.cne, trace.unresolved_cells
    );
    Ok(())
}
