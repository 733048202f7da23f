//! Greedy sign assignment over the eigenpairs of G², then targeted error
//! forgetting of the rows whose square disagrees with G².

use g2recon::metrics::evaluate;
use g2recon::spectral::{
    eigendecompose, mismatched_rows, spectral_attack_traced, targeted_error_forgetting, SpectralConfig,
    DEFAULT_EIGENVALUE_FLOOR,
};
use g2recon::topo::topological_fixpoint;
use g2recon::{sample_knowledge, BinaryGraph};

fn main() -> g2recon::Result<()> {
    let g = BinaryGraph::erdos_renyi(30, 0.4, 5);
    let g2 = g.square();
    let knowledge = sample_knowledge(&g, 0.05, 2);
    let topo = topological_fixpoint(&knowledge, &g2)?;

    let es = eigendecompose(&g2, DEFAULT_EIGENVALUE_FLOOR)?;
    let cfg = SpectralConfig::default();
    let (alpha, beta) = cfg.resolve(&topo)?;
    println!("alpha = {alpha:.3}, beta = {beta:.3}");

    let (guess, steps) = spectral_attack_traced(&topo, &es, &cfg)?;
    for s in steps.iter().take(5) {
        println!(
            "eigenpair {:>2}: d+ = {:.3}, d- = {:.3} -> {}",
            s.eigen_index,
            s.d_plus,
            s.d_minus,
            if s.positive { "+" } else { "-" }
        );
    }
    let m = evaluate(&g, &guess)?;
    println!("spectral guess: rae = {:.4}, cne = {:.4}", m.rae, m.cne);

    let bad = mismatched_rows(&guess, &g2);
    let kept = targeted_error_forgetting(&guess, &topo, &g2)?;
    println!(
        "forgetting {} rows leaves {} unknown pairs (topological alone: {})",
        bad.len(),
        kept.unknown_pairs(),
        topo.unknown_pairs()
    );
    Ok(())
}
