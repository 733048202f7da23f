//! Two graphs with the same common-neighbors matrix: a six-cycle and two
//! disjoint triangles. No method can tell them apart from G² alone.

use g2recon::metrics::evaluate;
use g2recon::BinaryGraph;
use nalgebra::DMatrix;

fn spectrum(g: &BinaryGraph) -> Vec<f64> {
    let n = g.vertex_count();
    let a = DMatrix::from_fn(n, n, |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 });
    let mut ev: Vec<f64> = a
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|x: &f64| (x * 1e9).round() / 1e9)
        .collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn main() -> g2recon::Result<()> {
    let cycle = BinaryGraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6)))?;
    let triangles = BinaryGraph::from_edges(6, [(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5)])?;

    println!("squares equal: {}", cycle.square() == triangles.square());
    println!("cycle spectrum:     {:?}", spectrum(&cycle));
    println!("triangles spectrum: {:?}", spectrum(&triangles));

    let m = evaluate(&cycle, &triangles)?;
    println!("rae = {:.4}, cne = {}", m.rae, m.cne);
    Ok(())
}
