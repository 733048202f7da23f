//! Runs the seven topological attacks to a fixpoint with a little prior
//! knowledge and checks every inferred cell against the hidden graph.

use g2recon::topo::{run_fixpoint, TopoConfig};
use g2recon::{init_partial, sample_knowledge, BinaryGraph, Cell};

fn main() -> g2recon::Result<()> {
    let g = BinaryGraph::erdos_renyi(40, 0.08, 11);
    let g2 = g.square();
    let knowledge = sample_knowledge(&g, 0.1, 1);

    let mut gstar = init_partial(g.vertex_count(), &knowledge)?;
    let known = gstar.determined_pairs();
    let report = run_fixpoint(&mut gstar, &g2, &TopoConfig::default(), true)?;

    println!("known from prior: {known} pairs");
    for (attack, changes) in &report.changes {
        println!("{:>20}: {changes}", attack.name());
    }
    println!("rounds: {}, unknown left: {}", report.rounds, gstar.unknown_pairs());

    let wrong = (0..40)
        .flat_map(|u| (u + 1..40).map(move |v| (u, v)))
        .filter(|&(u, v)| match gstar.get(u, v) {
            Cell::One => !g.has_edge(u, v),
            Cell::Zero => g.has_edge(u, v),
            Cell::Unknown => false,
        })
        .count();
    println!("wrong cells: {wrong}");
    Ok(())
}
