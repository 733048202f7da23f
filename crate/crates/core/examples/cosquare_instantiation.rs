//! A star whose leaves are paired by a perfect matching has several
//! co-squares. The fixpoint leaves one ambiguous component and the
//! exhaustive search counts and picks among its completions.

use g2recon::cosquare::{find_ambiguous_components, instantiate_cosquare, DEFAULT_BUDGET};
use g2recon::topo::topological_fixpoint;
use g2recon::{cosquare_oracle, BinaryGraph, Cell, KnowledgeSet};

fn main() -> g2recon::Result<()> {
    // center 0, leaves 1..=4, matching (1,2) (3,4)
    let g = BinaryGraph::from_edges(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)])?;
    let g2 = g.square();
    let gstar = topological_fixpoint(&KnowledgeSet::empty(), &g2)?;
    println!("unknown after fixpoint: {}", gstar.unknown_pairs());

    for mut comp in find_ambiguous_components(&gstar) {
        let done = instantiate_cosquare(&gstar, &g2, &mut comp, DEFAULT_BUDGET)?;
        let picked = done.finalize(Cell::Zero);
        println!(
            "component over {:?}: {} cells, {} completions, picked {:?}",
            comp.vertices,
            comp.cells.len(),
            comp.solutions_found,
            picked.edges()
        );
        println!("picked square matches: {}", picked.square() == g2);
    }
    println!("brute force co-squares: {}", cosquare_oracle(&g2, 8)?.len());
    Ok(())
}
