//! Edge list in, MatrixMarket common-neighbors matrix out, and back.

use g2recon::io;

fn main() -> g2recon::Result<()> {
    // sparse ids are densified in first-seen order
    let text = "# a small graph\n10 20\n20 30\n30 10\n30 40\n";
    let lg = io::parse_graph(text)?;
    println!("labels: {:?}", lg.labels);

    let mut mtx = Vec::new();
    io::write_square_mtx(&lg.graph.square(), &mut mtx)?;
    let mtx = String::from_utf8(mtx).unwrap();
    print!("{mtx}");

    let back = io::read_square_mtx(&mtx)?;
    println!("round trip equal: {}", back == lg.graph.square());

    let mut edges = Vec::new();
    io::write_edge_list(&lg.graph, &mut edges)?;
    print!("{}", String::from_utf8(edges).unwrap());
    Ok(())
}
