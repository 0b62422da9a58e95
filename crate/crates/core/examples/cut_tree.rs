use latgrow::cuttree::{cut_tree, degrees, reconstruct, CutTree};
use latgrow::{Bond, BondSubgraph, LatticeSpec, Site};

fn bond(a: [i32; 2], b: [i32; 2]) -> Bond {
    Bond::new(Site::new(a.to_vec()), Site::new(b.to_vec()))
}

fn main() -> latgrow::Result<()> {
    let spec = LatticeSpec::nearest_neighbour(2)?;
    // Two unit squares sharing the bond (1,0)-(1,1), plus a tail.
    let animal = BondSubgraph::new(
        2,
        [
            bond([0, 0], [1, 0]),
            bond([1, 0], [2, 0]),
            bond([0, 0], [0, 1]),
            bond([0, 1], [1, 1]),
            bond([1, 1], [2, 1]),
            bond([1, 0], [1, 1]),
            bond([2, 0], [2, 1]),
            bond([2, 1], [3, 1]),
        ],
    )?;
    println!("animal: {} bonds, {} cycles", animal.len(), animal.cycles());

    let x = cut_tree(&spec, &animal);
    println!("cut-tree: {x}");
    for (site, b) in degrees(&x) {
        println!("  b{site} = {b}");
    }

    let text = x.to_string();
    let parsed: CutTree = text.parse()?;
    assert_eq!(reconstruct(&spec, &parsed)?, animal);
    println!("reconstructed the original animal from the text form");
    Ok(())
}
