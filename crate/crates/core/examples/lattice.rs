use latgrow::{Bond, LatticeSpec, Site};

fn main() -> latgrow::Result<()> {
    let square: LatticeSpec = "nn:d=2".parse()?;
    let spread = LatticeSpec::spread_out(2, 2)?;
    println!("{square}: K = {}, girth = {:?}", square.degree(), square.girth());
    println!("{spread}: K = {}, girth = {:?}", spread.degree(), spread.girth());

    let x = Site::new(vec![1, -1]);
    let nbrs: Vec<String> = square.neighbors(&x)?.iter().map(|s| s.to_string()).collect();
    println!("neighbours of {x} on {square}: {}", nbrs.join(" "));

    // Bonds are stored low end first and compare lexicographically.
    let mut bonds = vec![
        Bond::new(Site::new(vec![0, 1]), Site::new(vec![0, 0])),
        Bond::new(Site::new(vec![0, 0]), Site::new(vec![1, 0])),
        Bond::new(Site::new(vec![-1, 0]), Site::new(vec![0, 0])),
    ];
    bonds.sort();
    for b in &bonds {
        println!("{b}");
    }
    Ok(())
}
