use latgrow::cuttree::cut_tree;
use latgrow::enumeration::enumerate_subgraphs;
use latgrow::meanfield::{
    degree_product, f_count_by_configurations, maps_onto_cuttree, maps_onto_tree,
    nu_by_root_recursion, FoldOptions,
};
use latgrow::planetree::f_count;
use latgrow::{EnumOptions, Kind, LatticeSpec};
use num_traits::One;

fn main() -> latgrow::Result<()> {
    let spec = LatticeSpec::nearest_neighbour(2)?;
    let fold = FoldOptions::default();
    let opts = EnumOptions::default();

    for n in 0..=4 {
        let direct = f_count_by_configurations(&spec, n, &fold)?;
        println!("f_{n}: by configurations {direct}, closed form {}", f_count(&spec, n));
    }

    let trees = enumerate_subgraphs(&spec, 3, Kind::Tree, &opts)?;
    let all_one = trees
        .iter()
        .all(|t| maps_onto_tree(&spec, t, &fold).map(|w| w.is_one()).unwrap_or(false));
    println!("{} trees with 3 bonds, weighted folding sum 1 on each: {all_one}", trees.len());

    let origin = spec.origin();
    for animal in enumerate_subgraphs(&spec, 4, Kind::Animal, &opts)?.iter().filter(|a| a.cycles() > 0) {
        let x = cut_tree(&spec, animal);
        let nu = maps_onto_cuttree(&spec, &x, &fold)?;
        println!(
            "{x}: nu = {nu}, prod b! = {}, root recursion = {}",
            degree_product(&x, &origin),
            nu_by_root_recursion(&spec, &x, &origin, &fold)?
        );
    }
    Ok(())
}
