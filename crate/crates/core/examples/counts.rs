use latgrow::asymptotics::growth_estimates;
use latgrow::enumeration::count_subgraphs;
use latgrow::{EnumOptions, Kind, LatticeSpec, Precision};

fn main() -> latgrow::Result<()> {
    let spec = LatticeSpec::nearest_neighbour(2)?;
    let n_max = 10;
    let opts = EnumOptions::default();
    let trees = count_subgraphs(&spec, Kind::Tree, n_max, &opts)?;
    let animals = count_subgraphs(&spec, Kind::Animal, n_max, &opts)?;

    println!("{:>3} {:>12} {:>12}", "n", "t_n", "a_n");
    for n in 0..=n_max {
        println!("{n:>3} {:>12} {:>12}", trees[n], animals[n]);
    }

    let est = growth_estimates(&animals, Precision::digits(20))?;
    println!("a_n^(1/n) at n = {n_max}: {}", est.root_estimates[n_max - 1].to_decimal_string(8));
    println!("a_n / a_(n-1) at n = {n_max}: {}", est.ratio_estimates[n_max - 1].to_decimal_string(8));
    Ok(())
}
