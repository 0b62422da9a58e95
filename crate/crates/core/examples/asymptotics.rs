use latgrow::asymptotics::{
    alpha_series, g1_diagnostic, penrose_bounds, tau_series, z0, G1_LABEL,
};
use latgrow::enumeration::count_subgraphs;
use latgrow::{EnumOptions, Kind, LatticeSpec, Precision};

fn main() -> latgrow::Result<()> {
    let prec = Precision::digits(30);
    let spec = LatticeSpec::nearest_neighbour(2)?;
    println!("z0 = 1/(Ke) = {}", z0(&spec, prec));

    for k in [4, 10, 100, 10_000] {
        let b = penrose_bounds(k, prec)?;
        println!("K = {k:>5}: K^K/(K-1)^(K-1) = {}  ratio to Ke = {}", b.upper.to_decimal_string(12), b.ratio().to_decimal_string(12));
    }

    for d in [4, 8, 20, 50] {
        let tau = tau_series(d, 5, prec)?;
        let alpha = alpha_series(d, 5, prec)?;
        println!("d = {d:>2}: tau ~ {}  alpha ~ {}", tau.value.to_decimal_string(10), alpha.value.to_decimal_string(10));
    }

    let t = count_subgraphs(&spec, Kind::Tree, 9, &EnumOptions::default())?;
    let g = g1_diagnostic(spec.degree(), &t, 8, prec)?;
    println!("{} at N = 8: K zhat ghat = {}", g.label, g.value.to_decimal_string(10));
    assert_eq!(g.label, G1_LABEL);
    Ok(())
}
