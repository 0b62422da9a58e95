use latgrow::planetree::{
    catalan, enumerate_plane_trees, f_count, gw_probability, w_closed_form, w_sum, weight,
};
use latgrow::{LatticeSpec, Precision};

fn main() {
    println!("plane trees with 3 edges, as preorder child counts:");
    for t in enumerate_plane_trees(3) {
        let p = gw_probability(&t).to_real(Precision::digits(12));
        println!("  {:?}  weight {}  Poisson(1) probability {}", t.xi(), weight(&t), p.to_decimal_string(6));
    }

    for n in 0..=8 {
        assert_eq!(w_sum(n), w_closed_form(n));
        println!("n = {n}: |T_n| = {:>5}  w_n = {}", catalan(n), w_closed_form(n));
    }

    let spec = LatticeSpec::nearest_neighbour(3).unwrap();
    println!("f_4 on {spec} = {}", f_count(&spec, 4));
}
