use latgrow::enumeration::count_subgraphs;
use latgrow::meanfield::{tn_over_kn, tn_over_kn_window, tn_sandwich};
use latgrow::{EnumOptions, Kind, LatticeSpec};

fn main() -> latgrow::Result<()> {
    for l in 1..=3 {
        let spec = LatticeSpec::spread_out(2, l)?;
        let t = count_subgraphs(&spec, Kind::Tree, 3, &EnumOptions::default())?;
        for (n, t_n) in t.iter().enumerate().skip(1) {
            let s = tn_sandwich(&spec, n, t_n);
            let (lo, hi) = tn_over_kn_window(&spec, n);
            let ratio = tn_over_kn(&spec, n, t_n);
            println!(
                "{spec} n={n}: {} <= t_n = {} <= {} ({}); t_n/K^n = {ratio} in [{lo}, {hi}]",
                s.lower,
                s.t_n,
                s.upper,
                if s.holds() { "holds" } else { "violated" }
            );
        }
    }
    Ok(())
}
