use latgrow::cache::CountTable;
use latgrow::report::{cmd_verify, Identity, RunConfig, RunReport};
use latgrow::{LatticeSpec, Precision};

fn main() -> latgrow::Result<()> {
    let spec = LatticeSpec::nearest_neighbour(2)?;
    let cfg = RunConfig {
        precision: Precision::digits(20),
        ..RunConfig::default()
    };
    let mut table = CountTable::in_memory();

    for identity in Identity::ALL {
        let r = cmd_verify(&mut table, &spec, identity, 4, &cfg)?;
        println!("{identity:<14} exit code {}", r.outcome().exit_code());
    }

    let r = cmd_verify(&mut table, &spec, Identity::Sandwich, 3, &cfg)?;
    let json = r.to_json();
    print!("{json}");
    assert_eq!(RunReport::from_json(&json)?, r);
    print!("{}", r.to_csv());
    Ok(())
}
