use latgrow::cache::CountTable;
use latgrow::{EnumOptions, Kind, LatticeSpec};

fn main() -> latgrow::Result<()> {
    let path = std::env::temp_dir().join("latgrow-example-cache.csv");
    let spec = LatticeSpec::nearest_neighbour(3)?;
    let opts = EnumOptions::default();

    let mut table = CountTable::open(&path)?;
    let before = table.len();
    let counts = table.counts(&spec, Kind::Animal, 5, &opts)?;
    println!("{spec} animals: {counts:?}");
    println!("{} records in {} ({} new)", table.len(), path.display(), table.len() - before);

    // Reopening serves the same values without enumerating.
    let mut again = CountTable::open(&path)?;
    assert_eq!(again.counts(&spec, Kind::Animal, 5, &opts)?, counts);
    Ok(())
}
