//! Solves a 6x6 lattice into its sum of products.

use lattice_synth::model::serialize_function;
use lattice_synth::solver::{parse_lattice, solve_lattice};

fn main() -> lattice_synth::Result<()> {
    let lat = parse_lattice(include_str!("../tests/data/lattice_6x6.lat"))?;
    println!("{}\n", lat.pretty());
    let f = solve_lattice(&lat);
    print!("{}", serialize_function(&f));
    eprintln!("{} product terms", f.len());
    Ok(())
}
