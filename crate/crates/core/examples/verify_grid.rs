//! Checks a hand-made lattice against a function, then breaks one cell.

use lattice_synth::graph::LatticeDim;
use lattice_synth::model::parse_function;
use lattice_synth::solver::{solve_lattice, verify_witness, LatticeAssignment};

fn main() -> lattice_synth::Result<()> {
    // d'b' + efd'c' + fa'
    let f = parse_function("3\n2 997 999\n4 997 5 4 998\n2 1000 5\n")?;
    let dim = LatticeDim::new(3, 3)?;
    let mut codes = vec![4, 999, 1000, 998, 997, 5, 100, 999, 101];
    let lat = LatticeAssignment::from_codes(dim, &codes)?;
    println!(
        "{}\nrealizes {}: {}\n",
        lat.pretty(),
        f.pretty(),
        verify_witness(&lat, &f)?
    );

    // a 1 in the corner opens an extra path
    codes[6] = 101;
    let lat = LatticeAssignment::from_codes(dim, &codes)?;
    println!(
        "{}\nrealizes {}: {}",
        lat.pretty(),
        solve_lattice(&lat).pretty(),
        verify_witness(&lat, &f)?
    );
    Ok(())
}
