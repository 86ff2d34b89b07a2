//! Splits an 8-term function over two 3x3 lattices.

use lattice_synth::decompose::{decompose_two, DecomposeOutcome};
use lattice_synth::graph::LatticeDim;
use lattice_synth::mapper::SearchBudget;
use lattice_synth::model::{equivalent, parse_function};
use lattice_synth::solver::solve_lattice;

// C'E'BA' + DBE + DE'B' + C'E'B' + DBA' + DAE + DAB' + C'D
const F: &str = "8\n4 998 996 1 1000\n3 3 1 4\n3 3 996 999\n3 998 996 999\n\
3 3 1 1000\n3 3 0 4\n3 3 0 999\n2 998 3\n";

fn main() -> lattice_synth::Result<()> {
    let f = parse_function(F)?;
    let dim = LatticeDim::new(3, 3)?;
    let out = decompose_two(&f, dim, SearchBudget::unlimited())?;
    let DecomposeOutcome::Found(r) = out else {
        println!("{out:?}");
        return Ok(());
    };
    println!("split into {} + {} terms", r.pair.0, r.pair.1);
    for part in [&r.sub_a, &r.sub_b] {
        println!("\nterms {:?}: {}", part.indices, part.function.pretty());
        println!("{}", part.solution.assignment.pretty());
    }
    let or = solve_lattice(&r.sub_a.solution.assignment)
        .or(&solve_lattice(&r.sub_b.solution.assignment));
    println!("\nOR of both lattices equals f: {}", equivalent(&or, &f)?);
    Ok(())
}
