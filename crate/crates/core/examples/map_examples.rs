//! Maps four small functions onto a 3x3 lattice and prints the report the
//! `map` command would print.

use lattice_synth::cli::solution_text;
use lattice_synth::graph::LatticeDim;
use lattice_synth::mapper::{map_function, MapOutcome, MappingProblem, SearchBudget};
use lattice_synth::model::parse_function;

const FUNCTIONS: [&str; 4] = [
    "3\n2 997 999\n4 997 5 4 998\n2 1000 5\n",
    "4\n2 997 4\n2 997 999\n2 996 999\n2 0 4\n",
    "4\n3 4 1000 1\n4 4 1000 998 997\n3 0 998 997\n1 996\n",
    "4\n3 995 3 1000\n2 995 4\n2 1000 4\n3 995 997 999\n",
];

fn main() -> lattice_synth::Result<()> {
    let dim = LatticeDim::new(3, 3)?;
    for text in FUNCTIONS {
        let f = parse_function(text)?;
        println!("f = {}", f.pretty());
        match map_function(&MappingProblem::new(f, dim, SearchBudget::unlimited()))? {
            MapOutcome::Solution(s) => println!("{}", solution_text(&s, true)),
            other => println!("{other:?}\n"),
        }
    }
    Ok(())
}
