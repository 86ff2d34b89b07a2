//! Draws random 3x3 lattices over five letters and maps each solved
//! function back onto a fresh lattice.

use lattice_synth::graph::LatticeDim;
use lattice_synth::mapper::{map_function, MappingProblem, SearchBudget};
use lattice_synth::model::equivalent;
use lattice_synth::solver::{generate_library, solve_lattice};

fn main() -> lattice_synth::Result<()> {
    let dim = LatticeDim::new(3, 3)?;
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let library = generate_library(dim, 5, 10, seed)?;
    for entry in &library {
        let problem = MappingProblem::new(entry.function.clone(), dim, SearchBudget::unlimited());
        let back = map_function(&problem)?;
        let ok = match back.solution() {
            Some(s) => equivalent(&solve_lattice(&s.assignment), &entry.function)?,
            None => false,
        };
        println!(
            "trial {:2}  {:>2} terms  round trip {}  {}",
            entry.seed_info.trial,
            entry.function.len(),
            if ok { "ok" } else { "FAILED" },
            entry.function.pretty()
        );
    }
    Ok(())
}
