//! Prints the number of irredundant paths for every lattice from 2x2 to 7x7.

use std::time::Instant;

use lattice_synth::graph::LatticeDim;
use lattice_synth::paths::enumerate_paths;

fn main() {
    let start = Instant::now();
    print!("r/c");
    for c in 2..=7 {
        print!("\t{c}");
    }
    println!();
    for r in 2..=7 {
        print!("{r}");
        for c in 2..=7 {
            let dim = LatticeDim::new(r, c).expect("positive sides");
            print!("\t{}", enumerate_paths(dim).len());
        }
        println!();
    }
    eprintln!("elapsed: {:.2?}", start.elapsed());
}
