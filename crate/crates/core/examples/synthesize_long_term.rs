//! Covers abcdefg + ab'e + a'cdf' with 3x3 lattices. The 7-literal term is
//! longer than any 3x3 path, so part of it moves to an auxiliary lattice.

use lattice_synth::graph::LatticeDim;
use lattice_synth::mapper::SearchBudget;
use lattice_synth::model::{equivalent, SopFunction};
use lattice_synth::synth::{expand_plan, synthesize, LatticeRole};

fn main() -> lattice_synth::Result<()> {
    let q = SopFunction::from_codes(vec![
        vec![0u32, 1, 2, 3, 4, 5, 6],
        vec![0, 999, 4],
        vec![1000, 2, 3, 995],
    ])?;
    let dim = LatticeDim::new(3, 3)?;
    let out = synthesize(&q, dim, SearchBudget::unlimited())?;
    let Some(plan) = out.plan() else {
        println!("inconclusive");
        return Ok(());
    };
    for def in &plan.aux_defs {
        println!("{} = {}", def.code.pretty(), def.product.pretty());
    }
    for (k, l) in plan.lattices.iter().enumerate() {
        match l.role {
            LatticeRole::Aux(code) => println!("\nlattice {} drives {}", k + 1, code.pretty()),
            LatticeRole::Cover => println!("\nlattice {} covers terms {:?}", k + 1, l.terms),
        }
        println!("{}", l.assignment.pretty());
    }
    println!(
        "\n{} lattices, expansion equals q: {}",
        plan.lattices.len(),
        equivalent(&expand_plan(plan)?, &q)?
    );
    Ok(())
}
