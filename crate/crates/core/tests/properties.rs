mod common;

use proptest::prelude::*;

use lattice_synth::decompose::decompose_two;
use lattice_synth::graph::LatticeDim;
use lattice_synth::mapper::{map_function, MapOutcome, MappingProblem, SearchBudget};
use lattice_synth::model::{
    absorb, equivalent, parse_function, prime_implicants, serialize_function, Literal, SopFunction,
    Term,
};
use lattice_synth::paths::{enumerate_paths, parse_paths, serialize_paths};
use lattice_synth::solver::{
    literal_range, parse_lattice, serialize_lattice, solve_lattice, LatticeAssignment,
};
use lattice_synth::synth::split_long_terms;

use common::{bfs_table, sop_table};

fn lattice(max_side: usize, vars: usize) -> impl Strategy<Value = LatticeAssignment> {
    let range = literal_range(vars).unwrap();
    (1..=max_side, 1..=max_side).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::sample::select(range.clone()), r * c).prop_map(
            move |codes| LatticeAssignment::new(LatticeDim::new(r, c).unwrap(), codes).unwrap(),
        )
    })
}

fn literal(vars: u16) -> impl Strategy<Value = Literal> {
    (0..vars, any::<bool>()).prop_map(|(v, neg)| {
        if neg {
            Literal::not(v)
        } else {
            Literal::var(v)
        }
    })
}

fn function(vars: u16, max_terms: usize, max_len: usize) -> impl Strategy<Value = SopFunction> {
    proptest::collection::vec(
        proptest::collection::vec(literal(vars), 1..=max_len),
        1..=max_terms,
    )
    .prop_map(|ts| {
        let codes = ts
            .into_iter()
            .map(|t| t.into_iter().map(|l| l.code() as u32).collect::<Vec<_>>());
        SopFunction::from_codes(codes).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solved_lattice_matches_connectivity(lat in lattice(4, 4)) {
        let f = solve_lattice(&lat);
        let vars = [0u16, 1, 2, 3];
        prop_assert_eq!(sop_table(&f, &vars), bfs_table(&lat, &vars));
    }

    #[test]
    fn solved_lattice_is_clean(lat in lattice(4, 5)) {
        let f = solve_lattice(&lat);
        let terms = f.terms();
        prop_assert_eq!(absorb(terms), terms.to_vec());
        for (i, a) in terms.iter().enumerate() {
            prop_assert!(a.literals().iter().all(|l| !l.is_const()));
            prop_assert!(a.literals().iter().all(|l| !a.contains(l.complement().unwrap())));
            for (j, b) in terms.iter().enumerate() {
                prop_assert!(i == j || !a.is_subset_of(b));
            }
        }
    }

    #[test]
    fn lattice_text_round_trips(lat in lattice(5, 6)) {
        prop_assert_eq!(parse_lattice(&serialize_lattice(&lat)).unwrap(), lat);
    }

    #[test]
    fn function_text_round_trips(f in function(8, 6, 5)) {
        prop_assert_eq!(parse_function(&serialize_function(&f)).unwrap(), f);
    }

    #[test]
    fn absorb_keeps_the_function(f in function(5, 8, 4)) {
        let raw: Vec<Term> = f.terms().to_vec();
        let once = absorb(&raw);
        prop_assert_eq!(absorb(&once), once.clone());
        prop_assert!(equivalent(&SopFunction::new(once), &f).unwrap());
    }

    #[test]
    fn primes_are_equivalent_and_prime(f in function(4, 6, 4)) {
        let p = prime_implicants(&f);
        prop_assert!(equivalent(&p, &f).unwrap());
        let vars = f.variables();
        let table = sop_table(&f, &vars);
        for t in p.terms() {
            // dropping any literal must leave the on-set
            for skip in 0..t.len() {
                let shorter = Term::from_literals(t.literals().iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &l)| l));
                let g = SopFunction::new(vec![shorter]);
                let gt = sop_table(&g, &vars);
                prop_assert!(gt.iter().zip(&table).any(|(&a, &b)| a && !b));
            }
        }
    }

    #[test]
    fn long_terms_split_and_expand(f in function(12, 3, 12), lb in 2usize..6) {
        let split = split_long_terms(&f, lb).unwrap();
        prop_assert!(split.terms.iter().all(|t| t.len() <= lb));
        let mut sorted = split.origin.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..f.len()).collect::<Vec<_>>());
        // substitute aux codes back, newest first
        let mut terms: Vec<Vec<Literal>> = split.terms.iter().map(|t| t.literals().to_vec()).collect();
        for def in split.aux_defs.iter().rev() {
            for t in &mut terms {
                if let Some(pos) = t.iter().position(|&l| l == def.code) {
                    t.remove(pos);
                    t.extend_from_slice(def.product.literals());
                }
            }
        }
        let back = SopFunction::new(terms.into_iter().map(Term::from_literals).collect());
        prop_assert!(equivalent(&back, &f).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn mapped_solutions_realize_the_function(lat in lattice(3, 4)) {
        // functions that some lattice of this size realizes must map back
        let f = solve_lattice(&lat);
        let out = map_function(&MappingProblem::new(f.clone(), lat.dim(), SearchBudget::unlimited())).unwrap();
        match out {
            MapOutcome::Solution(s) => prop_assert!(equivalent(&solve_lattice(&s.assignment), &f).unwrap()),
            other => prop_assert!(false, "no mapping for {}: {:?}", f.pretty(), other),
        }
    }

    #[test]
    fn decompositions_partition_and_cover(f in function(4, 5, 3)) {
        prop_assume!(f.len() >= 2);
        let d = LatticeDim::new(2, 2).unwrap();
        if let Some(r) = decompose_two(&f, d, SearchBudget::unlimited()).unwrap().found() {
            let mut all: Vec<usize> = r.sub_a.indices.iter().chain(&r.sub_b.indices).copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..f.len()).collect::<Vec<_>>());
            let or = solve_lattice(&r.sub_a.solution.assignment).or(&solve_lattice(&r.sub_b.solution.assignment));
            prop_assert!(equivalent(&or, &f).unwrap());
        }
    }
}

#[test]
fn paths_form_an_antichain_and_round_trip() {
    for r in 1..=5 {
        for c in 1..=5 {
            let d = LatticeDim::new(r, c).unwrap();
            let ps = enumerate_paths(d);
            let masks = ps.cell_sets();
            for (i, a) in masks.iter().enumerate() {
                for (j, b) in masks.iter().enumerate() {
                    assert!(i == j || a & b != *a, "{d}: path {i} inside path {j}");
                }
            }
            for p in ps.paths() {
                assert!(d.is_top(p.cells()[0]) && d.is_bottom(*p.cells().last().unwrap()));
            }
            assert_eq!(parse_paths(&serialize_paths(&ps)).unwrap(), ps);
        }
    }
}
