//! Splitting a function into two parts that each fit one lattice.
//!
//! Pair sizes are tried from the most lopsided, (n-1, 1), down to the even
//! split. For each size every subset of terms is tried in lexicographic
//! index order; the first subset whose part and complement both map wins.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::LatticeDim;
use crate::mapper::{map_function, MapOutcome, MappingProblem, MappingSolution, SearchBudget};
use crate::model::SopFunction;
use crate::paths::{enumerate_paths, PathSet};

/// Pair sizes `(a, b)` with `a >= b` and `a + b = n`, most lopsided first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitSchedule {
    pub n: usize,
    pub pairs: Vec<(usize, usize)>,
}

pub fn split_schedule(n: usize) -> Result<SplitSchedule> {
    if n < 2 {
        return Err(Error::TooFewTerms(n));
    }
    let pairs = (n.div_ceil(2)..n).rev().map(|a| (a, n - a)).collect();
    Ok(SplitSchedule { n, pairs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubFunction {
    /// Indices into the original term list, ascending.
    pub indices: Vec<usize>,
    pub function: SopFunction,
    pub solution: MappingSolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionResult {
    pub pair: (usize, usize),
    pub sub_a: SubFunction,
    pub sub_b: SubFunction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeOutcome {
    Found(Box<DecompositionResult>),
    NoSolution,
    Inconclusive,
}

impl DecomposeOutcome {
    pub fn found(&self) -> Option<&DecompositionResult> {
        match self {
            DecomposeOutcome::Found(r) => Some(r),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DecomposeOptions {
    /// Stop after the pair whose larger part has this size.
    pub stop_at: Option<usize>,
    /// Try only these pairs (still in schedule order).
    pub only_pairs: Option<Vec<(usize, usize)>>,
}

pub fn decompose_two(
    f: &SopFunction,
    dim: LatticeDim,
    budget: SearchBudget,
) -> Result<DecomposeOutcome> {
    decompose_with(
        f,
        &enumerate_paths(dim),
        budget,
        &DecomposeOptions::default(),
    )
}

pub fn decompose_with(
    f: &SopFunction,
    paths: &PathSet,
    budget: SearchBudget,
    options: &DecomposeOptions,
) -> Result<DecomposeOutcome> {
    let n = f.len();
    if n > 32 {
        return Err(Error::SizeGuard(format!(
            "{n} terms exceed the 32-term subset limit"
        )));
    }
    let schedule = split_schedule(n)?;
    let memo: Mutex<HashMap<u32, MapOutcome>> = Mutex::new(HashMap::new());
    let poisoned = AtomicBool::new(false);
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    let verdict = |indices: &[usize]| -> Option<MapOutcome> {
        let mask = indices.iter().fold(0u32, |m, &i| m | 1 << i);
        if let Some(v) = memo.lock().expect("memo lock").get(&mask) {
            return Some(v.clone());
        }
        let problem = MappingProblem::with_paths(f.select(indices), paths.clone(), budget);
        match map_function(&problem) {
            Ok(out) => {
                memo.lock().expect("memo lock").insert(mask, out.clone());
                Some(out)
            }
            Err(e) => {
                failure.lock().expect("error lock").get_or_insert(e);
                None
            }
        }
    };

    for &(a, b) in &schedule.pairs {
        if let Some(only) = &options.only_pairs {
            if !only.contains(&(a, b)) {
                continue;
            }
        }
        let subsets: Vec<Vec<usize>> = (0..n)
            .combinations(a)
            // an even split would otherwise visit every pair twice
            .filter(|s| a != b || s[0] == 0)
            .collect();
        let hit = subsets.par_iter().find_map_first(|part| {
            let rest: Vec<usize> = (0..n).filter(|i| !part.contains(i)).collect();
            let sol_a = match verdict(part)? {
                MapOutcome::Solution(s) => s,
                MapOutcome::NoSolution => return None,
                MapOutcome::Inconclusive => {
                    poisoned.store(true, Ordering::Relaxed);
                    return None;
                }
            };
            let sol_b = match verdict(&rest)? {
                MapOutcome::Solution(s) => s,
                MapOutcome::NoSolution => return None,
                MapOutcome::Inconclusive => {
                    poisoned.store(true, Ordering::Relaxed);
                    return None;
                }
            };
            Some(DecompositionResult {
                pair: (a, b),
                sub_a: SubFunction {
                    function: f.select(part),
                    indices: part.clone(),
                    solution: sol_a,
                },
                sub_b: SubFunction {
                    function: f.select(&rest),
                    indices: rest,
                    solution: sol_b,
                },
            })
        });
        if let Some(e) = failure.lock().expect("error lock").take() {
            return Err(e);
        }
        if let Some(result) = hit {
            return Ok(DecomposeOutcome::Found(Box::new(result)));
        }
        if options.stop_at == Some(a) {
            break;
        }
    }
    if poisoned.load(Ordering::Relaxed) {
        Ok(DecomposeOutcome::Inconclusive)
    } else {
        Ok(DecomposeOutcome::NoSolution)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{equivalent, parse_function};
    use crate::solver::solve_lattice;

    #[test]
    fn schedules() {
        assert_eq!(
            split_schedule(8).unwrap().pairs,
            vec![(7, 1), (6, 2), (5, 3), (4, 4)]
        );
        assert_eq!(
            split_schedule(9).unwrap().pairs,
            vec![(8, 1), (7, 2), (6, 3), (5, 4)]
        );
        assert_eq!(split_schedule(2).unwrap().pairs, vec![(1, 1)]);
        assert_eq!(split_schedule(1), Err(Error::TooFewTerms(1)));
        for n in 2..20 {
            let s = split_schedule(n).unwrap();
            assert_eq!(s.pairs[0], (n - 1, 1));
            assert_eq!(*s.pairs.last().unwrap(), (n.div_ceil(2), n / 2));
            assert!(s.pairs.iter().all(|&(a, b)| a + b == n && a >= b));
        }
    }

    #[test]
    fn splits_disjoint_single_letters() {
        // a 2x2 lattice has two disjoint columns
        let f = parse_function("3\n1 0\n1 1\n1 2").unwrap();
        let d = LatticeDim::new(2, 2).unwrap();
        let out = decompose_two(&f, d, SearchBudget::unlimited()).unwrap();
        let r = out.found().expect("a + b on one lattice, c on the other");
        assert_eq!(r.pair, (2, 1));
        assert_eq!(r.sub_a.indices, vec![0, 1]);
        assert_eq!(r.sub_b.indices, vec![2]);
        let or = solve_lattice(&r.sub_a.solution.assignment)
            .or(&solve_lattice(&r.sub_b.solution.assignment));
        assert!(equivalent(&or, &f).unwrap());
    }

    #[test]
    fn negative_and_restricted() {
        let f = parse_function("5\n1 0\n1 1\n1 2\n1 3\n1 4").unwrap();
        let d = LatticeDim::new(2, 2).unwrap();
        assert_eq!(
            decompose_two(&f, d, SearchBudget::unlimited()).unwrap(),
            DecomposeOutcome::NoSolution
        );
        let f = parse_function("4\n1 0\n1 1\n1 2\n1 3").unwrap();
        let only = DecomposeOptions {
            stop_at: None,
            only_pairs: Some(vec![(3, 1)]),
        };
        let out =
            decompose_with(&f, &enumerate_paths(d), SearchBudget::unlimited(), &only).unwrap();
        assert_eq!(out, DecomposeOutcome::NoSolution);
        let out = decompose_two(&f, d, SearchBudget::unlimited()).unwrap();
        assert_eq!(out.found().unwrap().pair, (2, 2));
        let early = DecomposeOptions {
            stop_at: Some(3),
            only_pairs: None,
        };
        let out =
            decompose_with(&f, &enumerate_paths(d), SearchBudget::unlimited(), &early).unwrap();
        assert_eq!(out, DecomposeOutcome::NoSolution);
    }
}
