//! Covering a function with several lattices of one size.
//!
//! Terms longer than the longest path are cut into auxiliary products first;
//! each auxiliary product gets a lattice of its own and its output drives
//! the cells labelled with its code. The remaining terms are then placed by
//! trying one lattice, then a split into two, then halving the term list
//! and working through the halves.

use crate::decompose::{decompose_with, DecomposeOptions, DecomposeOutcome};
use crate::error::{Error, Result};
use crate::graph::LatticeDim;
use crate::mapper::{map_function, MapOutcome, MappingProblem, MappingSolution, SearchBudget};
use crate::model::{normalize_term, Literal, SopFunction, Term, FIRST_AUX, LAST_AUX};
use crate::paths::{enumerate_paths, longest_path_len, PathSet};
use crate::solver::{solve_with_paths, LatticeAssignment};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxDefinition {
    pub code: Literal,
    pub product: Term,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeRole {
    /// Realizes the auxiliary variable with this code.
    Aux(Literal),
    /// Contributes to the function output.
    Cover,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanLattice {
    pub role: LatticeRole,
    pub assignment: LatticeAssignment,
    /// Original term indices placed here, ascending. Empty for aux lattices.
    pub terms: Vec<usize>,
    pub solution: MappingSolution,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisPlan {
    pub dim: LatticeDim,
    pub lattices: Vec<PlanLattice>,
    pub aux_defs: Vec<AuxDefinition>,
}

impl SynthesisPlan {
    pub fn cover_count(&self) -> usize {
        self.lattices
            .iter()
            .filter(|l| l.role == LatticeRole::Cover)
            .count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SynthOutcome {
    Plan(SynthesisPlan),
    Inconclusive,
}

impl SynthOutcome {
    pub fn plan(&self) -> Option<&SynthesisPlan> {
        match self {
            SynthOutcome::Plan(p) => Some(p),
            SynthOutcome::Inconclusive => None,
        }
    }
}

/// Result of cutting long terms: the working terms, for each working term
/// the index of the original term it stands for, and the aux definitions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitTerms {
    pub terms: Vec<Term>,
    pub origin: Vec<usize>,
    pub aux_defs: Vec<AuxDefinition>,
}

impl SplitTerms {
    pub fn function(&self) -> SopFunction {
        SopFunction::new(self.terms.clone())
    }
}

/// Sorts terms by length (stable) and cuts every term longer than `lb`.
///
/// A long term gives up its first `lb` literals, original literals before
/// aux codes and otherwise in code order, to a fresh aux code. This repeats
/// until the term fits.
pub fn split_long_terms(f: &SopFunction, lb: usize) -> Result<SplitTerms> {
    split_from(f, lb, FIRST_AUX)
}

fn split_from(f: &SopFunction, lb: usize, first_aux: u16) -> Result<SplitTerms> {
    if lb < 2 {
        return Err(Error::ChunkTooShort(lb));
    }
    let mut order: Vec<usize> = (0..f.len()).collect();
    order.sort_by_key(|&i| f.terms()[i].len());
    let mut next_aux = first_aux;
    let mut aux_defs = Vec::new();
    let mut terms = Vec::new();
    for &i in &order {
        let mut lits = f.terms()[i].literals().to_vec();
        while lits.len() > lb {
            lits.sort_by_key(|l| (l.is_aux(), l.code()));
            if next_aux > LAST_AUX {
                return Err(Error::AuxExhausted);
            }
            let code = Literal::new(next_aux as u32)?;
            next_aux += 1;
            let chunk: Vec<Literal> = lits.drain(..lb).collect();
            aux_defs.push(AuxDefinition {
                code,
                product: Term::from_literals(chunk),
            });
            lits.push(code);
        }
        terms.push(Term::from_literals(lits));
    }
    Ok(SplitTerms {
        terms,
        origin: order,
        aux_defs,
    })
}

pub fn synthesize(f: &SopFunction, dim: LatticeDim, budget: SearchBudget) -> Result<SynthOutcome> {
    let paths = enumerate_paths(dim);
    let split = split_long_terms(f, longest_path_len(&paths))?;
    let mut ctx = Ctx {
        paths: &paths,
        budget,
        split: &split,
        lattices: Vec::new(),
    };
    for def in &split.aux_defs {
        let one = SopFunction::new(vec![def.product.clone()]);
        match ctx.map(&one)? {
            MapOutcome::Solution(s) => ctx.lattices.push(PlanLattice {
                role: LatticeRole::Aux(def.code),
                assignment: s.assignment.clone(),
                terms: Vec::new(),
                solution: s,
            }),
            MapOutcome::NoSolution => return Err(Error::Unmappable(def.product.pretty())),
            MapOutcome::Inconclusive => return Ok(SynthOutcome::Inconclusive),
        }
    }
    let all: Vec<usize> = (0..split.terms.len()).collect();
    if !ctx.cover(all)? {
        return Ok(SynthOutcome::Inconclusive);
    }
    Ok(SynthOutcome::Plan(SynthesisPlan {
        dim,
        lattices: ctx.lattices,
        aux_defs: split.aux_defs.clone(),
    }))
}

/// Two-way split of working terms: larger part first.
enum Pair {
    Found(Box<(Vec<usize>, MappingSolution, Vec<usize>, MappingSolution)>),
    NoSolution,
    Inconclusive,
}

struct Ctx<'a> {
    paths: &'a PathSet,
    budget: SearchBudget,
    split: &'a SplitTerms,
    lattices: Vec<PlanLattice>,
}

impl Ctx<'_> {
    fn map(&self, f: &SopFunction) -> Result<MapOutcome> {
        map_function(&MappingProblem::with_paths(
            f.clone(),
            self.paths.clone(),
            self.budget,
        ))
    }

    fn function_of(&self, working: &[usize]) -> SopFunction {
        SopFunction::new(
            working
                .iter()
                .map(|&i| self.split.terms[i].clone())
                .collect(),
        )
    }

    fn push(&mut self, working: &[usize], solution: MappingSolution) {
        let mut terms: Vec<usize> = working.iter().map(|&i| self.split.origin[i]).collect();
        terms.sort_unstable();
        self.lattices.push(PlanLattice {
            role: LatticeRole::Cover,
            assignment: solution.assignment.clone(),
            terms,
            solution,
        });
    }

    /// Returns false when some inner search ran out of budget.
    fn cover(&mut self, mut remaining: Vec<usize>) -> Result<bool> {
        while !remaining.is_empty() {
            match self.map(&self.function_of(&remaining))? {
                MapOutcome::Solution(s) => {
                    self.push(&remaining, s);
                    return Ok(true);
                }
                MapOutcome::Inconclusive => return Ok(false),
                MapOutcome::NoSolution => {}
            }
            if remaining.len() == 1 {
                let t = &self.split.terms[remaining[0]];
                return Err(Error::Unmappable(t.pretty()));
            }
            match self.decompose(&remaining)? {
                Pair::Found(found) => {
                    let (a, sa, b, sb) = *found;
                    self.push(&a, sa);
                    self.push(&b, sb);
                    return Ok(true);
                }
                Pair::Inconclusive => return Ok(false),
                Pair::NoSolution => {}
            }
            let half = remaining.len().div_ceil(2);
            let second = remaining.split_off(half);
            let first = remaining;
            match self.map(&self.function_of(&first))? {
                MapOutcome::Solution(s) => {
                    self.push(&first, s);
                    remaining = second;
                    continue;
                }
                MapOutcome::Inconclusive => return Ok(false),
                MapOutcome::NoSolution => {}
            }
            match self.decompose(&first)? {
                Pair::Found(found) => {
                    let (a, sa, b, _) = *found;
                    self.push(&a, sa);
                    remaining = b;
                    remaining.extend(second);
                }
                Pair::Inconclusive => return Ok(false),
                Pair::NoSolution => {
                    if !self.cover(first)? {
                        return Ok(false);
                    }
                    remaining = second;
                }
            }
        }
        Ok(true)
    }

    fn decompose(&self, working: &[usize]) -> Result<Pair> {
        if working.len() < 2 {
            return Ok(Pair::NoSolution);
        }
        let f = self.function_of(working);
        // absorption inside the working list never happens after splitting,
        // so indices of `f` line up with `working`
        debug_assert_eq!(f.len(), working.len());
        let out = decompose_with(&f, self.paths, self.budget, &DecomposeOptions::default())?;
        Ok(match out {
            DecomposeOutcome::Found(r) => {
                let r = *r;
                let pick = |idx: &[usize]| idx.iter().map(|&k| working[k]).collect::<Vec<_>>();
                Pair::Found(Box::new((
                    pick(&r.sub_a.indices),
                    r.sub_a.solution,
                    pick(&r.sub_b.indices),
                    r.sub_b.solution,
                )))
            }
            DecomposeOutcome::NoSolution => Pair::NoSolution,
            DecomposeOutcome::Inconclusive => Pair::Inconclusive,
        })
    }
}

/// OR of the cover lattices with every aux code replaced by its product.
pub fn expand_plan(plan: &SynthesisPlan) -> Result<SopFunction> {
    let paths = enumerate_paths(plan.dim);
    let mut terms = Vec::new();
    for l in plan
        .lattices
        .iter()
        .filter(|l| l.role == LatticeRole::Cover)
    {
        terms.extend(
            solve_with_paths(&l.assignment, &paths)
                .terms()
                .iter()
                .cloned(),
        );
    }
    let mut f = SopFunction::new(terms);
    // later aux codes may refer to earlier ones, so substitute newest first
    for def in plan.aux_defs.iter().rev() {
        f = substitute(&f, def);
    }
    if let Some(code) = f
        .terms()
        .iter()
        .flat_map(|t| t.literals())
        .find(|l| l.is_aux())
    {
        return Err(Error::DanglingAux(code.code()));
    }
    Ok(f)
}

fn substitute(f: &SopFunction, def: &AuxDefinition) -> SopFunction {
    let terms = f
        .terms()
        .iter()
        .filter_map(|t| {
            let lits = t.literals().iter().flat_map(|&l| {
                if l == def.code {
                    def.product.literals().to_vec()
                } else {
                    vec![l]
                }
            });
            normalize_term(lits).product()
        })
        .collect();
    SopFunction::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{equivalent, parse_function};

    fn term(codes: &[u32]) -> Term {
        Term::from_literals(codes.iter().map(|&c| Literal::new(c).unwrap()))
    }

    #[test]
    fn chunking_example() {
        // abcdefg + ab'e + a'cdf'
        let q = SopFunction::new(vec![
            term(&[0, 1, 2, 3, 4, 5, 6]),
            term(&[0, 999, 4]),
            term(&[1000, 2, 3, 995]),
        ]);
        let s = split_long_terms(&q, 5).unwrap();
        assert_eq!(s.aux_defs.len(), 1);
        assert_eq!(s.aux_defs[0].code.code(), 26);
        assert_eq!(s.aux_defs[0].product, term(&[0, 1, 2, 3, 4]));
        assert_eq!(
            s.terms,
            vec![
                term(&[0, 999, 4]),
                term(&[1000, 2, 3, 995]),
                term(&[5, 6, 26])
            ]
        );
        assert_eq!(s.origin, vec![1, 2, 0]);
    }

    #[test]
    fn chunking_identity_and_errors() {
        let f = parse_function("2\n2 0 1\n1 2").unwrap();
        let s = split_long_terms(&f, 5).unwrap();
        assert!(s.aux_defs.is_empty());
        assert_eq!(s.terms, vec![term(&[2]), term(&[0, 1])]);
        assert_eq!(split_long_terms(&f, 1), Err(Error::ChunkTooShort(1)));
    }

    #[test]
    fn twelve_literals_chain() {
        let codes: Vec<u32> = (0..12).collect();
        let f = SopFunction::new(vec![term(&codes)]);
        let s = split_long_terms(&f, 5).unwrap();
        assert_eq!(s.aux_defs.len(), 2);
        assert_eq!(s.aux_defs[1].product, term(&[5, 6, 7, 8, 9]));
        assert_eq!(s.terms, vec![term(&[10, 11, 26, 27])]);
        let mut g = s.function();
        for def in s.aux_defs.iter().rev() {
            g = substitute(&g, def);
        }
        assert!(equivalent(&g, &f).unwrap());
    }

    #[test]
    fn aux_codes_run_out() {
        let codes: Vec<u32> = (0..25).collect();
        let f = SopFunction::new(vec![term(&codes)]);
        assert!(split_from(&f, 2, 95).is_err());
        assert!(split_from(&f, 2, 26).is_ok());
    }

    #[test]
    fn dangling_aux_is_an_error() {
        let d = LatticeDim::new(2, 2).unwrap();
        let lat = LatticeAssignment::from_codes(d, &[26, 100, 101, 100]).unwrap();
        let sol = map_function(&MappingProblem::new(
            parse_function("1\n1 0").unwrap(),
            d,
            SearchBudget::unlimited(),
        ))
        .unwrap()
        .solution()
        .unwrap()
        .clone();
        let plan = SynthesisPlan {
            dim: d,
            lattices: vec![PlanLattice {
                role: LatticeRole::Cover,
                assignment: lat,
                terms: vec![0],
                solution: sol,
            }],
            aux_defs: Vec::new(),
        };
        assert_eq!(expand_plan(&plan), Err(Error::DanglingAux(26)));
    }

    #[test]
    fn single_lattice_when_it_fits() {
        let f = parse_function("3\n2 997 999\n4 997 5 4 998\n2 1000 5").unwrap();
        let d = LatticeDim::new(3, 3).unwrap();
        let plan = synthesize(&f, d, SearchBudget::unlimited()).unwrap();
        let plan = plan.plan().unwrap();
        assert_eq!(plan.lattices.len(), 1);
        assert_eq!(plan.lattices[0].terms, vec![0, 1, 2]);
        assert!(equivalent(&expand_plan(plan).unwrap(), &f).unwrap());
    }

    #[test]
    fn letters_on_two_by_two() {
        // two letters per lattice at most
        let f = parse_function("5\n1 0\n1 1\n1 2\n1 3\n1 4").unwrap();
        let d = LatticeDim::new(2, 2).unwrap();
        let plan = synthesize(&f, d, SearchBudget::unlimited()).unwrap();
        let plan = plan.plan().unwrap();
        assert_eq!(plan.lattices.len(), 3);
        let mut seen: Vec<usize> = plan.lattices.iter().flat_map(|l| l.terms.clone()).collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![0, 1, 2, 3, 4]);
        assert!(equivalent(&expand_plan(plan).unwrap(), &f).unwrap());
    }
}
