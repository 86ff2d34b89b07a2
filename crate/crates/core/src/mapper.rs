//! Placing a sum of products onto a lattice.
//!
//! Terms are examined one at a time. Each term is either housed on a path
//! (every cell of the path gets one of the term's literals or a constant 1,
//! and together they spell the term) or left out, in which case it has to
//! show up as a combination of other paths. Paths are tried shortest first.
//! Whenever a path becomes fully assigned its product must be cancelled or
//! imply the target, otherwise the branch is dead. At the end every
//! unassigned cell is set to 0 and the result is checked by truth table.
//!
//! Because leaving a term out is always one of the branches, one
//! examination order already covers every combination of housings. Other
//! orders are only tried when a placement cap cut the search short.
//!
//! If the given terms cannot be housed, the search is repeated once with
//! the prime implicants of the function as targets.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::LatticeDim;
use crate::model::{
    equivalent, normalize_term, prime_implicants, Literal, Normalized, SopFunction, Term,
    DEFAULT_ORACLE_BOUND,
};
use crate::paths::{enumerate_paths, PathSet};
use crate::solver::{solve_with_paths, LatticeAssignment};
use crate::truth::{TruthTable, Universe};

/// Limits on the search. `None` means unlimited.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_orders: Option<usize>,
    pub max_placements_per_term_path: Option<usize>,
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget::default()
    }

    pub fn is_unlimited(&self) -> bool {
        *self == SearchBudget::default()
    }
}

#[derive(Clone, Debug)]
pub struct MappingProblem {
    pub function: SopFunction,
    pub paths: PathSet,
    pub dim: LatticeDim,
    pub budget: SearchBudget,
}

impl MappingProblem {
    pub fn new(function: SopFunction, dim: LatticeDim, budget: SearchBudget) -> Self {
        MappingProblem {
            function,
            paths: enumerate_paths(dim),
            dim,
            budget,
        }
    }

    pub fn with_paths(function: SopFunction, paths: PathSet, budget: SearchBudget) -> Self {
        MappingProblem {
            function,
            dim: paths.dim(),
            paths,
            budget,
        }
    }
}

/// Per-cell assignment during the search.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellState {
    dim: LatticeDim,
    cells: Vec<Option<Literal>>,
}

impl CellState {
    pub fn new(dim: LatticeDim) -> Self {
        CellState {
            dim,
            cells: vec![None; dim.cells()],
        }
    }

    pub fn dim(&self) -> LatticeDim {
        self.dim
    }

    pub fn get(&self, cell: usize) -> Option<Literal> {
        self.cells[cell]
    }

    pub fn fix(&mut self, cell: usize, lit: Literal) {
        self.cells[cell] = Some(lit);
    }

    pub fn unassigned(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.cells.len()).filter(|&c| self.cells[c].is_none())
    }

    /// Every unassigned cell read as 0.
    pub fn zero_filled(&self) -> LatticeAssignment {
        let codes = self
            .cells
            .iter()
            .map(|c| c.unwrap_or(Literal::ZERO))
            .collect();
        LatticeAssignment::new(self.dim, codes).expect("cell count matches the dimension")
    }
}

impl From<&LatticeAssignment> for CellState {
    fn from(lat: &LatticeAssignment) -> Self {
        CellState {
            dim: lat.dim(),
            cells: lat.codes().iter().map(|&c| Some(c)).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EliminationReason {
    XXPrime,
    ZeroOnPath,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PathStatus {
    /// Still has unassigned cells.
    Dangling,
    /// Product equals the term with this index.
    MatchedTo(usize),
    Eliminated(EliminationReason),
    /// Product strictly contains the term with this index.
    AbsorbedBy(usize),
    /// Product implies the function without containing any single term.
    Contributing,
    /// Product does not imply the function.
    Stray,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PoiEvent {
    SavedEscapePath(usize),
    CoveredEscapeMultiOption(usize),
    PathSavedByXXPrime(usize),
    ZeroOnLatticeVar(usize),
    TermHiding(usize),
    PlacedByXXPrime(usize),
    ExaminationOrder(Vec<usize>),
}

impl fmt::Display for PoiEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoiEvent::SavedEscapePath(t) => write!(f, "Term {} saved escape path", t + 1),
            PoiEvent::CoveredEscapeMultiOption(t) => {
                write!(
                    f,
                    "Term {} covered escape path by picking multi options",
                    t + 1
                )
            }
            PoiEvent::PathSavedByXXPrime(p) => write!(f, "Path {} saved by xx'", p + 1),
            PoiEvent::ZeroOnLatticeVar(c) => write!(f, "Zero on lattice var {c}"),
            PoiEvent::TermHiding(t) => write!(f, "Term {} was present but hiding", t + 1),
            PoiEvent::PlacedByXXPrime(t) => write!(f, "Term {} was placed by xx'", t + 1),
            PoiEvent::ExaminationOrder(order) => {
                write!(f, "Term examination order")?;
                for i in order {
                    write!(f, " {}", i + 1)?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingSolution {
    pub assignment: LatticeAssignment,
    /// Examination order as 0-based term indices.
    pub order: Vec<usize>,
    pub poi: Vec<PoiEvent>,
    pub path_status: Vec<PathStatus>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapOutcome {
    Solution(MappingSolution),
    NoSolution,
    /// The budget ran out before the search was exhausted.
    Inconclusive,
}

impl MapOutcome {
    pub fn solution(&self) -> Option<&MappingSolution> {
        match self {
            MapOutcome::Solution(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_solution(&self) -> bool {
        matches!(self, MapOutcome::Solution(_))
    }
}

/// No placement of the term on the path exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conflict;

/// All fills of `path` that spell `term`, in enumeration order.
///
/// Each free cell takes a code from the term or 1, in ascending code order,
/// with the first path cell varying slowest. Fixed cells must already hold
/// such a code. Each returned vector covers every cell of the path.
pub fn placements(term: &Term, path: &[usize], state: &CellState) -> Vec<Vec<Literal>> {
    let options = options_for(term);
    let raw_path: Vec<u16> = path
        .iter()
        .map(|&c| state.get(c).map_or(UNASSIGNED, |l| l.code()))
        .collect();
    let mut out = Vec::new();
    let mut gen = PlacementGen::new(term, &options, &raw_path);
    gen.run(usize::MAX, &mut |fill| {
        out.push(fill.iter().map(|&c| lit_of(c)).collect());
    });
    out
}

/// First placement of `term` on `path`, applied to a copy of `state`.
pub fn house_term(
    term: &Term,
    path: &[usize],
    state: &CellState,
) -> std::result::Result<CellState, Conflict> {
    let fill = placements(term, path, state)
        .into_iter()
        .next()
        .ok_or(Conflict)?;
    let mut next = state.clone();
    for (&cell, lit) in path.iter().zip(fill) {
        next.fix(cell, lit);
    }
    Ok(next)
}

/// Status of every path under the current state, in path order.
pub fn eliminate_and_absorb(
    state: &CellState,
    paths: &PathSet,
    function: &SopFunction,
) -> Result<Vec<PathStatus>> {
    let universe = checked_universe(function)?;
    let table = universe.function_table(function);
    Ok(paths
        .paths()
        .iter()
        .map(|p| status_of(p.cells(), state, function, &universe, &table))
        .collect())
}

/// Sets every unassigned cell to 0 and checks the result against the
/// function. Returns the completed lattice and one event per zeroed cell.
pub fn fix_dangling(
    state: &CellState,
    paths: &PathSet,
    function: &SopFunction,
) -> Result<Option<(LatticeAssignment, Vec<PoiEvent>)>> {
    let events = state.unassigned().map(PoiEvent::ZeroOnLatticeVar).collect();
    let lat = state.zero_filled();
    if equivalent(&solve_with_paths(&lat, paths), function)? {
        Ok(Some((lat, events)))
    } else {
        Ok(None)
    }
}

pub fn map_function(problem: &MappingProblem) -> Result<MapOutcome> {
    let f = &problem.function;
    let universe = checked_universe(f)?;
    if f.is_zero() {
        let lat = CellState::new(problem.dim).zero_filled();
        return Ok(MapOutcome::Solution(report(problem, &lat, &[], &universe)));
    }
    let deadline = problem.budget.time_limit.map(|d| Instant::now() + d);
    let n = f.len();
    let mut primes: Option<Vec<Term>> = None;
    for (orders_tried, order) in (0..n).permutations(n).enumerate() {
        if problem.budget.max_orders.is_some_and(|m| orders_tried >= m) {
            return Ok(MapOutcome::Inconclusive);
        }
        let targets: Vec<Term> = order.iter().map(|&i| f.terms()[i].clone()).collect();
        let mut search = Search::new(problem, &universe, targets, deadline);
        if let Some(lat) = search.run() {
            return Ok(MapOutcome::Solution(report(
                problem, &lat, &order, &universe,
            )));
        }
        if search.timed_out {
            return Ok(MapOutcome::Inconclusive);
        }
        let mut truncated = search.truncated;
        if !truncated {
            let primes = primes.get_or_insert_with(|| prime_implicants(f).terms().to_vec());
            if primes.as_slice() != f.canonical().terms() {
                let mut search = Search::new(problem, &universe, primes.clone(), deadline);
                if let Some(lat) = search.run() {
                    return Ok(MapOutcome::Solution(report(
                        problem, &lat, &order, &universe,
                    )));
                }
                if search.timed_out {
                    return Ok(MapOutcome::Inconclusive);
                }
                truncated = search.truncated;
            }
        }
        if !truncated {
            return Ok(MapOutcome::NoSolution);
        }
    }
    Ok(MapOutcome::Inconclusive)
}

fn checked_universe(f: &SopFunction) -> Result<Universe> {
    let universe = Universe::of(&[f]);
    if universe.len() > DEFAULT_ORACLE_BOUND {
        return Err(Error::UniverseTooLarge {
            size: universe.len(),
            bound: DEFAULT_ORACLE_BOUND,
        });
    }
    Ok(universe)
}

const UNASSIGNED: u16 = u16::MAX;

fn lit_of(code: u16) -> Literal {
    Literal::new(code as u32).expect("search only stores valid codes")
}

/// Term literals plus 1, ascending by code.
fn options_for(term: &Term) -> Vec<u16> {
    let mut options: Vec<u16> = term.literals().iter().map(|l| l.code()).collect();
    options.push(Literal::ONE.code());
    options.sort_unstable();
    options
}

struct PlacementGen<'a> {
    options: &'a [u16],
    /// Index into the term's literals for each option, `None` for 1.
    option_bit: Vec<Option<usize>>,
    path: &'a [u16],
    /// Free cells at or after each position.
    free_after: Vec<usize>,
    full: u64,
    fill: Vec<u16>,
    count: usize,
    limit: usize,
    truncated: bool,
}

impl<'a> PlacementGen<'a> {
    fn new(term: &Term, options: &'a [u16], path: &'a [u16]) -> Self {
        let lits = term.literals();
        let option_bit = options
            .iter()
            .map(|&c| lits.iter().position(|l| l.code() == c))
            .collect();
        let mut free_after = vec![0; path.len() + 1];
        for i in (0..path.len()).rev() {
            free_after[i] = free_after[i + 1] + usize::from(path[i] == UNASSIGNED);
        }
        PlacementGen {
            options,
            option_bit,
            path,
            free_after,
            full: if lits.len() >= 64 {
                u64::MAX
            } else {
                (1u64 << lits.len()) - 1
            },
            fill: path.to_vec(),
            count: 0,
            limit: usize::MAX,
            truncated: false,
        }
    }

    fn run(&mut self, limit: usize, emit: &mut dyn FnMut(&[u16])) {
        if self.full == u64::MAX || self.path.len() < self.full.count_ones() as usize {
            return;
        }
        self.limit = limit;
        let mut covered = 0u64;
        for &code in self.path {
            if code == UNASSIGNED {
                continue;
            }
            match self.options.iter().position(|&o| o == code) {
                Some(k) => {
                    if let Some(bit) = self.option_bit[k] {
                        covered |= 1 << bit;
                    }
                }
                None => return,
            }
        }
        self.step(0, covered, emit);
    }

    fn step(&mut self, pos: usize, covered: u64, emit: &mut dyn FnMut(&[u16])) {
        if self.truncated {
            return;
        }
        let missing = (self.full & !covered).count_ones() as usize;
        if missing > self.free_after[pos] {
            return;
        }
        if pos == self.path.len() {
            if self.count == self.limit {
                self.truncated = true;
                return;
            }
            self.count += 1;
            emit(&self.fill);
            return;
        }
        if self.path[pos] != UNASSIGNED {
            self.step(pos + 1, covered, emit);
            return;
        }
        for k in 0..self.options.len() {
            self.fill[pos] = self.options[k];
            let bit = self.option_bit[k].map_or(0, |b| 1u64 << b);
            self.step(pos + 1, covered | bit, emit);
        }
        self.fill[pos] = UNASSIGNED;
    }
}

struct Search<'a> {
    problem: &'a MappingProblem,
    universe: &'a Universe,
    f_table: TruthTable,
    targets: Vec<Term>,
    paths: Vec<Vec<usize>>,
    cell_paths: Vec<Vec<usize>>,
    cells: Vec<u16>,
    open: Vec<usize>,
    product_cache: HashMap<Term, Option<TruthTable>>,
    memo: HashMap<Vec<u16>, usize>,
    deadline: Option<Instant>,
    nodes: u64,
    truncated: bool,
    timed_out: bool,
}

impl<'a> Search<'a> {
    fn new(
        problem: &'a MappingProblem,
        universe: &'a Universe,
        targets: Vec<Term>,
        deadline: Option<Instant>,
    ) -> Self {
        let dim = problem.dim;
        let paths: Vec<Vec<usize>> = problem
            .paths
            .paths()
            .iter()
            .map(|p| p.cells().to_vec())
            .collect();
        let mut cell_paths = vec![Vec::new(); dim.cells()];
        for (i, p) in paths.iter().enumerate() {
            for &c in p {
                cell_paths[c].push(i);
            }
        }
        Search {
            problem,
            universe,
            f_table: universe.function_table(&problem.function),
            targets,
            open: paths.iter().map(|p| p.len()).collect(),
            paths,
            cell_paths,
            cells: vec![UNASSIGNED; dim.cells()],
            product_cache: HashMap::new(),
            memo: HashMap::new(),
            deadline,
            nodes: 0,
            truncated: false,
            timed_out: false,
        }
    }

    fn run(&mut self) -> Option<LatticeAssignment> {
        if self.dfs(0) {
            let codes = self
                .cells
                .iter()
                .map(|&c| {
                    if c == UNASSIGNED {
                        Literal::ZERO
                    } else {
                        lit_of(c)
                    }
                })
                .collect();
            let lat = LatticeAssignment::new(self.problem.dim, codes).ok()?;
            debug_assert!(equivalent(
                &solve_with_paths(&lat, &self.problem.paths),
                &self.problem.function
            )
            .unwrap_or(false));
            Some(lat)
        } else {
            None
        }
    }

    fn out_of_time(&mut self) -> bool {
        self.nodes += 1;
        if self.timed_out {
            return true;
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        self.timed_out
    }

    /// Table of the normalized product of a fully assigned path, `None` when
    /// the path cancels.
    fn path_product(&mut self, path: usize) -> Option<Term> {
        let lits = self.paths[path].iter().map(|&c| lit_of(self.cells[c]));
        match normalize_term(lits) {
            Normalized::Product(t) => Some(t),
            Normalized::Cancelled => None,
        }
    }

    fn product_table(&mut self, t: Term) -> Option<TruthTable> {
        if let Some(cached) = self.product_cache.get(&t) {
            return cached.clone();
        }
        let table = self.universe.term_table(&t);
        let table = table.implies(&self.f_table).then_some(table);
        self.product_cache.insert(t, table.clone());
        table
    }

    /// False if a path that just became complete spells a non-implicant.
    fn closed_paths_ok(&mut self, touched: &[usize]) -> bool {
        for &cell in touched {
            for k in 0..self.cell_paths[cell].len() {
                let p = self.cell_paths[cell][k];
                if self.open[p] != 0 {
                    continue;
                }
                if let Some(t) = self.path_product(p) {
                    if self.product_table(t).is_none() {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn leaf(&mut self) -> bool {
        let mut table = self.universe.zero();
        for p in 0..self.paths.len() {
            if self.open[p] != 0 {
                continue;
            }
            if let Some(t) = self.path_product(p) {
                match self.product_table(t) {
                    Some(pt) => table.or_assign(&pt),
                    None => return false,
                }
            }
        }
        table == self.f_table
    }

    fn set(&mut self, cell: usize, code: u16) {
        self.cells[cell] = code;
        for &p in &self.cell_paths[cell] {
            self.open[p] -= 1;
        }
    }

    fn clear(&mut self, cell: usize) {
        self.cells[cell] = UNASSIGNED;
        for &p in &self.cell_paths[cell] {
            self.open[p] += 1;
        }
    }

    fn dfs(&mut self, depth: usize) -> bool {
        if self.out_of_time() {
            return false;
        }
        if depth == self.targets.len() {
            return self.leaf();
        }
        if self.memo.get(&self.cells).is_some_and(|&d| d <= depth) {
            return false;
        }
        let truncated_before = self.truncated;
        self.truncated = false;
        let term = self.targets[depth].clone();
        let options = options_for(&term);
        let limit = self
            .problem
            .budget
            .max_placements_per_term_path
            .unwrap_or(usize::MAX);
        for p in 0..self.paths.len() {
            let path_cells = self.paths[p].clone();
            let raw: Vec<u16> = path_cells.iter().map(|&c| self.cells[c]).collect();
            let mut fills: Vec<Vec<u16>> = Vec::new();
            let mut gen = PlacementGen::new(&term, &options, &raw);
            gen.run(limit, &mut |fill| fills.push(fill.to_vec()));
            if gen.truncated {
                self.truncated = true;
            }
            for fill in fills {
                let touched: Vec<usize> = path_cells
                    .iter()
                    .zip(&fill)
                    .filter(|(&c, _)| self.cells[c] == UNASSIGNED)
                    .map(|(&c, _)| c)
                    .collect();
                for (&c, &code) in path_cells.iter().zip(&fill) {
                    if self.cells[c] == UNASSIGNED {
                        self.set(c, code);
                    }
                }
                let found = self.closed_paths_ok(&touched) && self.dfs(depth + 1);
                if found {
                    return true;
                }
                for &c in &touched {
                    self.clear(c);
                }
                if self.timed_out {
                    return false;
                }
            }
        }
        if self.dfs(depth + 1) {
            return true;
        }
        if !self.truncated && !self.timed_out {
            let entry = self.memo.entry(self.cells.clone()).or_insert(depth);
            *entry = (*entry).min(depth);
        }
        self.truncated |= truncated_before;
        false
    }
}

fn status_of(
    path: &[usize],
    state: &CellState,
    function: &SopFunction,
    universe: &Universe,
    table: &TruthTable,
) -> PathStatus {
    let fixed: Vec<Literal> = path.iter().filter_map(|&c| state.get(c)).collect();
    if fixed.contains(&Literal::ZERO) {
        return PathStatus::Eliminated(EliminationReason::ZeroOnPath);
    }
    let product = match normalize_term(fixed) {
        Normalized::Cancelled => return PathStatus::Eliminated(EliminationReason::XXPrime),
        Normalized::Product(t) => t,
    };
    if path.iter().any(|&c| state.get(c).is_none()) {
        return PathStatus::Dangling;
    }
    let terms = function.terms();
    if let Some(i) = terms.iter().position(|t| *t == product) {
        return PathStatus::MatchedTo(i);
    }
    if let Some(i) = terms.iter().position(|t| t.is_subset_of(&product)) {
        return PathStatus::AbsorbedBy(i);
    }
    let implies = product.variables().all(|v| universe.contains(v))
        && universe.term_table(&product).implies(table);
    if implies {
        PathStatus::Contributing
    } else {
        PathStatus::Stray
    }
}

/// Builds the solution record for a completed lattice. Events are grouped
/// by kind; the examination order comes last.
fn report(
    problem: &MappingProblem,
    lat: &LatticeAssignment,
    order: &[usize],
    universe: &Universe,
) -> MappingSolution {
    let f = &problem.function;
    let table = universe.function_table(f);
    let state = CellState::from(lat);
    let status: Vec<PathStatus> = problem
        .paths
        .paths()
        .iter()
        .map(|p| status_of(p.cells(), &state, f, universe, &table))
        .collect();
    let mut poi = Vec::new();
    for t in 0..f.len() {
        let escapes = status
            .iter()
            .filter(|s| **s == PathStatus::AbsorbedBy(t))
            .count();
        match escapes {
            0 => {}
            1 => poi.push(PoiEvent::SavedEscapePath(t)),
            _ => poi.push(PoiEvent::CoveredEscapeMultiOption(t)),
        }
    }
    for (p, s) in status.iter().enumerate() {
        if *s == PathStatus::Eliminated(EliminationReason::XXPrime) {
            poi.push(PoiEvent::PathSavedByXXPrime(p));
        }
    }
    for (cell, &code) in lat.codes().iter().enumerate() {
        if code == Literal::ZERO {
            poi.push(PoiEvent::ZeroOnLatticeVar(cell));
        }
    }
    let products: Vec<Term> = solve_with_paths(lat, &problem.paths).terms().to_vec();
    for (t, term) in f.terms().iter().enumerate() {
        if status.contains(&PathStatus::MatchedTo(t)) {
            continue;
        }
        poi.push(PoiEvent::TermHiding(t));
        let split_by_pair = term_split_by_pair(term, &products);
        if split_by_pair {
            poi.push(PoiEvent::PlacedByXXPrime(t));
        }
    }
    poi.push(PoiEvent::ExaminationOrder(order.to_vec()));
    MappingSolution {
        assignment: lat.clone(),
        order: order.to_vec(),
        poi,
        path_status: status,
    }
}

/// True when the products contain `term·x` and `term·x'` for some letter x.
fn term_split_by_pair(term: &Term, products: &[Term]) -> bool {
    products.iter().any(|a| {
        a.len() == term.len() + 1
            && term.is_subset_of(a)
            && a.literals().iter().any(|&x| {
                !term.contains(x)
                    && x.complement().is_ok_and(|y| {
                        let mut lits: Vec<Literal> = term.literals().to_vec();
                        lits.push(y);
                        let b = Term::from_literals(lits);
                        products.contains(&b)
                    })
            })
    })
}
