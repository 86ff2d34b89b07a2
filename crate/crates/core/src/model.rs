//! Literal codes, product terms and sum-of-products functions.
//!
//! Literals use a flat integer encoding shared by every file format in this
//! crate:
//!
//! | code          | meaning                                   |
//! |---------------|-------------------------------------------|
//! | `0..=25`      | variable `a`..`z`                         |
//! | `26..=99`     | auxiliary variable `x1`, `x2`, ...        |
//! | `100`         | constant 0                                |
//! | `101`         | constant 1                                |
//! | `975..=1000`  | complement of variable `v`, i.e. `1000-v` |
//!
//! A [`Term`] is a set of non-constant literals and a [`SopFunction`] is an
//! ordered list of terms kept free of duplicates and of absorbed supersets.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{parse_err, Error, Result};
use crate::truth::Universe;

/// Largest code of a letter variable (`z`).
pub const MAX_LETTER: u16 = 25;
/// First code reserved for auxiliary variables.
pub const FIRST_AUX: u16 = 26;
/// Last code usable for auxiliary variables.
pub const LAST_AUX: u16 = 99;
/// Default bound on the number of variables the truth-table oracle accepts.
pub const DEFAULT_ORACLE_BOUND: usize = 20;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u16);

impl Literal {
    pub const ZERO: Literal = Literal(100);
    pub const ONE: Literal = Literal(101);

    pub fn new(code: u32) -> Result<Self> {
        let ok = code <= u32::from(LAST_AUX)
            || code == 100
            || code == 101
            || (1000 - u32::from(MAX_LETTER)..=1000).contains(&code);
        if ok {
            Ok(Literal(code as u16))
        } else {
            Err(Error::InvalidCode(code))
        }
    }

    /// Positive literal of variable `var` (letter or auxiliary).
    pub fn var(var: u16) -> Self {
        assert!(var <= LAST_AUX, "variable index {var} out of range");
        Literal(var)
    }

    /// Complemented literal of a letter variable.
    pub fn not(var: u16) -> Self {
        assert!(var <= MAX_LETTER, "only letter variables have complements");
        Literal(1000 - var)
    }

    pub fn code(self) -> u16 {
        self.0
    }

    pub fn is_const(self) -> bool {
        self.0 == 100 || self.0 == 101
    }

    pub fn is_complement(self) -> bool {
        self.0 > 101
    }

    pub fn is_aux(self) -> bool {
        (FIRST_AUX..=LAST_AUX).contains(&self.0)
    }

    /// Variable index this literal reads, `None` for constants.
    pub fn variable(self) -> Option<u16> {
        match self.0 {
            100 | 101 => None,
            c if c > 101 => Some(1000 - c),
            c => Some(c),
        }
    }

    pub fn complement(self) -> Result<Literal> {
        if self.is_const() {
            Err(Error::ConstantComplement)
        } else if self.is_aux() {
            Err(Error::AuxComplement(self.0))
        } else {
            Ok(Literal(1000 - self.0))
        }
    }

    /// Value of the literal when its variable is `value`.
    pub fn eval(self, value: bool) -> bool {
        if self.is_complement() {
            !value
        } else {
            value
        }
    }

    /// Human-readable name: `a`, `b'`, `x1`, `0`, `1`.
    pub fn pretty(self) -> String {
        match self.0 {
            100 => "0".to_string(),
            101 => "1".to_string(),
            c if c <= MAX_LETTER => char::from(b'a' + c as u8).to_string(),
            c if c <= LAST_AUX => format!("x{}", c - MAX_LETTER),
            c => format!("{}'", char::from(b'a' + (1000 - c) as u8)),
        }
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn complement(code: Literal) -> Result<Literal> {
    code.complement()
}

/// A product of literals, stored sorted and duplicate free. The empty term
/// is the constant-1 product.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Term {
    lits: Vec<Literal>,
}

/// Outcome of normalizing a raw literal sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Normalized {
    Product(Term),
    Cancelled,
}

impl Normalized {
    pub fn product(self) -> Option<Term> {
        match self {
            Normalized::Product(t) => Some(t),
            Normalized::Cancelled => None,
        }
    }
}

/// Collapses repeats, drops constant 1, and cancels on constant 0 or on a
/// literal together with its complement.
pub fn normalize_term<I: IntoIterator<Item = Literal>>(codes: I) -> Normalized {
    let mut lits: Vec<Literal> = Vec::new();
    for lit in codes {
        if lit == Literal::ZERO {
            return Normalized::Cancelled;
        }
        if lit != Literal::ONE {
            lits.push(lit);
        }
    }
    lits.sort_unstable();
    lits.dedup();
    // complements sort after positives; a clash means both v and 1000-v are present
    for lit in &lits {
        if lit.is_complement() && lits.binary_search(&Literal(1000 - lit.0)).is_ok() {
            return Normalized::Cancelled;
        }
    }
    Normalized::Product(Term { lits })
}

impl Term {
    /// Builds a term from literals that are already known to be consistent.
    /// Panics on constants or complementary pairs.
    pub fn from_literals<I: IntoIterator<Item = Literal>>(lits: I) -> Term {
        let lits: Vec<Literal> = lits.into_iter().collect();
        assert!(lits.iter().all(|l| !l.is_const()), "constant in term");
        match normalize_term(lits) {
            Normalized::Product(t) => t,
            Normalized::Cancelled => panic!("contradictory term"),
        }
    }

    pub fn one() -> Term {
        Term::default()
    }

    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.lits.binary_search(&lit).is_ok()
    }

    /// True when every literal of `self` also occurs in `other`.
    pub fn is_subset_of(&self, other: &Term) -> bool {
        if self.lits.len() > other.lits.len() {
            return false;
        }
        let mut it = other.lits.iter();
        'outer: for lit in &self.lits {
            for o in it.by_ref() {
                if o == lit {
                    continue 'outer;
                }
                if o > lit {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn variables(&self) -> impl Iterator<Item = u16> + '_ {
        self.lits.iter().filter_map(|l| l.variable())
    }

    pub fn eval(&self, assignment: &TruthAssignment) -> Result<bool> {
        for lit in &self.lits {
            let var = lit.variable().expect("terms hold no constants");
            let value = assignment.get(var).ok_or(Error::MissingVariable(var))?;
            if !lit.eval(value) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn pretty(&self) -> String {
        if self.lits.is_empty() {
            return "1".to_string();
        }
        self.lits
            .iter()
            .map(|l| l.pretty())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.pretty())
    }
}

/// Removes duplicates and every term that contains another term, keeping
/// the first occurrence order of the survivors.
pub fn absorb(terms: &[Term]) -> Vec<Term> {
    let mut keep = vec![true; terms.len()];
    for i in 0..terms.len() {
        for j in 0..terms.len() {
            if i == j || !keep[j] {
                continue;
            }
            let (a, b) = (&terms[j], &terms[i]);
            // j absorbs i if j is a proper subset, or an equal earlier term
            if a.is_subset_of(b) && (a.len() < b.len() || j < i) {
                keep[i] = false;
                break;
            }
        }
    }
    terms
        .iter()
        .zip(keep)
        .filter(|&(_, k)| k)
        .map(|(t, _)| t.clone())
        .collect()
}

/// Consensus of two terms that clash in exactly one variable.
pub fn consensus(a: &Term, b: &Term) -> Option<Term> {
    let mut clash = None;
    for lit in &a.lits {
        if lit.is_const() || lit.is_aux() {
            continue;
        }
        let other = Literal(1000 - lit.0);
        if b.contains(other) {
            if clash.is_some() {
                return None;
            }
            clash = Some((*lit, other));
        }
    }
    let (x, y) = clash?;
    let lits = a
        .lits
        .iter()
        .chain(&b.lits)
        .copied()
        .filter(|&l| l != x && l != y);
    normalize_term(lits).product()
}

/// All prime implicants (the Blake canonical form), by iterated consensus
/// and absorption. Returned in canonical order.
pub fn prime_implicants(f: &SopFunction) -> SopFunction {
    let mut terms = absorb(&f.terms);
    loop {
        let mut fresh = Vec::new();
        for i in 0..terms.len() {
            for j in i + 1..terms.len() {
                if let Some(c) = consensus(&terms[i], &terms[j]) {
                    let covered = terms
                        .iter()
                        .chain(&fresh)
                        .any(|t: &Term| t.is_subset_of(&c));
                    if !covered {
                        fresh.push(c);
                    }
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        terms.extend(fresh);
        terms = absorb(&terms);
    }
    SopFunction::new(terms).canonical()
}

/// A sum of products. The empty list is constant 0 and the single empty
/// term is constant 1.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SopFunction {
    terms: Vec<Term>,
}

impl SopFunction {
    /// Absorbs the given terms, keeping their order.
    pub fn new(terms: Vec<Term>) -> Self {
        SopFunction {
            terms: absorb(&terms),
        }
    }

    pub fn zero() -> Self {
        SopFunction { terms: Vec::new() }
    }

    pub fn one() -> Self {
        SopFunction {
            terms: vec![Term::one()],
        }
    }

    /// Normalizes raw code sequences, drops cancelled ones and absorbs.
    pub fn from_codes<I, J>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = J>,
        J: IntoIterator<Item = u32>,
    {
        let mut terms = Vec::new();
        for row in rows {
            let lits = row
                .into_iter()
                .map(Literal::new)
                .collect::<Result<Vec<_>>>()?;
            if let Normalized::Product(t) = normalize_term(lits) {
                terms.push(t);
            }
        }
        Ok(SopFunction::new(terms))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_empty()
    }

    /// Sorted variable indices the function mentions.
    pub fn variables(&self) -> Vec<u16> {
        let mut vars: Vec<u16> = self.terms.iter().flat_map(|t| t.variables()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Same terms, sorted by size and then by codes.
    pub fn canonical(&self) -> SopFunction {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        SopFunction { terms }
    }

    /// Subset of terms picked by index, absorbed again.
    pub fn select(&self, indices: &[usize]) -> SopFunction {
        SopFunction::new(indices.iter().map(|&i| self.terms[i].clone()).collect())
    }

    /// OR of two functions.
    pub fn or(&self, other: &SopFunction) -> SopFunction {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        SopFunction::new(terms)
    }

    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|t| t.pretty().replace(' ', ""))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Debug for SopFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SopFunction({})", self.pretty())
    }
}

/// A function read from text together with the notes produced while
/// normalizing it.
#[derive(Clone, Debug)]
pub struct ParsedFunction {
    pub function: SopFunction,
    pub warnings: Vec<String>,
}

fn parse_u32(tok: &str, line: usize) -> Result<u32> {
    tok.parse::<u32>().map_err(|_| {
        parse_err(
            line,
            format!("expected a non-negative integer, got `{tok}`"),
        )
    })
}

/// Non-blank lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

pub fn parse_function(text: &str) -> Result<SopFunction> {
    parse_function_with_warnings(text).map(|p| p.function)
}

/// Reads the term-count / literal-count text format.
pub fn parse_function_with_warnings(text: &str) -> Result<ParsedFunction> {
    let mut lines = content_lines(text);
    let (first_no, first) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
    let mut head = first.split_whitespace();
    let n = parse_u32(head.next().unwrap(), first_no)? as usize;
    if head.next().is_some() {
        return Err(parse_err(
            first_no,
            "term count line must hold a single integer",
        ));
    }
    let mut raw = Vec::with_capacity(n);
    let mut warnings = Vec::new();
    for idx in 0..n {
        let (no, line) = lines
            .next()
            .ok_or_else(|| parse_err(first_no, format!("expected {n} terms, found {idx}")))?;
        let mut toks = line.split_whitespace();
        let k = parse_u32(toks.next().unwrap(), no)? as usize;
        let codes = toks
            .map(|t| {
                parse_u32(t, no)
                    .and_then(|c| Literal::new(c).map_err(|e| parse_err(no, e.to_string())))
            })
            .collect::<Result<Vec<_>>>()?;
        if codes.len() != k {
            return Err(parse_err(
                no,
                format!("literal count {k} does not match {} codes", codes.len()),
            ));
        }
        match normalize_term(codes) {
            Normalized::Product(t) => raw.push(t),
            Normalized::Cancelled => {
                warnings.push(format!("term {} is identically 0 and was dropped", idx + 1))
            }
        }
    }
    if let Some((no, _)) = lines.next() {
        return Err(parse_err(
            no,
            format!("content after the declared {n} terms"),
        ));
    }
    let function = SopFunction::new(raw.clone());
    if function.len() != raw.len() {
        warnings.push(format!(
            "absorption reduced {} terms to {}",
            raw.len(),
            function.len()
        ));
    }
    Ok(ParsedFunction { function, warnings })
}

pub fn serialize_function(f: &SopFunction) -> String {
    let mut out = format!("{}\n", f.len());
    for t in f.terms() {
        if t.is_empty() {
            out.push_str("1 101\n");
            continue;
        }
        out.push_str(&t.len().to_string());
        for lit in t.literals() {
            out.push(' ');
            out.push_str(&lit.to_string());
        }
        out.push('\n');
    }
    out
}

/// Values of variables, indexed in positive-code space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TruthAssignment {
    values: BTreeMap<u16, bool>,
}

impl TruthAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: u16, value: bool) -> &mut Self {
        self.values.insert(var, value);
        self
    }

    pub fn with(mut self, var: u16, value: bool) -> Self {
        self.values.insert(var, value);
        self
    }

    pub fn get(&self, var: u16) -> Option<bool> {
        self.values.get(&var).copied()
    }
}

pub fn evaluate(f: &SopFunction, a: &TruthAssignment) -> Result<bool> {
    // check coverage first so a missing variable is reported even when an
    // earlier term already decides the value
    for var in f.variables() {
        if a.get(var).is_none() {
            return Err(Error::MissingVariable(var));
        }
    }
    for t in f.terms() {
        if t.eval(a)? {
            return Ok(true);
        }
    }
    Ok(false)
}

pub fn equivalent(f: &SopFunction, g: &SopFunction) -> Result<bool> {
    equivalent_within(f, g, DEFAULT_ORACLE_BOUND)
}

/// Exhaustive truth-table comparison over the union of both supports.
pub fn equivalent_within(f: &SopFunction, g: &SopFunction, bound: usize) -> Result<bool> {
    let universe = Universe::of(&[f, g]);
    if universe.len() > bound {
        return Err(Error::UniverseTooLarge {
            size: universe.len(),
            bound,
        });
    }
    Ok(universe.function_table(f) == universe.function_table(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(c: u32) -> Literal {
        Literal::new(c).unwrap()
    }

    fn term(codes: &[u32]) -> Term {
        normalize_term(codes.iter().map(|&c| lit(c)))
            .product()
            .unwrap()
    }

    fn codes(t: &Term) -> Vec<u16> {
        t.literals().iter().map(|l| l.code()).collect()
    }

    #[test]
    fn prime_implicants_by_consensus() {
        // ab + a'c has the consensus bc
        let f = SopFunction::from_codes(vec![vec![0, 1], vec![1000, 2]]).unwrap();
        let p = prime_implicants(&f);
        assert_eq!(p.terms(), &[term(&[0, 1]), term(&[1, 2]), term(&[1000, 2])]);
        // ab + ab' collapses to a
        let f = SopFunction::from_codes(vec![vec![0, 1], vec![0, 999]]).unwrap();
        assert_eq!(prime_implicants(&f).terms(), &[term(&[0])]);
        // a + a' is constant 1
        let f = SopFunction::from_codes(vec![vec![0], vec![1000]]).unwrap();
        assert!(prime_implicants(&f).is_one());
        assert!(prime_implicants(&SopFunction::zero()).is_zero());
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complement(lit(0)).unwrap().code(), 1000);
        assert_eq!(complement(lit(3)).unwrap().code(), 997);
        assert_eq!(complement(complement(lit(7)).unwrap()).unwrap(), lit(7));
        assert_eq!(complement(Literal::ONE), Err(Error::ConstantComplement));
        assert_eq!(complement(Literal::ZERO), Err(Error::ConstantComplement));
        assert!(complement(lit(30)).is_err());
    }

    #[test]
    fn code_validation() {
        for bad in [102, 500, 974, 1001, 5000] {
            assert_eq!(Literal::new(bad), Err(Error::InvalidCode(bad)));
        }
        for good in [0, 25, 26, 99, 100, 101, 975, 1000] {
            assert!(Literal::new(good).is_ok());
        }
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(codes(&term(&[0, 1, 1, 2])), vec![0, 1, 2]);
        assert_eq!(codes(&term(&[101, 1, 2])), vec![1, 2]);
        assert_eq!(
            normalize_term([lit(4), lit(996), lit(3)]),
            Normalized::Cancelled
        );
        assert_eq!(normalize_term([lit(4), lit(100)]), Normalized::Cancelled);
        assert_eq!(
            normalize_term([Literal::ONE]),
            Normalized::Product(Term::one())
        );
    }

    #[test]
    fn absorb_examples() {
        // abc + adebc
        let f = SopFunction::new(vec![term(&[0, 1, 2]), term(&[0, 3, 4, 1, 2])]);
        assert_eq!(f.terms(), &[term(&[0, 1, 2])]);
        assert!(SopFunction::new(vec![]).is_zero());
        let g = SopFunction::new(vec![term(&[1]), term(&[0]), term(&[1]), term(&[0, 2])]);
        assert_eq!(g.terms(), &[term(&[1]), term(&[0])]);
    }

    #[test]
    fn parse_example_one() {
        let f = parse_function("3\n2 997 999\n4 997 5 4 998\n2 1000 5").unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.pretty(), "d'b' + efd'c' + fa'");
        assert_eq!(codes(&f.terms()[1]), vec![4, 5, 997, 998]);
    }

    #[test]
    fn parse_constant_one() {
        let f = parse_function("1\n1 101").unwrap();
        assert!(f.is_one());
        assert_eq!(serialize_function(&f), "1\n1 101\n");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_function("1\n3 0 1"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_function("2\n1 0"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_function("1\n1 0\n1 1"),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_function("1\n1 500"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(parse_function(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_records_absorption_warning() {
        let p = parse_function_with_warnings("2\n3 0 1 2\n1 0").unwrap();
        assert_eq!(p.function.len(), 1);
        assert_eq!(p.warnings.len(), 1);
        let p = parse_function_with_warnings("2\n2 0 1000\n1 3").unwrap();
        assert_eq!(p.function.len(), 1);
        assert_eq!(p.warnings.len(), 1);
    }

    #[test]
    fn evaluate_examples() {
        let ab = SopFunction::new(vec![term(&[0, 1])]);
        let a = TruthAssignment::new().with(0, true).with(1, true);
        assert!(evaluate(&ab, &a).unwrap());
        assert!(!evaluate(&SopFunction::zero(), &a).unwrap());
        let f = SopFunction::new(vec![term(&[1, 2]), term(&[1, 998])]);
        let a = TruthAssignment::new().with(1, true).with(2, false);
        assert!(evaluate(&f, &a).unwrap());
        let missing = TruthAssignment::new().with(1, true);
        assert_eq!(evaluate(&f, &missing), Err(Error::MissingVariable(2)));
    }

    #[test]
    fn equivalence_examples() {
        let f = SopFunction::new(vec![term(&[1, 2]), term(&[1, 998])]);
        let b = SopFunction::new(vec![term(&[1])]);
        assert!(equivalent(&f, &b).unwrap());
        // F'DE + F'D'E == F'E
        let g = SopFunction::new(vec![term(&[995, 3, 4]), term(&[995, 997, 4])]);
        let h = SopFunction::new(vec![term(&[995, 4])]);
        assert!(equivalent(&g, &h).unwrap());
        let a = SopFunction::new(vec![term(&[0])]);
        let na = SopFunction::new(vec![term(&[1000])]);
        assert!(!equivalent(&a, &na).unwrap());
        let wide = SopFunction::new(vec![Term::from_literals((0..22).map(Literal::var))]);
        assert!(matches!(
            equivalent(&wide, &wide),
            Err(Error::UniverseTooLarge {
                size: 22,
                bound: 20
            })
        ));
    }
}
