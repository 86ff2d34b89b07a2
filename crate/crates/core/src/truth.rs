//! Bit-parallel truth tables over a small variable universe.

use crate::model::{Literal, SopFunction, Term};

const PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruthTable {
    words: Vec<u64>,
}

impl TruthTable {
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn and_assign(&mut self, other: &TruthTable) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn or_assign(&mut self, other: &TruthTable) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// True when every set bit of `self` is also set in `other`.
    pub fn implies(&self, other: &TruthTable) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn bit(&self, index: usize) -> bool {
        self.words[index / 64] >> (index % 64) & 1 == 1
    }
}

/// Sorted set of variable indices; assignment `i` gives variable `vars[k]`
/// the value of bit `k` of `i`.
#[derive(Clone, Debug)]
pub struct Universe {
    vars: Vec<u16>,
    words: usize,
    tail_mask: u64,
    literal_cache: Vec<(TruthTable, TruthTable)>,
}

impl Universe {
    pub fn new(mut vars: Vec<u16>) -> Self {
        vars.sort_unstable();
        vars.dedup();
        let n = vars.len();
        assert!(n <= 30, "truth tables over {n} variables are not supported");
        let bits = 1usize << n;
        let words = bits.div_ceil(64);
        let tail_mask = if bits >= 64 {
            u64::MAX
        } else {
            (1u64 << bits) - 1
        };
        let mut u = Universe {
            vars,
            words,
            tail_mask,
            literal_cache: Vec::new(),
        };
        u.literal_cache = (0..n)
            .map(|k| {
                let pos = u.positive_table(k);
                let mut neg = pos.clone();
                for w in &mut neg.words {
                    *w = !*w;
                }
                u.mask(&mut neg);
                (pos, neg)
            })
            .collect();
        u
    }

    pub fn of(functions: &[&SopFunction]) -> Self {
        Universe::new(functions.iter().flat_map(|f| f.variables()).collect())
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[u16] {
        &self.vars
    }

    pub fn contains(&self, var: u16) -> bool {
        self.vars.binary_search(&var).is_ok()
    }

    fn mask(&self, t: &mut TruthTable) {
        if let Some(last) = t.words.last_mut() {
            *last &= self.tail_mask;
        }
    }

    fn positive_table(&self, k: usize) -> TruthTable {
        let words = (0..self.words)
            .map(|w| {
                if k < 6 {
                    PATTERNS[k]
                } else if (w >> (k - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        let mut t = TruthTable { words };
        self.mask(&mut t);
        t
    }

    pub fn zero(&self) -> TruthTable {
        TruthTable {
            words: vec![0; self.words],
        }
    }

    pub fn one(&self) -> TruthTable {
        let mut t = TruthTable {
            words: vec![u64::MAX; self.words],
        };
        self.mask(&mut t);
        t
    }

    /// Table of a single literal. Panics if its variable is outside the
    /// universe or it is a constant.
    pub fn literal_table(&self, lit: Literal) -> &TruthTable {
        let var = lit.variable().expect("constant literal has no table");
        let k = self
            .vars
            .binary_search(&var)
            .unwrap_or_else(|_| panic!("variable {var} outside the universe"));
        let (pos, neg) = &self.literal_cache[k];
        if lit.is_complement() {
            neg
        } else {
            pos
        }
    }

    pub fn term_table(&self, term: &Term) -> TruthTable {
        let mut t = self.one();
        for &lit in term.literals() {
            t.and_assign(self.literal_table(lit));
        }
        t
    }

    pub fn function_table(&self, f: &SopFunction) -> TruthTable {
        let mut t = self.zero();
        for term in f.terms() {
            t.or_assign(&self.term_table(term));
        }
        t
    }

    /// Value of variable `var` in assignment number `index`.
    pub fn value_of(&self, var: u16, index: usize) -> Option<bool> {
        let k = self.vars.binary_search(&var).ok()?;
        Some(index >> k & 1 == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{evaluate, TruthAssignment};

    #[test]
    fn tables_agree_with_pointwise_evaluation() {
        // variables 0, 2, 7, 9, 12, 13, 20: exercises both in-word and word-level patterns
        let f = SopFunction::from_codes(vec![
            vec![0, 998, 7],
            vec![991, 13, 20],
            vec![12],
            vec![1000, 980],
        ])
        .unwrap();
        let u = Universe::of(&[&f]);
        assert_eq!(u.len(), 7);
        let table = u.function_table(&f);
        for index in 0..(1usize << u.len()) {
            let mut a = TruthAssignment::new();
            for &v in u.vars() {
                a.set(v, u.value_of(v, index).unwrap());
            }
            assert_eq!(table.bit(index), evaluate(&f, &a).unwrap(), "index {index}");
        }
    }

    #[test]
    fn empty_universe() {
        let u = Universe::new(vec![]);
        assert_eq!(u.function_table(&SopFunction::one()), u.one());
        assert_eq!(u.function_table(&SopFunction::zero()), u.zero());
        assert!(u.one().bit(0));
    }
}
