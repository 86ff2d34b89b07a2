#![allow(dead_code)]

use std::collections::VecDeque;

use lattice_synth::graph::LatticeDim;
use lattice_synth::model::{Literal, SopFunction, Term, TruthAssignment};
use lattice_synth::solver::LatticeAssignment;

pub const GRID_6X6: &str = include_str!("../data/lattice_6x6.lat");
pub const GRID_6X6_LISTING: &str = include_str!("../data/lattice_6x6_listing.txt");

/// `"C'E'BA' + DBE"` with A = 0.
pub fn expr(text: &str) -> SopFunction {
    let terms = text
        .split('+')
        .map(|t| {
            let mut lits = Vec::new();
            for ch in t.chars().filter(|c| !c.is_whitespace()) {
                if ch == '\'' {
                    let last: Literal = lits.pop().expect("prime after a letter");
                    lits.push(last.complement().unwrap());
                } else {
                    let v = ch.to_ascii_uppercase() as u16 - b'A' as u16;
                    lits.push(Literal::var(v));
                }
            }
            Term::from_literals(lits)
        })
        .collect();
    SopFunction::new(terms)
}

/// Square grid written as `"E B' A' / C' D' F / 0 B' 1"`, rows top to bottom.
pub fn grid(text: &str) -> LatticeAssignment {
    let rows: Vec<Vec<u32>> = text
        .split('/')
        .map(|r| {
            r.split_whitespace()
                .map(|tok| {
                    let (name, neg) = match tok.strip_suffix('\'') {
                        Some(n) => (n, true),
                        None => (tok, false),
                    };
                    match name {
                        "0" => 100,
                        "1" => 101,
                        _ => {
                            let v = name.chars().next().unwrap().to_ascii_uppercase() as u32
                                - 'A' as u32;
                            if neg {
                                1000 - v
                            } else {
                                v
                            }
                        }
                    }
                })
                .collect()
        })
        .collect();
    let dim = LatticeDim::new(rows.len(), rows[0].len()).unwrap();
    LatticeAssignment::from_codes(dim, &rows.concat()).unwrap()
}

/// Four small mapping examples, in the plain text format.
pub const EXAMPLES: [(&str, &str); 4] = [
    ("example 1", "3\n2 997 999\n4 997 5 4 998\n2 1000 5\n"),
    ("example 2", "4\n2 997 4\n2 997 999\n2 996 999\n2 0 4\n"),
    (
        "example 3",
        "4\n3 4 1000 1\n4 4 1000 998 997\n3 0 998 997\n1 996\n",
    ),
    (
        "example 4",
        "4\n3 995 3 1000\n2 995 4\n2 1000 4\n3 995 997 999\n",
    ),
];

pub const EIGHT_NO_SPLIT: &str =
    "EADC'B + DE'AB'C + ED'B'C + D'AB'C + A'DC'B + DE'C'B + EAB'C + ED'A'";
pub const EIGHT_FIVE_THREE: &str = "BE'C'D' + BE'C'A' + BE'DA' + EDA' + EDB' + CEB' + B'AD' + B'AE";
pub const EIGHT_EVEN: &str = "C'E'BA' + DBE + DE'B' + C'E'B' + DBA' + DAE + DAB' + C'D";
pub const SEVEN_ODD: &str = "A'B'CE' + A'B'CD' + BCD'E' + BCD'A + ED'C' + ED' + BA'";
pub const EXAMPLE2_SYNTH: &str = "8\n3 4 997 1000\n4 4 997 999 2\n4 4 0 999 2\n4 4 3 998 1\n\
    4 1000 3 998 1\n4 3 996 998 1\n5 3 996 0 999 2\n4 997 0 999 2\n";

/// Known solution grids together with the functions they should realize.
pub fn witnesses() -> Vec<(String, SopFunction, LatticeAssignment)> {
    let mut out = Vec::new();
    let small = [
        "E B' A' / C' D' F / 0 B' 1",
        "E B' A / D' 1 E / 1 E' A",
        "E A E' / A' C' E' / B D' E'",
        "F' A' F' / D E D' / A' E B'",
    ];
    for ((name, f), g) in EXAMPLES.iter().zip(small) {
        let f = lattice_synth::model::parse_function(f).unwrap();
        out.push((name.to_string(), f, grid(g)));
    }
    let larger = [
        (
            "eight terms",
            EIGHT_EVEN,
            "D C' D D / A C' E' B / D D 1 B / C' E B' A'",
        ),
        (
            "eight terms, first part",
            "DE'B' + DBE + DBA' + C'D",
            "E' E A' / D D B / B' C' D",
        ),
        (
            "eight terms, second part",
            "C'E'BA' + C'E'B' + DAE + DAB'",
            "D C' 0 / A E' B / E B' A'",
        ),
        (
            "seven terms",
            SEVEN_ODD,
            "B E B A' / A' D' C B' / 1 1 D' C / A' A C' E'",
        ),
        (
            "seven terms, three-term part",
            "A'B'CE' + A'B'CD' + BCD'E'",
            "B' D' 0 / E' C A' / B 0 B'",
        ),
        (
            "seven terms, four-term part",
            "BCD'A + ED'C' + ED' + BA'",
            "C E A' / A D' B / 0 1 1",
        ),
        (
            "no-split eight",
            EIGHT_NO_SPLIT,
            "D A' D' E / E' D A 1 / C C' B' D' / C' B C A'",
        ),
        (
            "five-three eight",
            EIGHT_FIVE_THREE,
            "B' C E B / A E D E' / D' B' A' C' / 0 B' 1 D'",
        ),
        (
            "five-three eight, three-term part",
            "BE'C'D' + BE'C'A' + BE'DA'",
            "D' 0 B / B E' A' / D C' 0",
        ),
        (
            "five-three eight, five-term part",
            "EDA' + EDB' + CEB' + B'AD' + B'AE",
            "A C E / B' E D / D' B' A'",
        ),
    ];
    for (name, f, g) in larger {
        out.push((name.to_string(), expr(f), grid(g)));
    }
    out
}

/// Top-to-bottom connectivity by breadth-first search over ON cells.
pub fn connects(lat: &LatticeAssignment, a: &TruthAssignment) -> bool {
    let dim = lat.dim();
    let on: Vec<bool> = lat
        .codes()
        .iter()
        .map(|&l| match l.code() {
            100 => false,
            101 => true,
            _ => l.eval(a.get(l.variable().unwrap()).unwrap_or(false)),
        })
        .collect();
    let mut seen = vec![false; dim.cells()];
    let mut queue: VecDeque<usize> = (0..dim.cols()).filter(|&c| on[c]).collect();
    for &c in &queue {
        seen[c] = true;
    }
    while let Some(c) = queue.pop_front() {
        if dim.is_bottom(c) {
            return true;
        }
        let (r, k) = (dim.row(c), dim.col(c));
        let mut next = Vec::new();
        if r > 0 {
            next.push(c - dim.cols());
        }
        if r + 1 < dim.rows() {
            next.push(c + dim.cols());
        }
        if k > 0 {
            next.push(c - 1);
        }
        if k + 1 < dim.cols() {
            next.push(c + 1);
        }
        for n in next {
            if on[n] && !seen[n] {
                seen[n] = true;
                queue.push_back(n);
            }
        }
    }
    false
}

/// Every assignment of `vars`, as a vector of truth assignments.
pub fn all_assignments(vars: &[u16]) -> Vec<TruthAssignment> {
    (0..1u32 << vars.len())
        .map(|bits| {
            let mut a = TruthAssignment::new();
            for (i, &v) in vars.iter().enumerate() {
                a.set(v, bits >> i & 1 == 1);
            }
            a
        })
        .collect()
}

/// Truth table of a lattice by the BFS oracle, over `vars`.
pub fn bfs_table(lat: &LatticeAssignment, vars: &[u16]) -> Vec<bool> {
    all_assignments(vars)
        .iter()
        .map(|a| connects(lat, a))
        .collect()
}

/// Truth table of a function, over `vars`.
pub fn sop_table(f: &SopFunction, vars: &[u16]) -> Vec<bool> {
    all_assignments(vars)
        .iter()
        .map(|a| lattice_synth::model::evaluate(f, a).unwrap())
        .collect()
}
