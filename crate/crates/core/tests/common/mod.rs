#![allow(dead_code)]

use ltlf_core::formula::{Alphabet, Ltlf, Pltlf};
use ltlf_core::parse::parse_ltlf;
use ltlf_core::Trace;
use proptest::prelude::*;

pub fn ab() -> Alphabet {
    Alphabet::from_strs(["a", "b"])
}

/// Random LTLf formulas over `a`, `b` of depth at most `depth`.
pub fn arb_ltlf(depth: u32) -> impl Strategy<Value = Ltlf> {
    let leaf = prop_oneof![
        4 => prop_oneof![Just("a"), Just("b")].prop_map(Ltlf::atom),
        1 => Just(Ltlf::True),
        1 => Just(Ltlf::False),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Ltlf::not),
            inner.clone().prop_map(Ltlf::next),
            inner.clone().prop_map(Ltlf::weak_next),
            inner.clone().prop_map(Ltlf::eventually),
            inner.clone().prop_map(Ltlf::globally),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.and(y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.or(y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.implies(y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.until(y)),
            (inner.clone(), inner).prop_map(|(x, y)| x.release(y)),
        ]
    })
    .prop_filter("depth bound", move |f| f.depth() <= depth as usize)
}

/// Random PLTLf formulas over `p`, `q`.
pub fn arb_pltlf(depth: u32) -> impl Strategy<Value = Pltlf> {
    let leaf = prop_oneof![
        4 => prop_oneof![Just("p"), Just("q")].prop_map(Pltlf::atom),
        1 => Just(Pltlf::True),
    ];
    leaf.prop_recursive(depth, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Pltlf::not),
            inner.clone().prop_map(Pltlf::yesterday),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.and(y)),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| x.or(y)),
            (inner.clone(), inner).prop_map(|(x, y)| x.since(y)),
        ]
    })
}

pub fn arb_trace(atoms: usize, max_len: usize) -> impl Strategy<Value = Trace> {
    proptest::collection::vec(0u32..1 << atoms, 1..=max_len).prop_map(Trace::new)
}

/// Hand-picked formulas exercising every operator.
pub const CORPUS: &[&str] = &[
    "a",
    "!a",
    "true",
    "false",
    "X a",
    "N a",
    "F a",
    "G a",
    "a U b",
    "a R b",
    "!F a",
    "G (a -> X b)",
    "G (a -> F b)",
    "F a & F b",
    "a U (b U a)",
    "X X a",
    "N N !a",
    "G F a",
    "F G a",
    "(a U b) R a",
    "X (a | N b)",
    "!(a U !b)",
    "G (a | b) & F (a & b)",
    "a -> X !a",
];

pub fn corpus() -> Vec<Ltlf> {
    CORPUS.iter().map(|s| parse_ltlf(s).unwrap()).collect()
}

/// Direct transcription of the finite-trace semantics with explicit
/// quantification over positions.
pub fn holds(f: &Ltlf, t: &Trace, al: &Alphabet, i: usize) -> bool {
    let n = t.len();
    match f {
        Ltlf::True => true,
        Ltlf::False => false,
        Ltlf::Atom(p) => al.index_of(p).is_some_and(|k| t.holds(i, k)),
        Ltlf::Not(a) => !holds(a, t, al, i),
        Ltlf::And(a, b) => holds(a, t, al, i) && holds(b, t, al, i),
        Ltlf::Or(a, b) => holds(a, t, al, i) || holds(b, t, al, i),
        Ltlf::Implies(a, b) => !holds(a, t, al, i) || holds(b, t, al, i),
        Ltlf::Next(a) => i + 1 < n && holds(a, t, al, i + 1),
        Ltlf::WeakNext(a) => i + 1 >= n || holds(a, t, al, i + 1),
        Ltlf::Until(a, b) => (i..n).any(|j| holds(b, t, al, j) && (i..j).all(|k| holds(a, t, al, k))),
        Ltlf::Release(a, b) => (i..n).all(|j| holds(b, t, al, j) || (i..j).any(|k| holds(a, t, al, k))),
    }
}

pub fn holds_past(f: &Pltlf, t: &Trace, al: &Alphabet, i: usize) -> bool {
    match f {
        Pltlf::True => true,
        Pltlf::False => false,
        Pltlf::Atom(p) => al.index_of(p).is_some_and(|k| t.holds(i, k)),
        Pltlf::Not(a) => !holds_past(a, t, al, i),
        Pltlf::And(a, b) => holds_past(a, t, al, i) && holds_past(b, t, al, i),
        Pltlf::Or(a, b) => holds_past(a, t, al, i) || holds_past(b, t, al, i),
        Pltlf::Yesterday(a) => i > 0 && holds_past(a, t, al, i - 1),
        Pltlf::Since(a, b) => (0..=i).any(|j| holds_past(b, t, al, j) && (j + 1..=i).all(|k| holds_past(a, t, al, k))),
    }
}

/// `ρ ⊨ φ` by the direct oracle.
pub fn models(f: &Ltlf, t: &Trace, al: &Alphabet) -> bool {
    !t.is_empty() && holds(f, t, al, 0)
}

/// Every trace of length 1..=max_len, enumerated independently of the crate.
pub fn traces(atoms: usize, max_len: usize) -> Vec<Trace> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for l in 0..1u32 << atoms {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Trace::new));
        layer = next;
    }
    out
}

/// Re-encodes `t` (letters over `from`) over the atoms of `to`.
pub fn project(t: &Trace, from: &Alphabet, to: &Alphabet) -> Trace {
    let map: Vec<Option<usize>> = to.names().iter().map(|n| from.index_of(n)).collect();
    Trace::new(
        t.letters
            .iter()
            .map(|&l| {
                map.iter().enumerate().fold(0, |acc, (i, src)| match src {
                    Some(j) if l >> j & 1 == 1 => acc | 1 << i,
                    _ => acc,
                })
            })
            .collect(),
    )
}
