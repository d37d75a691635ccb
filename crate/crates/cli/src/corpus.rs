//! Formula corpora: scalable pattern families, the small-formula grid and
//! the cross-validation corpus.

use std::collections::BTreeSet;
use std::str::FromStr;

use ltlf_core::parse::parse_ltlf;
use ltlf_core::Ltlf;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pattern {
    /// `F p1 & ... & F pn`
    ConjF,
    /// `G (p1 -> F q1) & ... & G (pn -> F qn)`
    RespChain,
    /// `p1 U (p2 U ... (pn U p(n+1)))`
    UNest,
}

impl Pattern {
    pub const ALL: [Pattern; 3] = [Pattern::ConjF, Pattern::RespChain, Pattern::UNest];

    pub fn name(self) -> &'static str {
        match self {
            Pattern::ConjF => "conj-F",
            Pattern::RespChain => "resp-chain",
            Pattern::UNest => "u-nest",
        }
    }
}

impl FromStr for Pattern {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Pattern::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| format!("unknown pattern `{s}`"))
    }
}

fn p(i: usize) -> Ltlf {
    Ltlf::atom(&format!("p{i}"))
}

/// The member of `family` at scale `n` (n ≥ 1).
pub fn pattern(family: Pattern, n: usize) -> Ltlf {
    assert!(n >= 1, "pattern scale starts at 1");
    match family {
        Pattern::ConjF => Ltlf::all((1..=n).map(|i| p(i).eventually())),
        Pattern::RespChain => {
            Ltlf::all((1..=n).map(|i| p(i).implies(Ltlf::atom(&format!("q{i}")).eventually()).globally()))
        }
        Pattern::UNest => (1..=n).rev().fold(p(n + 1), |acc, i| p(i).until(acc)),
    }
}

/// Members at scales `1..=n`.
pub fn gen_patterns(family: Pattern, n: usize) -> Vec<Ltlf> {
    (1..=n).map(|i| pattern(family, i)).collect()
}

const UNARY: usize = 3;
const BINARY: usize = 5;

fn unary(op: usize, a: Ltlf) -> Ltlf {
    match op {
        0 => a.not(),
        1 => a.next(),
        _ => a.weak_next(),
    }
}

fn binary(op: usize, a: Ltlf, b: Ltlf) -> Ltlf {
    match op {
        0 => a.and(b),
        1 => a.or(b),
        2 => a.implies(b),
        3 => a.until(b),
        _ => a.release(b),
    }
}

fn leaves() -> Vec<Ltlf> {
    vec![Ltlf::atom("a"), Ltlf::atom("b")]
}

/// A random formula of operator depth exactly `d`.
fn sample(rng: &mut ChaCha8Rng, d: usize) -> Ltlf {
    let leaf = |rng: &mut ChaCha8Rng| leaves().swap_remove(rng.gen_range(0..2));
    if d == 0 {
        return leaf(rng);
    }
    let op = rng.gen_range(0..UNARY + BINARY);
    if op < UNARY {
        return unary(op, sample(rng, d - 1));
    }
    let other = rng.gen_range(0..d);
    let (l, r) = if rng.gen_bool(0.5) { (d - 1, other) } else { (other, d - 1) };
    binary(op - UNARY, sample(rng, l), sample(rng, r))
}

/// Formulas over `{a, b}` built from `! X N & | -> U R`, of operator depth
/// at most 3. Depth 0 and 1 are enumerated in full; the rest is filled by
/// seeded sampling (half depth 2, half depth 3) until `cap` distinct
/// formulas exist. Deterministic.
pub fn grid(cap: usize) -> Vec<Ltlf> {
    let mut out: Vec<Ltlf> = leaves();
    let base = leaves();
    for op in 0..UNARY {
        out.extend(base.iter().map(|a| unary(op, a.clone())));
    }
    for op in 0..BINARY {
        for a in &base {
            for b in &base {
                out.push(binary(op, a.clone(), b.clone()));
            }
        }
    }
    out.truncate(cap);
    let mut seen: BTreeSet<Ltlf> = out.iter().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x17f);
    let mut depth = 2;
    while out.len() < cap {
        let f = sample(&mut rng, depth);
        if seen.insert(f.clone()) {
            out.push(f);
            depth = 5 - depth;
        }
    }
    out
}

/// 50 formulas: every pattern at scales 1 to 3 and a hand-picked set.
pub fn default_corpus() -> Vec<Ltlf> {
    let mut out: Vec<Ltlf> = Pattern::ALL.into_iter().flat_map(|p| gen_patterns(p, 3)).collect();
    out.extend(HAND_PICKED.iter().map(|s| parse_ltlf(s).expect("corpus formulas parse")));
    out
}

pub const HAND_PICKED: [&str; 41] = [
    "p",
    "F a",
    "G a",
    "a U b",
    "!F a",
    "G (a -> X b)",
    "a U (b U c)",
    "a R b",
    "X a",
    "N a",
    "X X a",
    "N false",
    "F G a",
    "G F a",
    "!G (a -> F b)",
    "(a U b) & (b U a)",
    "(a R b) | X (b U a)",
    "G (a | b) & F !a",
    "a & !a",
    "true",
    "false",
    "a -> X (b U !a)",
    "F (a & X (b & X a))",
    "G (a -> N !a)",
    "(F a) U b",
    "!(a U b) -> (!a R !b)",
    "G (a -> (b R c))",
    "a U (X b)",
    "(G a) | (G b)",
    "F (a & N false)",
    "X (a U b) & N !b",
    "G (b -> X F a) & F b",
    "!X true",
    "(a U b) U c",
    "a R (b R (c | a))",
    "F a & F b & G !(a & b)",
    "G (a -> X !a) & G (!a -> X a)",
    "!a U (b & X a)",
    "(X a) R (b | c)",
    "F (a -> G b)",
    "N (a & b) | X !(a | b)",
];

/// One formula per non-empty line; `#` starts a comment line.
pub fn read_formulas(text: &str) -> Result<Vec<Ltlf>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_ltlf(l.trim()).map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pattern_examples() {
        assert_eq!(pattern(Pattern::ConjF, 2).to_string(), parse_ltlf("F p1 & F p2").unwrap().to_string());
        assert_eq!(pattern(Pattern::RespChain, 1), parse_ltlf("G (p1 -> F q1)").unwrap());
        assert_eq!(pattern(Pattern::UNest, 2), parse_ltlf("p1 U (p2 U p3)").unwrap());
    }

    #[test]
    fn grid_is_deterministic_and_bounded() {
        let g = grid(500);
        assert_eq!(g.len(), 500);
        assert_eq!(g, grid(500));
        assert!(g.iter().all(|f| f.depth() <= 3 && f.atoms().len() <= 2));
        assert_eq!(g.iter().collect::<BTreeSet<_>>().len(), 500);
        assert!(g.iter().any(|f| f.depth() == 3));
    }

    #[test]
    fn corpus_size() {
        assert_eq!(default_corpus().len(), 50);
    }
}
