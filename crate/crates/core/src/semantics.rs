//! Finite-trace semantics and bounded language enumeration.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::formula::{Alphabet, Ltlf, Pltlf};
use crate::limits::Limits;

/// A subset of the alphabet; bit `i` is atom `i` of the sorted alphabet.
pub type Letter = u32;

/// Largest alphabet whose letters fit a [`Letter`].
pub const MAX_ATOMS: usize = 31;

/// A finite sequence of letters. Evaluation requires at least one letter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Trace {
    pub letters: Vec<Letter>,
}

impl Trace {
    pub fn new(letters: Vec<Letter>) -> Trace {
        Trace { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.letters.len().checked_sub(1)
    }

    pub fn reversed(&self) -> Trace {
        Trace { letters: self.letters.iter().rev().copied().collect() }
    }

    pub fn holds(&self, x: usize, atom: usize) -> bool {
        self.letters[x] >> atom & 1 == 1
    }
}

impl From<Vec<Letter>> for Trace {
    fn from(letters: Vec<Letter>) -> Self {
        Trace { letters }
    }
}

/// Sort key putting letters in lexicographic order of their bit-vectors
/// written atom 0 first.
pub fn lex_key(letter: Letter, atoms: usize) -> u32 {
    let mut key = 0;
    for i in 0..atoms {
        if letter >> i & 1 == 1 {
            key |= 1 << (atoms - 1 - i);
        }
    }
    key
}

/// All letters over `atoms` atoms in lexicographic order.
pub fn letters_in_order(atoms: usize) -> Vec<Letter> {
    let mut v: Vec<Letter> = (0..1u32 << atoms).collect();
    v.sort_by_key(|&l| lex_key(l, atoms));
    v
}

fn atom_bit(alphabet: &Alphabet, name: &str) -> Option<usize> {
    alphabet.index_of(name)
}

/// Truth of `φ` at every position. Atoms missing from `alphabet` never hold.
pub fn ltlf_truth(trace: &Trace, alphabet: &Alphabet, f: &Ltlf) -> Vec<bool> {
    let n = trace.len();
    let sub = |g: &Ltlf| ltlf_truth(trace, alphabet, g);
    match f {
        Ltlf::True => vec![true; n],
        Ltlf::False => vec![false; n],
        Ltlf::Atom(name) => match atom_bit(alphabet, name) {
            Some(i) => (0..n).map(|x| trace.holds(x, i)).collect(),
            None => vec![false; n],
        },
        Ltlf::Not(a) => sub(a).into_iter().map(|v| !v).collect(),
        Ltlf::And(a, b) => zip(sub(a), sub(b), |p, q| p && q),
        Ltlf::Or(a, b) => zip(sub(a), sub(b), |p, q| p || q),
        Ltlf::Implies(a, b) => zip(sub(a), sub(b), |p, q| !p || q),
        Ltlf::Next(a) => {
            let t = sub(a);
            (0..n).map(|x| x + 1 < n && t[x + 1]).collect()
        }
        Ltlf::WeakNext(a) => {
            let t = sub(a);
            (0..n).map(|x| x + 1 >= n || t[x + 1]).collect()
        }
        Ltlf::Until(a, b) => {
            let (ta, tb) = (sub(a), sub(b));
            let mut out = vec![false; n];
            let mut next = false;
            for x in (0..n).rev() {
                next = tb[x] || (ta[x] && next);
                out[x] = next;
            }
            out
        }
        Ltlf::Release(a, b) => {
            let (ta, tb) = (sub(a), sub(b));
            let mut out = vec![false; n];
            let mut next = true;
            for x in (0..n).rev() {
                next = tb[x] && (ta[x] || next);
                out[x] = next;
            }
            out
        }
    }
}

/// Truth of `ψ` at every position.
pub fn pltlf_truth(trace: &Trace, alphabet: &Alphabet, f: &Pltlf) -> Vec<bool> {
    let n = trace.len();
    let sub = |g: &Pltlf| pltlf_truth(trace, alphabet, g);
    match f {
        Pltlf::True => vec![true; n],
        Pltlf::False => vec![false; n],
        Pltlf::Atom(name) => match atom_bit(alphabet, name) {
            Some(i) => (0..n).map(|x| trace.holds(x, i)).collect(),
            None => vec![false; n],
        },
        Pltlf::Not(a) => sub(a).into_iter().map(|v| !v).collect(),
        Pltlf::And(a, b) => zip(sub(a), sub(b), |p, q| p && q),
        Pltlf::Or(a, b) => zip(sub(a), sub(b), |p, q| p || q),
        Pltlf::Yesterday(a) => {
            let t = sub(a);
            (0..n).map(|x| x > 0 && t[x - 1]).collect()
        }
        Pltlf::Since(a, b) => {
            let (ta, tb) = (sub(a), sub(b));
            let mut out = vec![false; n];
            let mut prev = false;
            for x in 0..n {
                prev = tb[x] || (ta[x] && prev);
                out[x] = prev;
            }
            out
        }
    }
}

fn zip(a: Vec<bool>, b: Vec<bool>, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.into_iter().zip(b).map(|(p, q)| op(p, q)).collect()
}

fn check_position(trace: &Trace, x: usize) -> Result<()> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    if x >= trace.len() {
        return Err(Error::PositionOutOfRange { position: x, len: trace.len() });
    }
    Ok(())
}

/// `ρ, x ⊨ φ`.
pub fn eval_ltlf_at(trace: &Trace, alphabet: &Alphabet, f: &Ltlf, x: usize) -> Result<bool> {
    check_position(trace, x)?;
    Ok(ltlf_truth(trace, alphabet, f)[x])
}

/// `ρ, x ⊨ ψ`.
pub fn eval_pltlf_at(trace: &Trace, alphabet: &Alphabet, f: &Pltlf, x: usize) -> Result<bool> {
    check_position(trace, x)?;
    Ok(pltlf_truth(trace, alphabet, f)[x])
}

/// `ρ ⊨ φ`, evaluated at position 0; the empty trace satisfies nothing.
pub fn satisfies_ltlf(trace: &Trace, alphabet: &Alphabet, f: &Ltlf) -> bool {
    !trace.is_empty() && ltlf_truth(trace, alphabet, f)[0]
}

/// `ρ ⊨ ψ`, evaluated at the last position; the empty trace satisfies nothing.
pub fn satisfies_pltlf(trace: &Trace, alphabet: &Alphabet, f: &Pltlf) -> bool {
    match trace.last() {
        Some(last) => pltlf_truth(trace, alphabet, f)[last],
        None => false,
    }
}

/// Every trace of length `1..=max_len` over `atoms` atoms, ordered by
/// length-then-lexicographic enumeration (sorted afterwards by callers that
/// need lexicographic order).
pub fn all_traces(atoms: usize, max_len: usize) -> impl Iterator<Item = Trace> {
    let letters = 1u64 << atoms;
    (1..=max_len).flat_map(move |len| {
        let total = letters.pow(len as u32);
        (0..total).map(move |mut code| {
            let mut v = Vec::with_capacity(len);
            for _ in 0..len {
                v.push((code % letters) as Letter);
                code /= letters;
            }
            Trace::new(v)
        })
    })
}

/// Number of traces of length `1..=max_len`, saturating.
pub fn trace_count(atoms: usize, max_len: usize) -> usize {
    let letters = 1usize.checked_shl(atoms as u32).unwrap_or(usize::MAX);
    let mut total = 0usize;
    let mut layer = 1usize;
    for _ in 0..max_len {
        layer = layer.saturating_mul(letters);
        total = total.saturating_add(layer);
    }
    total
}

/// Sorts traces lexicographically (letters compared by [`lex_key`]; a proper
/// prefix comes first).
pub fn sort_traces(traces: &mut [Trace], atoms: usize) {
    traces.sort_by_cached_key(|t| t.letters.iter().map(|&l| lex_key(l, atoms)).collect::<Vec<_>>());
}

fn bounded<F: Fn(&Trace) -> bool>(atoms: usize, max_len: usize, limits: &Limits<'_>, sat: F) -> Result<Vec<Trace>> {
    if atoms > MAX_ATOMS {
        return Err(Error::AlphabetTooLarge(atoms));
    }
    let count = trace_count(atoms, max_len);
    if count > limits.max_trace_evaluations {
        return Err(Error::BudgetExceeded { what: "trace evaluation", limit: limits.max_trace_evaluations });
    }
    let mut out = Vec::new();
    for t in all_traces(atoms, max_len) {
        limits.check()?;
        if sat(&t) {
            out.push(t);
        }
    }
    sort_traces(&mut out, atoms);
    Ok(out)
}

/// Satisfying traces of `φ` with length `1..=max_len`, lexicographically sorted.
pub fn bounded_language_ltlf(f: &Ltlf, alphabet: &Alphabet, max_len: usize, limits: &Limits<'_>) -> Result<Vec<Trace>> {
    bounded(alphabet.len(), max_len, limits, |t| satisfies_ltlf(t, alphabet, f))
}

/// Satisfying traces of `ψ` with length `1..=max_len`, lexicographically sorted.
pub fn bounded_language_pltlf(f: &Pltlf, alphabet: &Alphabet, max_len: usize, limits: &Limits<'_>) -> Result<Vec<Trace>> {
    bounded(alphabet.len(), max_len, limits, |t| satisfies_pltlf(t, alphabet, f))
}
