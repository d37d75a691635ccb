//! Finite-model evaluation of monadic sentences.

use alloc::vec;
use alloc::vec::Vec;

use super::sentence::{MonadicSentence, PExpr, PredId, PredRole};
use super::MonadicStructure;
use crate::error::{Error, Result};
use crate::formula::Ltlf;
use crate::limits::Limits;
use crate::semantics::{ltlf_truth, Trace};

/// A clause instance that fails; `clause` is `None` for Init.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    pub clause: Option<usize>,
    pub position: usize,
}

/// Every failing instance of `Init ∧ ∀x Matrix` under the given extents
/// (indexed by predicate, atoms included).
pub fn violations(s: &MonadicSentence, len: usize, extents: &[Vec<bool>]) -> Vec<Violation> {
    assert_eq!(extents.len(), s.preds().len(), "one extent per predicate");
    let value = |p: PredId, y: usize| extents[p.index()][y];
    let mut out = Vec::new();
    for (i, c) in s.lower().iter().enumerate() {
        for x in 0..len {
            if !c.eval(x, len, &value) {
                out.push(Violation { clause: i.checked_sub(1), position: x });
            }
        }
    }
    out
}

/// Checks `Init ∧ ∀x Matrix` under fixed extents. An empty domain satisfies
/// nothing.
pub fn eval_with_extents(s: &MonadicSentence, len: usize, extents: &[Vec<bool>]) -> bool {
    assert_eq!(extents.len(), s.preds().len(), "one extent per predicate");
    if len == 0 {
        return false;
    }
    let value = |p: PredId, y: usize| extents[p.index()][y];
    s.lower().iter().all(|c| (0..len).all(|x| c.eval(x, len, &value)))
}

fn atom_extents(i: &MonadicStructure, s: &MonadicSentence) -> Result<Vec<Vec<bool>>> {
    s.alphabet()
        .names()
        .iter()
        .map(|n| i.extent(n).map(<[bool]>::to_vec).ok_or_else(|| Error::UnknownPredicate((**n).into())))
        .collect()
}

/// Extents of the canonical witness: atoms from the trace, each `Q_θ` the
/// truth set of `θ`.
pub fn witness_extents(trace: &Trace, f: &Ltlf, s: &MonadicSentence) -> Result<Vec<Vec<bool>>> {
    let closure = f.closure();
    let alphabet = s.alphabet();
    let mut out = Vec::with_capacity(s.preds().len());
    for d in s.preds() {
        let ext = match &d.role {
            PredRole::Atom => {
                let i = alphabet.index_of(&d.name).ok_or(Error::WitnessMismatch)?;
                (0..trace.len()).map(|x| trace.holds(x, i)).collect()
            }
            PredRole::Subformula(g) if closure.index_of(g).is_some() => ltlf_truth(trace, alphabet, g),
            _ => return Err(Error::WitnessMismatch),
        };
        out.push(ext);
    }
    Ok(out)
}

/// Evaluates `s = encode_mso(φ, cfg)` on `ρ` with the canonical witness.
pub fn eval_sentence_witness(trace: &Trace, f: &Ltlf, s: &MonadicSentence) -> Result<bool> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let extents = witness_extents(trace, f, s)?;
    Ok(eval_with_extents(s, trace.len(), &extents))
}

/// Searches all extents of the quantified predicates.
///
/// Positions are assigned from last to first; once position `y` is fixed,
/// every clause instance whose window starts at `y` is checked, so dead
/// branches are cut early.
pub fn eval_sentence_bruteforce(i: &MonadicStructure, s: &MonadicSentence, limits: &Limits<'_>) -> Result<bool> {
    let len = i.len();
    let aux = s.quantifier_count();
    if aux.saturating_mul(len) > limits.max_bruteforce_bits {
        return Err(Error::BudgetExceeded { what: "brute-force bit", limit: limits.max_bruteforce_bits });
    }
    if len == 0 {
        return Ok(false);
    }
    let mut extents = atom_extents(i, s)?;
    extents.extend((0..aux).map(|_| vec![false; len]));
    let clauses: Vec<(PExpr, i32)> = s
        .lower()
        .into_iter()
        .map(|c| {
            let lo = c.offset_range().0;
            (c, lo)
        })
        .collect();
    let mut search = Search { len, base: s.alphabet().len(), aux, extents, clauses, limits, steps: 0 };
    search.descend(len - 1)
}

struct Search<'l, 'a> {
    len: usize,
    base: usize,
    aux: usize,
    extents: Vec<Vec<bool>>,
    clauses: Vec<(PExpr, i32)>,
    limits: &'l Limits<'a>,
    steps: u32,
}

impl Search<'_, '_> {
    fn instances_ok(&self, y: usize) -> bool {
        let value = |p: PredId, z: usize| self.extents[p.index()][z];
        self.clauses.iter().all(|(c, lo)| {
            // instances x whose first in-domain position is y
            let range = if y == 0 { 0..=(-*lo) as usize } else { let x = y + (-*lo) as usize; x..=x };
            range.filter(|&x| x < self.len).all(|x| c.eval(x, self.len, &value))
        })
    }

    fn descend(&mut self, y: usize) -> Result<bool> {
        for mask in 0u64..1 << self.aux {
            self.steps = self.steps.wrapping_add(1);
            if self.steps % 1024 == 0 {
                self.limits.check()?;
            }
            for q in 0..self.aux {
                self.extents[self.base + q][y] = mask >> q & 1 == 1;
            }
            if self.instances_ok(y) && (y == 0 || self.descend(y - 1)?) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
