//! Compact second-order sentences read off the BDDs of a symbolic DFA.
//!
//! For `F` recognizing `φ^R`, the sentence labels each position `x` of `ρ`
//! with the state the reversed run of `F` is in before reading `ρ[x]`
//! (predicates `V_q`) and with the BDD nodes visited while computing the
//! next state (predicates `N_α`). Its models are exactly the traces of `φ`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bdd::Var;
use crate::error::Result;
use crate::logic::{Clause, Expr, Family, Guard, MonadicSentence, PredDecl, PredId, PredRole};
use crate::semantics::Trace;
use crate::symbolic::{Edge, EdgeTables, SymbolicDfa, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    Fussy,
    Sloppy,
}

impl Flavor {
    pub fn label(self) -> &'static str {
        match self {
            Flavor::Fussy => "fussy",
            Flavor::Sloppy => "sloppy",
        }
    }
}

#[derive(Debug, Clone)]
pub struct RevSentence {
    sentence: MonadicSentence,
    flavor: Flavor,
    k: usize,
    tables: EdgeTables,
    init: Vec<bool>,
}

impl RevSentence {
    pub fn sentence(&self) -> &MonadicSentence {
        &self.sentence
    }

    pub fn into_sentence(self) -> MonadicSentence {
        self.sentence
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u(&self) -> usize {
        self.tables.u()
    }

    pub fn tables(&self) -> &EdgeTables {
        &self.tables
    }

    /// Extents of every predicate (atoms, `V_q`, `N_α`) read off the run of
    /// `F` on `ρ^R`: position `x` carries the state before reading `ρ[x]`
    /// backwards and the nodes visited on that step.
    pub fn canonical_witness(&self, trace: &Trace) -> Vec<Vec<bool>> {
        let atoms = self.sentence.alphabet().len();
        let len = trace.len();
        let mut extents = vec![vec![false; len]; atoms + self.k + self.u()];
        for x in 0..len {
            for (i, ext) in extents.iter_mut().take(atoms).enumerate() {
                ext[x] = trace.holds(x, i);
            }
        }
        let mut state = self.init.clone();
        for x in (0..len).rev() {
            for q in 0..self.k {
                extents[atoms + q][x] = state[q];
            }
            let letter = trace.letters[x];
            let k = self.k;
            let cur = state.clone();
            let assignment = move |v: Var| {
                let v = v as usize;
                if v < k {
                    cur[v]
                } else {
                    letter >> (v - k) & 1 == 1
                }
            };
            let (visited, values) = self.tables.follow(&assignment);
            for (a, &seen) in visited.iter().enumerate() {
                extents[atoms + self.k + a][x] = seen;
            }
            state = values[..self.k].to_vec();
        }
        extents
    }
}

/// Builds `Rev(F)` (fussy) or `Rev_s(F)` (sloppy).
pub fn build_rev(f: &mut SymbolicDfa, flavor: Flavor) -> Result<RevSentence> {
    let bf = f.compose_acceptance()?;
    let mut roots: Vec<_> = f.eta().to_vec();
    roots.push(bf);
    let tables = f.extract_edges(&roots);
    let k = f.k();
    let alphabet = f.alphabet().clone();
    let atoms = alphabet.len();

    let mut preds: Vec<PredDecl> =
        alphabet.names().iter().map(|n| PredDecl { name: String::from(&**n), role: PredRole::Atom }).collect();
    let taken = |p: &str| alphabet.names().iter().any(|n| n.starts_with(p));
    let (mut vp, mut np) = (String::from("V"), String::from("N"));
    while taken(&vp) {
        vp.push('_');
    }
    while taken(&np) {
        np.push('_');
    }
    for q in 0..k {
        preds.push(PredDecl { name: format!("{vp}{q}"), role: PredRole::StateBit(q) });
    }
    for a in 0..tables.u() {
        preds.push(PredDecl { name: format!("{np}{}", a + 1), role: PredRole::BddNode(a) });
    }
    let v_pred = |q: usize| PredId((atoms + q) as u32);
    let n_pred = |a: usize| PredId((atoms + k + a) as u32);
    // `v ∈^d` at position x
    let lit = |var: Var, d: bool| -> Expr {
        let var = var as usize;
        if var < k {
            Expr::lit(v_pred(var), 0, d)
        } else {
            Expr::lit(PredId((var - k) as u32), 0, d)
        }
    };
    let via = |e: &Edge| Expr::And(vec![Expr::at(n_pred(e.from)), lit(e.var, e.value)]);

    let mut clauses = Vec::new();
    let mut push = |family, expr| clauses.push(Clause { family, expr });

    let init = f.initial().to_vec();
    let state: Vec<Expr> = (0..k).map(|q| Expr::lit(v_pred(q), 0, init[q])).collect();
    push(Family::Rinit, Expr::Guard(Guard::Last).implies(Expr::And(state)));

    let is_root: Vec<bool> = {
        let mut v = vec![false; tables.u()];
        for r in tables.roots() {
            if let Target::Node(a) = r {
                v[*a] = true;
            }
        }
        v
    };
    for a in 0..tables.u() {
        if flavor == Flavor::Fussy && !is_root[a] {
            let from: Vec<Expr> = tables.pre(a).iter().map(via).collect();
            push(Family::PreCon, Expr::at(n_pred(a)).implies(Expr::Or(from)));
        }
        for e in tables.post(a) {
            if let Target::Node(b) = e.to {
                push(Family::PostCon, via(&e).implies(Expr::at(n_pred(b))));
            }
        }
    }

    for (q, root) in tables.roots().iter().take(k).enumerate() {
        match *root {
            Target::Terminal(c) => {
                push(Family::Rterminal, Expr::Guard(Guard::NotFirst).implies(Expr::lit(v_pred(q), -1, c)));
            }
            Target::Node(_) => {
                for c in [false, true] {
                    for e in tables.pre_t(q, c) {
                        let body = Expr::And(vec![Expr::Guard(Guard::NotFirst), Expr::at(n_pred(e.from)), lit(e.var, e.value)]);
                        push(Family::Rterminal, body.implies(Expr::lit(v_pred(q), -1, c)));
                    }
                }
            }
        }
    }

    let fr = k;
    match (flavor, tables.roots()[fr]) {
        (Flavor::Fussy, Target::Terminal(true)) => {}
        (Flavor::Fussy, Target::Terminal(false)) => push(Family::Racc, Expr::Guard(Guard::First).implies(Expr::False)),
        (Flavor::Fussy, Target::Node(_)) => {
            let to_one: Vec<Expr> = tables.pre_t(fr, true).iter().map(via).collect();
            push(Family::Racc, Expr::Guard(Guard::First).implies(Expr::Or(to_one)));
        }
        (Flavor::Sloppy, Target::Terminal(true)) => {}
        (Flavor::Sloppy, Target::Terminal(false)) => push(Family::RaccSloppy, Expr::Guard(Guard::NotFirst)),
        (Flavor::Sloppy, Target::Node(_)) => {
            let to_zero: Vec<Expr> = tables.pre_t(fr, false).iter().map(via).collect();
            push(Family::RaccSloppy, Expr::Or(to_zero).implies(Expr::Guard(Guard::NotFirst)));
        }
    }

    for root in tables.roots() {
        if let Target::Node(a) = *root {
            push(Family::Roots, Expr::at(n_pred(a)));
        }
    }

    // each node right before the variable it tests, following the table order
    let mut keyed: Vec<((Var, bool, usize), PredId)> = Vec::new();
    for a in 0..atoms {
        keyed.push(((k as Var + a as Var, true, 0), PredId(a as u32)));
    }
    for q in 0..k {
        keyed.push(((q as Var, true, 0), v_pred(q)));
    }
    for (a, n) in tables.nodes().iter().enumerate() {
        keyed.push(((n.var, false, a), n_pred(a)));
    }
    keyed.sort_unstable_by_key(|e| e.0);
    let order = keyed.into_iter().map(|e| e.1).collect();
    let sentence = MonadicSentence::new(alphabet, preds, Expr::True, clauses)?.with_order(order);
    Ok(RevSentence { sentence, flavor, k, tables, init })
}
