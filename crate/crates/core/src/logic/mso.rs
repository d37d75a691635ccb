//! The six second-order encodings of an LTLf formula.
//!
//! Full variants quantify one predicate per non-atomic subformula and
//! define each with a local clause; lean variants quantify only `U`/`R`
//! subformulas and express everything else through set terms over them.
//! Sloppy variants relax each `↔` to `→`, which is sound only in NNF.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

use super::sentence::{Clause, Expr, Family, Guard, MonadicSentence, PredDecl, PredId, PredRole, SetTerm};
use crate::error::{Error, Result};
use crate::formula::{Alphabet, Ltlf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalForm {
    Bnf,
    Nnf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    Fussy,
    Sloppy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VarForm {
    Full,
    Lean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncodingConfig {
    normal: NormalForm,
    constraint: Constraint,
    vars: VarForm,
}

impl EncodingConfig {
    /// Rejects sloppy constraints over BNF input, where dropping the
    /// backward implication under a negation loses soundness.
    pub fn new(normal: NormalForm, constraint: Constraint, vars: VarForm) -> Result<EncodingConfig> {
        if normal == NormalForm::Bnf && constraint == Constraint::Sloppy {
            return Err(Error::InvalidConfig("sloppy constraints require NNF input"));
        }
        Ok(EncodingConfig { normal, constraint, vars })
    }

    /// Builds any combination, including the unsound one. For fault injection.
    pub fn new_unchecked(normal: NormalForm, constraint: Constraint, vars: VarForm) -> EncodingConfig {
        EncodingConfig { normal, constraint, vars }
    }

    /// The six valid configurations.
    pub fn all() -> Vec<EncodingConfig> {
        let mut out = Vec::new();
        for normal in [NormalForm::Bnf, NormalForm::Nnf] {
            for constraint in [Constraint::Fussy, Constraint::Sloppy] {
                for vars in [VarForm::Full, VarForm::Lean] {
                    if let Ok(c) = EncodingConfig::new(normal, constraint, vars) {
                        out.push(c);
                    }
                }
            }
        }
        out
    }

    pub fn normal(&self) -> NormalForm {
        self.normal
    }
    pub fn constraint(&self) -> Constraint {
        self.constraint
    }
    pub fn vars(&self) -> VarForm {
        self.vars
    }

    pub fn is_valid(&self) -> bool {
        !(self.normal == NormalForm::Bnf && self.constraint == Constraint::Sloppy)
    }

    /// Puts `φ` in this configuration's normal form.
    pub fn normalize(&self, f: &Ltlf) -> Ltlf {
        match self.normal {
            NormalForm::Bnf => f.to_bnf(),
            NormalForm::Nnf => f.to_nnf(),
        }
    }

    pub fn label(&self) -> String {
        format!("{self}")
    }
}

impl fmt::Display for EncodingConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self.normal {
            NormalForm::Bnf => "bnf",
            NormalForm::Nnf => "nnf",
        };
        let c = match self.constraint {
            Constraint::Fussy => "fussy",
            Constraint::Sloppy => "sloppy",
        };
        let v = match self.vars {
            VarForm::Full => "full",
            VarForm::Lean => "lean",
        };
        write!(f, "{n}-{c}-{v}")
    }
}

impl core::str::FromStr for EncodingConfig {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split('-').collect();
        let [n, c, v] = parts[..] else {
            return Err(Error::InvalidConfig("expected <norm>-<constraint>-<vars>"));
        };
        let normal = match n {
            "bnf" => NormalForm::Bnf,
            "nnf" => NormalForm::Nnf,
            _ => return Err(Error::InvalidConfig("normal form must be bnf or nnf")),
        };
        let constraint = match c {
            "fussy" => Constraint::Fussy,
            "sloppy" => Constraint::Sloppy,
            _ => return Err(Error::InvalidConfig("constraint must be fussy or sloppy")),
        };
        let vars = match v {
            "full" => VarForm::Full,
            "lean" => VarForm::Lean,
            _ => return Err(Error::InvalidConfig("variables must be full or lean")),
        };
        EncodingConfig::new(normal, constraint, vars)
    }
}

/// Encodes `φ`, which must already be in the configuration's normal form.
pub fn encode_mso(f: &Ltlf, cfg: EncodingConfig) -> Result<MonadicSentence> {
    if !cfg.is_valid() {
        return Err(Error::InvalidConfig("sloppy constraints require NNF input"));
    }
    let ok = match cfg.normal {
        NormalForm::Bnf => f.is_bnf(),
        NormalForm::Nnf => f.is_nnf(),
    };
    if !ok {
        return Err(Error::NotInNormalForm(match cfg.normal {
            NormalForm::Bnf => "BNF",
            NormalForm::Nnf => "NNF",
        }));
    }
    Ok(encode_mso_unchecked(f, cfg))
}

/// Encodes without validating the configuration or the input's normal form.
pub fn encode_mso_unchecked(f: &Ltlf, cfg: EncodingConfig) -> MonadicSentence {
    let alphabet = f.atoms();
    let closure = f.closure();
    let mut enc = Encoder::new(&alphabet, cfg.constraint);
    match cfg.vars {
        VarForm::Full => {
            for g in closure.non_atomic() {
                enc.declare(g);
            }
            for g in closure.non_atomic() {
                let q = enc.pred_of[g];
                let body = enc.full_body(g);
                enc.define(q, body);
            }
            let init = enc.full_at(f, 0);
            enc.finish(init)
        }
        VarForm::Lean => {
            for g in closure.members().iter().filter(|g| matches!(g, Ltlf::Until(..) | Ltlf::Release(..))) {
                enc.declare(g);
            }
            let temporal: Vec<Ltlf> = closure.members().iter().filter(|g| enc.pred_of.contains_key(*g)).cloned().collect();
            for g in &temporal {
                let q = enc.pred_of[g];
                let body = enc.lean_body(g);
                enc.define(q, body);
            }
            let init = Expr::Member(enc.lean(f), 0);
            enc.finish(init)
        }
    }
}

struct Encoder<'a> {
    alphabet: &'a Alphabet,
    constraint: Constraint,
    preds: Vec<PredDecl>,
    pred_of: HashMap<Ltlf, PredId>,
    clauses: Vec<Clause>,
    prefix: String,
}

impl<'a> Encoder<'a> {
    fn new(alphabet: &'a Alphabet, constraint: Constraint) -> Self {
        let preds = alphabet.names().iter().map(|n| PredDecl { name: String::from(&**n), role: PredRole::Atom }).collect();
        let mut prefix = String::from("Q");
        while alphabet.names().iter().any(|n| n.starts_with(prefix.as_str())) {
            prefix.push('_');
        }
        Encoder { alphabet, constraint, preds, pred_of: HashMap::new(), clauses: Vec::new(), prefix }
    }

    fn declare(&mut self, g: &Ltlf) {
        let id = PredId(self.preds.len() as u32);
        let name = format!("{}{}", self.prefix, self.preds.len() - self.alphabet.len() + 1);
        self.preds.push(PredDecl { name, role: PredRole::Subformula(g.clone()) });
        self.pred_of.insert(g.clone(), id);
    }

    fn define(&mut self, q: PredId, body: Expr) {
        let head = Expr::at(q);
        let expr = match self.constraint {
            Constraint::Fussy => head.iff(body),
            Constraint::Sloppy => head.implies(body),
        };
        self.clauses.push(Clause { family: Family::Definition, expr });
    }

    fn finish(self, init: Expr) -> MonadicSentence {
        MonadicSentence::new(self.alphabet.clone(), self.preds, init, self.clauses)
            .expect("encodings stay inside the window")
    }

    fn atom(&self, name: &str) -> PredId {
        PredId(self.alphabet.index_of(name).expect("atom of the formula") as u32)
    }

    /// `Q_θ(x+o)` with constants and atoms resolved.
    fn full_at(&self, g: &Ltlf, o: i32) -> Expr {
        match g {
            Ltlf::True => Expr::True,
            Ltlf::False => Expr::False,
            Ltlf::Atom(a) => Expr::At(self.atom(a), o),
            _ => Expr::At(self.pred_of[g], o),
        }
    }

    fn full_body(&self, g: &Ltlf) -> Expr {
        let at = |h: &Ltlf, o| self.full_at(h, o);
        match g {
            Ltlf::Not(a) => at(a, 0).negate(),
            Ltlf::And(a, b) => Expr::And(vec![at(a, 0), at(b, 0)]),
            Ltlf::Or(a, b) => Expr::Or(vec![at(a, 0), at(b, 0)]),
            Ltlf::Implies(a, b) => at(a, 0).implies(at(b, 0)),
            Ltlf::Next(a) => Expr::And(vec![Expr::Guard(Guard::NotLast), at(a, 1)]),
            Ltlf::WeakNext(a) => Expr::Or(vec![Expr::Guard(Guard::Last), at(a, 1)]),
            Ltlf::Until(a, b) => Expr::Or(vec![
                at(b, 0),
                Expr::And(vec![Expr::Guard(Guard::NotLast), at(a, 0), Expr::At(self.pred_of[g], 1)]),
            ]),
            Ltlf::Release(a, b) => Expr::And(vec![
                at(b, 0),
                Expr::Or(vec![Expr::Guard(Guard::Last), at(a, 0), Expr::At(self.pred_of[g], 1)]),
            ]),
            Ltlf::True | Ltlf::False | Ltlf::Atom(_) => unreachable!("atomic members get no predicate"),
        }
    }

    /// The set term `lean(θ)`.
    fn lean(&self, g: &Ltlf) -> SetTerm {
        let b = |h: &Ltlf| Box::new(self.lean(h));
        match g {
            Ltlf::True => SetTerm::Alive,
            Ltlf::False => SetTerm::Empty,
            Ltlf::Atom(a) => SetTerm::Pred(self.atom(a)),
            Ltlf::Not(a) => SetTerm::Diff(Box::new(SetTerm::Alive), b(a)),
            Ltlf::And(a, c) => SetTerm::Inter(b(a), b(c)),
            Ltlf::Or(a, c) => SetTerm::Union(b(a), b(c)),
            Ltlf::Implies(a, c) => SetTerm::Union(Box::new(SetTerm::Diff(Box::new(SetTerm::Alive), b(a))), b(c)),
            Ltlf::Next(a) => SetTerm::Diff(Box::new(SetTerm::ShiftBack(b(a))), Box::new(SetTerm::LastSingleton)),
            Ltlf::WeakNext(a) => SetTerm::Union(Box::new(SetTerm::ShiftBack(b(a))), Box::new(SetTerm::LastSingleton)),
            Ltlf::Until(..) | Ltlf::Release(..) => SetTerm::Pred(self.pred_of[g]),
        }
    }

    fn lean_body(&self, g: &Ltlf) -> Expr {
        let m = |h: &Ltlf| Expr::Member(self.lean(h), 0);
        let next = Expr::At(self.pred_of[g], 1);
        match g {
            Ltlf::Until(a, b) => {
                Expr::Or(vec![m(b), Expr::And(vec![Expr::Guard(Guard::NotLast), m(a), next])])
            }
            Ltlf::Release(a, b) => Expr::And(vec![m(b), Expr::Or(vec![Expr::Guard(Guard::Last), m(a), next])]),
            _ => unreachable!("lean predicates are U/R only"),
        }
    }
}

/// `lean(θ)` as a set term of `s`, for any subformula of the encoded formula.
pub fn lean_term(s: &MonadicSentence, g: &Ltlf) -> Result<SetTerm> {
    let mut pred_of = HashMap::new();
    for (i, d) in s.preds().iter().enumerate() {
        if let PredRole::Subformula(h) = &d.role {
            pred_of.insert(h.clone(), PredId(i as u32));
        }
    }
    let enc = Encoder {
        alphabet: s.alphabet(),
        constraint: Constraint::Fussy,
        preds: Vec::new(),
        pred_of,
        clauses: Vec::new(),
        prefix: String::new(),
    };
    let mut missing = false;
    check_lean(g, &enc, &mut missing);
    if missing {
        return Err(Error::WitnessMismatch);
    }
    Ok(enc.lean(g))
}

fn check_lean(g: &Ltlf, enc: &Encoder<'_>, missing: &mut bool) {
    match g {
        Ltlf::Atom(a) => *missing |= enc.alphabet.index_of(a).is_none(),
        Ltlf::Until(..) | Ltlf::Release(..) => *missing |= !enc.pred_of.contains_key(g),
        _ => g.children().iter().for_each(|h| check_lean(h, enc, missing)),
    }
}
