//! Second-order sentences of the shape `∃Q₁…Qₘ (Init(0) ∧ ∀x Matrix)`.
//!
//! The matrix is a conjunction of clauses. Clauses mention predicates only
//! at `x-1`, `x` and `x+1`, either directly or through set terms (which may
//! reach further once expanded, e.g. nested shifts). [`MonadicSentence::lower`]
//! expands everything into [`PExpr`], the pointwise form used by the
//! evaluators and the compiler.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::formula::{Alphabet, Ltlf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredId(pub u32);

impl PredId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredRole {
    Atom,
    /// Truth set of a subformula.
    Subformula(Ltlf),
    /// State variable `x_q` of a symbolic DFA.
    StateBit(usize),
    /// Visits of BDD node `α` (index into the edge tables).
    BddNode(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredDecl {
    pub name: String,
    pub role: PredRole,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Guard {
    /// `x = 0`
    First,
    /// `x = last`
    Last,
    /// `x > 0`
    NotFirst,
    /// `x ≠ last`
    NotLast,
}

/// Second-order terms evaluated as position sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetTerm {
    Pred(PredId),
    /// All positions.
    Alive,
    Empty,
    /// `{last}`
    LastSingleton,
    Diff(Box<SetTerm>, Box<SetTerm>),
    Union(Box<SetTerm>, Box<SetTerm>),
    Inter(Box<SetTerm>, Box<SetTerm>),
    /// `S - 1 = {y : y+1 ∈ S}`
    ShiftBack(Box<SetTerm>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    True,
    False,
    /// `Q(x + offset)`
    At(PredId, i32),
    Guard(Guard),
    /// `x + offset ∈ term`
    Member(SetTerm, i32),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn at(p: PredId) -> Expr {
        Expr::At(p, 0)
    }
    pub fn negate(self) -> Expr {
        Expr::Not(Box::new(self))
    }
    pub fn implies(self, rhs: Expr) -> Expr {
        Expr::Implies(Box::new(self), Box::new(rhs))
    }
    pub fn iff(self, rhs: Expr) -> Expr {
        Expr::Iff(Box::new(self), Box::new(rhs))
    }
    /// `Q(x+o)` when `positive`, else `¬Q(x+o)`; the `∈^d` notation.
    pub fn lit(p: PredId, offset: i32, positive: bool) -> Expr {
        if positive {
            Expr::At(p, offset)
        } else {
            Expr::At(p, offset).negate()
        }
    }
}

/// Which conjunct family of an encoding a clause belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Definition,
    Rinit,
    PreCon,
    PostCon,
    Rterminal,
    Racc,
    RaccSloppy,
    Roots,
}

impl Family {
    pub fn label(self) -> &'static str {
        match self {
            Family::Definition => "t",
            Family::Rinit => "Rinit",
            Family::PreCon => "PreCon",
            Family::PostCon => "PostCon",
            Family::Rterminal => "Rterminal",
            Family::Racc => "Racc",
            Family::RaccSloppy => "Racc_s",
            Family::Roots => "roots",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub family: Family,
    pub expr: Expr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadicSentence {
    alphabet: Alphabet,
    preds: Vec<PredDecl>,
    init: Expr,
    clauses: Vec<Clause>,
    /// Suggested BDD variable order for the predicates, a permutation.
    order: Vec<PredId>,
}

/// Pointwise expression: predicates and position existence relative to `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PExpr {
    Const(bool),
    /// Position `x+o` exists and belongs to the predicate.
    At(PredId, i32),
    /// Position `x+o` exists.
    Exists(i32),
    Not(Box<PExpr>),
    And(Vec<PExpr>),
    Or(Vec<PExpr>),
    Implies(Box<PExpr>, Box<PExpr>),
    Iff(Box<PExpr>, Box<PExpr>),
}

impl PExpr {
    fn not(self) -> PExpr {
        match self {
            PExpr::Const(b) => PExpr::Const(!b),
            e => PExpr::Not(Box::new(e)),
        }
    }

    /// Smallest and largest offsets mentioned, both including 0.
    pub fn offset_range(&self) -> (i32, i32) {
        let mut range = (0, 0);
        self.visit_offsets(&mut |o| {
            range.0 = range.0.min(o);
            range.1 = range.1.max(o);
        });
        range
    }

    fn visit_offsets(&self, f: &mut dyn FnMut(i32)) {
        match self {
            PExpr::Const(_) => {}
            PExpr::At(_, o) | PExpr::Exists(o) => f(*o),
            PExpr::Not(a) => a.visit_offsets(f),
            PExpr::And(v) | PExpr::Or(v) => v.iter().for_each(|e| e.visit_offsets(f)),
            PExpr::Implies(a, b) | PExpr::Iff(a, b) => {
                a.visit_offsets(f);
                b.visit_offsets(f);
            }
        }
    }

    /// Every `(pred, offset)` read by the expression.
    pub fn visit_atoms(&self, f: &mut dyn FnMut(PredId, i32)) {
        match self {
            PExpr::Const(_) | PExpr::Exists(_) => {}
            PExpr::At(p, o) => f(*p, *o),
            PExpr::Not(a) => a.visit_atoms(f),
            PExpr::And(v) | PExpr::Or(v) => v.iter().for_each(|e| e.visit_atoms(f)),
            PExpr::Implies(a, b) | PExpr::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    /// Evaluates at position `x` of a domain of `len` positions; `value(p, y)`
    /// is only called for `y` inside the domain.
    pub fn eval(&self, x: usize, len: usize, value: &dyn Fn(PredId, usize) -> bool) -> bool {
        let pos = |o: i32| -> Option<usize> {
            let y = x as i64 + o as i64;
            (y >= 0 && (y as usize) < len).then_some(y as usize)
        };
        match self {
            PExpr::Const(b) => *b,
            PExpr::At(p, o) => pos(*o).is_some_and(|y| value(*p, y)),
            PExpr::Exists(o) => pos(*o).is_some(),
            PExpr::Not(a) => !a.eval(x, len, value),
            PExpr::And(v) => v.iter().all(|e| e.eval(x, len, value)),
            PExpr::Or(v) => v.iter().any(|e| e.eval(x, len, value)),
            PExpr::Implies(a, b) => !a.eval(x, len, value) || b.eval(x, len, value),
            PExpr::Iff(a, b) => a.eval(x, len, value) == b.eval(x, len, value),
        }
    }
}

fn lower_guard(g: Guard) -> PExpr {
    match g {
        Guard::First => PExpr::Exists(-1).not(),
        Guard::Last => PExpr::Exists(1).not(),
        Guard::NotFirst => PExpr::Exists(-1),
        Guard::NotLast => PExpr::Exists(1),
    }
}

/// `x + o ∈ term`.
pub fn lower_member(term: &SetTerm, o: i32) -> PExpr {
    match term {
        SetTerm::Pred(p) => PExpr::At(*p, o),
        SetTerm::Alive => PExpr::Exists(o),
        SetTerm::Empty => PExpr::Const(false),
        SetTerm::LastSingleton => PExpr::And(vec![PExpr::Exists(o), PExpr::Exists(o + 1).not()]),
        SetTerm::Diff(a, b) => PExpr::And(vec![lower_member(a, o), lower_member(b, o).not()]),
        SetTerm::Union(a, b) => PExpr::Or(vec![lower_member(a, o), lower_member(b, o)]),
        SetTerm::Inter(a, b) => PExpr::And(vec![lower_member(a, o), lower_member(b, o)]),
        SetTerm::ShiftBack(a) => PExpr::And(vec![PExpr::Exists(o), lower_member(a, o + 1)]),
    }
}

pub fn lower(e: &Expr) -> PExpr {
    match e {
        Expr::True => PExpr::Const(true),
        Expr::False => PExpr::Const(false),
        Expr::At(p, o) => PExpr::At(*p, *o),
        Expr::Guard(g) => lower_guard(*g),
        Expr::Member(t, o) => lower_member(t, *o),
        Expr::Not(a) => lower(a).not(),
        Expr::And(v) => PExpr::And(v.iter().map(lower).collect()),
        Expr::Or(v) => PExpr::Or(v.iter().map(lower).collect()),
        Expr::Implies(a, b) => PExpr::Implies(Box::new(lower(a)), Box::new(lower(b))),
        Expr::Iff(a, b) => PExpr::Iff(Box::new(lower(a)), Box::new(lower(b))),
    }
}

fn window_offsets(e: &Expr, f: &mut dyn FnMut(i32)) {
    match e {
        Expr::True | Expr::False | Expr::Guard(_) => {}
        Expr::At(_, o) | Expr::Member(_, o) => f(*o),
        Expr::Not(a) => window_offsets(a, f),
        Expr::And(v) | Expr::Or(v) => v.iter().for_each(|e| window_offsets(e, f)),
        Expr::Implies(a, b) | Expr::Iff(a, b) => {
            window_offsets(a, f);
            window_offsets(b, f);
        }
    }
}

fn check_preds(e: &Expr, count: usize) -> bool {
    fn term_ok(t: &SetTerm, count: usize) -> bool {
        match t {
            SetTerm::Pred(p) => p.index() < count,
            SetTerm::Alive | SetTerm::Empty | SetTerm::LastSingleton => true,
            SetTerm::ShiftBack(a) => term_ok(a, count),
            SetTerm::Diff(a, b) | SetTerm::Union(a, b) | SetTerm::Inter(a, b) => term_ok(a, count) && term_ok(b, count),
        }
    }
    match e {
        Expr::True | Expr::False | Expr::Guard(_) => true,
        Expr::At(p, _) => p.index() < count,
        Expr::Member(t, _) => term_ok(t, count),
        Expr::Not(a) => check_preds(a, count),
        Expr::And(v) | Expr::Or(v) => v.iter().all(|e| check_preds(e, count)),
        Expr::Implies(a, b) | Expr::Iff(a, b) => check_preds(a, count) && check_preds(b, count),
    }
}

impl MonadicSentence {
    /// Assembles a sentence; `preds` must start with one [`PredRole::Atom`]
    /// entry per atom of `alphabet`, in alphabet order. Every clause must stay
    /// inside the `x-1..x+1` window.
    pub fn new(alphabet: Alphabet, preds: Vec<PredDecl>, init: Expr, clauses: Vec<Clause>) -> Result<MonadicSentence> {
        assert!(
            preds.len() >= alphabet.len()
                && preds.iter().zip(alphabet.names()).all(|(p, n)| p.role == PredRole::Atom && *p.name == **n),
            "atom predicates must come first, in alphabet order"
        );
        let mut bad = None;
        for c in &clauses {
            window_offsets(&c.expr, &mut |o| {
                if !(-1..=1).contains(&o) {
                    bad = Some(o);
                }
            });
            assert!(check_preds(&c.expr, preds.len()), "clause mentions an undeclared predicate");
        }
        window_offsets(&init, &mut |o| {
            if o != 0 {
                bad = Some(o);
            }
        });
        if let Some(o) = bad {
            return Err(Error::WindowViolation(o));
        }
        let order = (0..preds.len() as u32).map(PredId).collect();
        Ok(MonadicSentence { alphabet, preds, init, clauses, order })
    }

    /// Replaces the suggested variable order; panics unless `order` lists
    /// every predicate exactly once.
    pub fn with_order(mut self, order: Vec<PredId>) -> MonadicSentence {
        let mut seen = vec![false; self.preds.len()];
        for p in &order {
            assert!(!core::mem::replace(&mut seen[p.index()], true), "repeated predicate in order");
        }
        assert!(seen.iter().all(|&b| b), "order misses a predicate");
        self.order = order;
        self
    }

    pub fn order(&self) -> &[PredId] {
        &self.order
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn preds(&self) -> &[PredDecl] {
        &self.preds
    }

    pub fn init(&self) -> &Expr {
        &self.init
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Quantified (non-atom) predicates.
    pub fn quantified(&self) -> &[PredDecl] {
        &self.preds[self.alphabet.len()..]
    }

    pub fn quantifier_count(&self) -> usize {
        self.preds.len() - self.alphabet.len()
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn atom_pred(&self, atom: usize) -> PredId {
        PredId(atom as u32)
    }

    /// Matrix clauses in pointwise form, preceded by `x = 0 → Init`.
    pub fn lower(&self) -> Vec<PExpr> {
        let mut out = Vec::with_capacity(self.clauses.len() + 1);
        out.push(PExpr::Implies(Box::new(lower_guard(Guard::First)), Box::new(lower(&self.init))));
        out.extend(self.clauses.iter().map(|c| lower(&c.expr)));
        out
    }

    /// Same sentence with the quantified predicates reordered: quantified
    /// predicate `i` moves to position `perm[i]`.
    pub fn permute_quantified(&self, perm: &[usize]) -> MonadicSentence {
        let base = self.alphabet.len();
        assert_eq!(perm.len(), self.quantifier_count());
        let map = |p: PredId| -> PredId {
            if p.index() < base {
                p
            } else {
                PredId((base + perm[p.index() - base]) as u32)
            }
        };
        let mut preds = self.preds.clone();
        for (i, d) in self.quantified().iter().enumerate() {
            preds[base + perm[i]] = d.clone();
        }
        MonadicSentence {
            alphabet: self.alphabet.clone(),
            preds,
            init: map_expr(&self.init, &map),
            clauses: self.clauses.iter().map(|c| Clause { family: c.family, expr: map_expr(&c.expr, &map) }).collect(),
            order: self.order.iter().map(|&p| map(p)).collect(),
        }
    }

    pub fn display_expr(&self, e: &Expr) -> String {
        let mut s = String::new();
        self.write_expr(e, &mut s);
        s
    }

    fn write_expr(&self, e: &Expr, out: &mut String) {
        let name = |p: &PredId| self.preds[p.index()].name.as_str();
        match e {
            Expr::True => out.push_str("true"),
            Expr::False => out.push_str("false"),
            Expr::At(p, o) => out.push_str(&format!("{}({})", name(p), point(*o))),
            Expr::Guard(g) => out.push_str(match g {
                Guard::First => "x = 0",
                Guard::Last => "x = last",
                Guard::NotFirst => "x > 0",
                Guard::NotLast => "x != last",
            }),
            Expr::Member(t, o) => {
                out.push_str(&point(*o));
                out.push_str(" in ");
                self.write_term(t, out);
            }
            Expr::Not(a) => {
                out.push('!');
                self.write_paren(a, out);
            }
            Expr::And(v) | Expr::Or(v) => {
                if v.is_empty() {
                    out.push_str(if matches!(e, Expr::And(_)) { "true" } else { "false" });
                }
                let sep = if matches!(e, Expr::And(_)) { " & " } else { " | " };
                for (i, a) in v.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    self.write_paren(a, out);
                }
            }
            Expr::Implies(a, b) | Expr::Iff(a, b) => {
                self.write_paren(a, out);
                out.push_str(if matches!(e, Expr::Implies(..)) { " -> " } else { " <-> " });
                self.write_paren(b, out);
            }
        }
    }

    fn write_paren(&self, e: &Expr, out: &mut String) {
        let simple = matches!(e, Expr::True | Expr::False | Expr::At(..) | Expr::Not(_))
            || matches!(e, Expr::And(v) | Expr::Or(v) if v.len() <= 1);
        if simple {
            self.write_expr(e, out);
        } else {
            out.push('(');
            self.write_expr(e, out);
            out.push(')');
        }
    }

    fn write_term(&self, t: &SetTerm, out: &mut String) {
        match t {
            SetTerm::Pred(p) => out.push_str(&self.preds[p.index()].name),
            SetTerm::Alive => out.push_str("ALIVE"),
            SetTerm::Empty => out.push_str("empty"),
            SetTerm::LastSingleton => out.push_str("{last}"),
            SetTerm::ShiftBack(a) => {
                out.push('(');
                self.write_term(a, out);
                out.push_str(" - 1)");
            }
            SetTerm::Diff(a, b) | SetTerm::Union(a, b) | SetTerm::Inter(a, b) => {
                let op = match t {
                    SetTerm::Diff(..) => " \\ ",
                    SetTerm::Union(..) => " union ",
                    _ => " inter ",
                };
                out.push('(');
                self.write_term(a, out);
                out.push_str(op);
                self.write_term(b, out);
                out.push(')');
            }
        }
    }
}

fn point(o: i32) -> String {
    match o {
        0 => "x".into(),
        o if o > 0 => format!("x+{o}"),
        o => format!("x{o}"),
    }
}

fn map_term(t: &SetTerm, map: &dyn Fn(PredId) -> PredId) -> SetTerm {
    let b = |a: &SetTerm| Box::new(map_term(a, map));
    match t {
        SetTerm::Pred(p) => SetTerm::Pred(map(*p)),
        SetTerm::Alive => SetTerm::Alive,
        SetTerm::Empty => SetTerm::Empty,
        SetTerm::LastSingleton => SetTerm::LastSingleton,
        SetTerm::Diff(x, y) => SetTerm::Diff(b(x), b(y)),
        SetTerm::Union(x, y) => SetTerm::Union(b(x), b(y)),
        SetTerm::Inter(x, y) => SetTerm::Inter(b(x), b(y)),
        SetTerm::ShiftBack(x) => SetTerm::ShiftBack(b(x)),
    }
}

fn map_expr(e: &Expr, map: &dyn Fn(PredId) -> PredId) -> Expr {
    let b = |a: &Expr| Box::new(map_expr(a, map));
    match e {
        Expr::True => Expr::True,
        Expr::False => Expr::False,
        Expr::At(p, o) => Expr::At(map(*p), *o),
        Expr::Guard(g) => Expr::Guard(*g),
        Expr::Member(t, o) => Expr::Member(map_term(t, map), *o),
        Expr::Not(a) => Expr::Not(b(a)),
        Expr::And(v) => Expr::And(v.iter().map(|e| map_expr(e, map)).collect()),
        Expr::Or(v) => Expr::Or(v.iter().map(|e| map_expr(e, map)).collect()),
        Expr::Implies(x, y) => Expr::Implies(b(x), b(y)),
        Expr::Iff(x, y) => Expr::Iff(b(x), b(y)),
    }
}

/// Extent of a set term over a domain of `len` positions.
pub fn eval_set_term(t: &SetTerm, len: usize, extent: &dyn Fn(PredId) -> Vec<bool>) -> Vec<bool> {
    match t {
        SetTerm::Pred(p) => extent(*p),
        SetTerm::Alive => vec![true; len],
        SetTerm::Empty => vec![false; len],
        SetTerm::LastSingleton => (0..len).map(|x| x + 1 == len).collect(),
        SetTerm::Diff(a, b) | SetTerm::Union(a, b) | SetTerm::Inter(a, b) => {
            let (a, b) = (eval_set_term(a, len, extent), eval_set_term(b, len, extent));
            a.iter()
                .zip(&b)
                .map(|(&p, &q)| match t {
                    SetTerm::Diff(..) => p && !q,
                    SetTerm::Union(..) => p || q,
                    _ => p && q,
                })
                .collect()
        }
        SetTerm::ShiftBack(a) => {
            let a = eval_set_term(a, len, extent);
            (0..len).map(|x| x + 1 < len && a[x + 1]).collect()
        }
    }
}

impl fmt::Display for MonadicSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q: Vec<&str> = self.quantified().iter().map(|d| d.name.as_str()).collect();
        writeln!(f, "exists {}", if q.is_empty() { "-".into() } else { q.join(" ") })?;
        writeln!(f, "init: {}", self.display_expr(&self.init))?;
        for c in &self.clauses {
            writeln!(f, "{}: {}", c.family.label(), self.display_expr(&c.expr))?;
        }
        Ok(())
    }
}
