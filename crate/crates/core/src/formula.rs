//! Abstract syntax for LTLf and PLTLf, normal forms, closures and reversal.
//!
//! Children are reference counted, so identical subformulas built once are
//! shared, and equality/hashing is structural. That is all the "interning" the
//! rest of the crate needs: closures and predicate numbering key on
//! structural identity.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;

pub type Name = Arc<str>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ltlf {
    True,
    False,
    Atom(Name),
    Not(Arc<Ltlf>),
    And(Arc<Ltlf>, Arc<Ltlf>),
    Or(Arc<Ltlf>, Arc<Ltlf>),
    Implies(Arc<Ltlf>, Arc<Ltlf>),
    Next(Arc<Ltlf>),
    WeakNext(Arc<Ltlf>),
    Until(Arc<Ltlf>, Arc<Ltlf>),
    Release(Arc<Ltlf>, Arc<Ltlf>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pltlf {
    True,
    False,
    Atom(Name),
    Not(Arc<Pltlf>),
    And(Arc<Pltlf>, Arc<Pltlf>),
    Or(Arc<Pltlf>, Arc<Pltlf>),
    Yesterday(Arc<Pltlf>),
    Since(Arc<Pltlf>, Arc<Pltlf>),
}

impl Ltlf {
    pub fn atom(name: &str) -> Ltlf {
        Ltlf::Atom(Name::from(name))
    }
    pub fn not(self) -> Ltlf {
        Ltlf::Not(Arc::new(self))
    }
    pub fn and(self, rhs: Ltlf) -> Ltlf {
        Ltlf::And(Arc::new(self), Arc::new(rhs))
    }
    pub fn or(self, rhs: Ltlf) -> Ltlf {
        Ltlf::Or(Arc::new(self), Arc::new(rhs))
    }
    pub fn implies(self, rhs: Ltlf) -> Ltlf {
        Ltlf::Implies(Arc::new(self), Arc::new(rhs))
    }
    pub fn next(self) -> Ltlf {
        Ltlf::Next(Arc::new(self))
    }
    pub fn weak_next(self) -> Ltlf {
        Ltlf::WeakNext(Arc::new(self))
    }
    pub fn until(self, rhs: Ltlf) -> Ltlf {
        Ltlf::Until(Arc::new(self), Arc::new(rhs))
    }
    pub fn release(self, rhs: Ltlf) -> Ltlf {
        Ltlf::Release(Arc::new(self), Arc::new(rhs))
    }
    /// `F φ`, i.e. `⊤ U φ`.
    pub fn eventually(self) -> Ltlf {
        Ltlf::True.until(self)
    }
    /// `G φ`, i.e. `⊥ R φ`.
    pub fn globally(self) -> Ltlf {
        Ltlf::False.release(self)
    }

    /// Conjunction of a non-empty list, associated to the left.
    pub fn all(items: impl IntoIterator<Item = Ltlf>) -> Ltlf {
        let mut it = items.into_iter();
        let first = it.next().unwrap_or(Ltlf::True);
        it.fold(first, Ltlf::and)
    }

    pub fn children(&self) -> Children<'_, Ltlf> {
        use Ltlf::*;
        match self {
            True | False | Atom(_) => Children::None,
            Not(a) | Next(a) | WeakNext(a) => Children::One(a),
            And(a, b) | Or(a, b) | Implies(a, b) | Until(a, b) | Release(a, b) => Children::Two(a, b),
        }
    }

    /// Nesting depth of operators; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self.children() {
            Children::None => 0,
            Children::One(a) => 1 + a.depth(),
            Children::Two(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn size(&self) -> usize {
        match self.children() {
            Children::None => 1,
            Children::One(a) => 1 + a.size(),
            Children::Two(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn is_nnf(&self) -> bool {
        match self {
            Ltlf::Not(a) => matches!(**a, Ltlf::Atom(_)),
            Ltlf::Implies(..) => false,
            _ => self.children().iter().all(|c| c.is_nnf()),
        }
    }

    pub fn is_bnf(&self) -> bool {
        match self {
            Ltlf::Implies(..) | Ltlf::WeakNext(_) | Ltlf::Release(..) => false,
            _ => self.children().iter().all(|c| c.is_bnf()),
        }
    }

    /// Pushes negations down to atoms, introducing `N` and `R`.
    pub fn to_nnf(&self) -> Ltlf {
        self.nnf(false)
    }

    fn nnf(&self, neg: bool) -> Ltlf {
        use Ltlf::*;
        match (self, neg) {
            (True, false) | (False, true) => True,
            (True, true) | (False, false) => False,
            (Atom(_), false) => self.clone(),
            (Atom(_), true) => self.clone().not(),
            (Not(a), _) => a.nnf(!neg),
            (And(a, b), false) => a.nnf(false).and(b.nnf(false)),
            (And(a, b), true) => a.nnf(true).or(b.nnf(true)),
            (Or(a, b), false) => a.nnf(false).or(b.nnf(false)),
            (Or(a, b), true) => a.nnf(true).and(b.nnf(true)),
            (Implies(a, b), false) => a.nnf(true).or(b.nnf(false)),
            (Implies(a, b), true) => a.nnf(false).and(b.nnf(true)),
            (Next(a), false) => a.nnf(false).next(),
            (Next(a), true) => a.nnf(true).weak_next(),
            (WeakNext(a), false) => a.nnf(false).weak_next(),
            (WeakNext(a), true) => a.nnf(true).next(),
            (Until(a, b), false) => a.nnf(false).until(b.nnf(false)),
            (Until(a, b), true) => a.nnf(true).release(b.nnf(true)),
            (Release(a, b), false) => a.nnf(false).release(b.nnf(false)),
            (Release(a, b), true) => a.nnf(true).until(b.nnf(true)),
        }
    }

    /// Rewrites into `¬ ∧ ∨ X U` by the literal dual definitions.
    pub fn to_bnf(&self) -> Ltlf {
        use Ltlf::*;
        match self {
            True | False | Atom(_) => self.clone(),
            Not(a) => a.to_bnf().not(),
            And(a, b) => a.to_bnf().and(b.to_bnf()),
            Or(a, b) => a.to_bnf().or(b.to_bnf()),
            Implies(a, b) => a.to_bnf().not().or(b.to_bnf()),
            Next(a) => a.to_bnf().next(),
            WeakNext(a) => a.to_bnf().not().next().not(),
            Until(a, b) => a.to_bnf().until(b.to_bnf()),
            Release(a, b) => a.to_bnf().not().until(b.to_bnf().not()).not(),
        }
    }

    /// The past formula `φ^R` whose models are the reversed models of `self`.
    pub fn reverse_to_past(&self) -> Pltlf {
        fn rev(f: &Ltlf) -> Pltlf {
            use Ltlf::*;
            let arc = |f: &Ltlf| Arc::new(rev(f));
            match f {
                True => Pltlf::True,
                False => Pltlf::False,
                Atom(n) => Pltlf::Atom(n.clone()),
                Not(a) => Pltlf::Not(arc(a)),
                And(a, b) => Pltlf::And(arc(a), arc(b)),
                Or(a, b) => Pltlf::Or(arc(a), arc(b)),
                Next(a) => Pltlf::Yesterday(arc(a)),
                Until(a, b) => Pltlf::Since(arc(a), arc(b)),
                Implies(..) | WeakNext(_) | Release(..) => unreachable!("input is in BNF"),
            }
        }
        rev(&self.to_bnf())
    }

    pub fn atoms(&self) -> Alphabet {
        let mut names = Vec::new();
        self.collect_atoms(&mut names);
        Alphabet::new(names)
    }

    fn collect_atoms(&self, out: &mut Vec<Name>) {
        match self {
            Ltlf::Atom(n) => out.push(n.clone()),
            _ => self.children().iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    pub fn closure(&self) -> Closure<Ltlf> {
        Closure::of(self)
    }
}

impl Pltlf {
    pub fn atom(name: &str) -> Pltlf {
        Pltlf::Atom(Name::from(name))
    }
    pub fn not(self) -> Pltlf {
        Pltlf::Not(Arc::new(self))
    }
    pub fn and(self, rhs: Pltlf) -> Pltlf {
        Pltlf::And(Arc::new(self), Arc::new(rhs))
    }
    pub fn or(self, rhs: Pltlf) -> Pltlf {
        Pltlf::Or(Arc::new(self), Arc::new(rhs))
    }
    pub fn yesterday(self) -> Pltlf {
        Pltlf::Yesterday(Arc::new(self))
    }
    pub fn since(self, rhs: Pltlf) -> Pltlf {
        Pltlf::Since(Arc::new(self), Arc::new(rhs))
    }

    pub fn children(&self) -> Children<'_, Pltlf> {
        use Pltlf::*;
        match self {
            True | False | Atom(_) => Children::None,
            Not(a) | Yesterday(a) => Children::One(a),
            And(a, b) | Or(a, b) | Since(a, b) => Children::Two(a, b),
        }
    }

    pub fn depth(&self) -> usize {
        match self.children() {
            Children::None => 0,
            Children::One(a) => 1 + a.depth(),
            Children::Two(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    pub fn atoms(&self) -> Alphabet {
        let mut names = Vec::new();
        self.collect_atoms(&mut names);
        Alphabet::new(names)
    }

    fn collect_atoms(&self, out: &mut Vec<Name>) {
        match self {
            Pltlf::Atom(n) => out.push(n.clone()),
            _ => self.children().iter().for_each(|c| c.collect_atoms(out)),
        }
    }

    pub fn closure(&self) -> Closure<Pltlf> {
        Closure::of(self)
    }
}

pub enum Children<'a, T> {
    None,
    One(&'a T),
    Two(&'a T, &'a T),
}

impl<'a, T> Children<'a, T> {
    pub fn iter(&self) -> impl Iterator<Item = &'a T> {
        let (a, b) = match *self {
            Children::None => (None, None),
            Children::One(a) => (Some(a), None),
            Children::Two(a, b) => (Some(a), Some(b)),
        };
        a.into_iter().chain(b)
    }
}

/// Common view of both syntaxes used by [`Closure`].
pub trait Syntax: Clone + Eq + core::hash::Hash {
    fn subterms(&self) -> Children<'_, Self>;
    /// Atoms and the two constants.
    fn is_atomic(&self) -> bool;
    /// `U`, `R` and `S` nodes.
    fn is_binary_temporal(&self) -> bool;
}

impl Syntax for Ltlf {
    fn subterms(&self) -> Children<'_, Self> {
        self.children()
    }
    fn is_atomic(&self) -> bool {
        matches!(self, Ltlf::True | Ltlf::False | Ltlf::Atom(_))
    }
    fn is_binary_temporal(&self) -> bool {
        matches!(self, Ltlf::Until(..) | Ltlf::Release(..))
    }
}

impl Syntax for Pltlf {
    fn subterms(&self) -> Children<'_, Self> {
        self.children()
    }
    fn is_atomic(&self) -> bool {
        matches!(self, Pltlf::True | Pltlf::False | Pltlf::Atom(_))
    }
    fn is_binary_temporal(&self) -> bool {
        matches!(self, Pltlf::Since(..))
    }
}

/// Distinct subformulas in post-order of first occurrence.
#[derive(Debug, Clone)]
pub struct Closure<T> {
    members: Vec<T>,
    index: HashMap<T, usize>,
}

impl<T: Syntax> Closure<T> {
    pub fn of(root: &T) -> Closure<T> {
        let mut c = Closure { members: Vec::new(), index: HashMap::new() };
        c.visit(root);
        c
    }

    fn visit(&mut self, f: &T) {
        if self.index.contains_key(f) {
            return;
        }
        for child in f.subterms().iter() {
            self.visit(child);
        }
        self.index.insert(f.clone(), self.members.len());
        self.members.push(f.clone());
    }

    pub fn members(&self) -> &[T] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, f: &T) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn non_atomic(&self) -> impl Iterator<Item = &T> {
        self.members.iter().filter(|f| !f.is_atomic())
    }

    /// Number of non-atomic members.
    pub fn m(&self) -> usize {
        self.non_atomic().count()
    }

    /// Number of `U`/`R` (or `S`) members.
    pub fn n(&self) -> usize {
        self.members.iter().filter(|f| f.is_binary_temporal()).count()
    }
}

/// Sorted, duplicate-free atom names; atom `i` is bit `i` of a letter.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<Name>,
}

impl Alphabet {
    pub fn new(mut names: Vec<Name>) -> Alphabet {
        names.sort();
        names.dedup();
        Alphabet { names }
    }

    pub fn from_strs<'a>(names: impl IntoIterator<Item = &'a str>) -> Alphabet {
        Alphabet::new(names.into_iter().map(Name::from).collect())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.binary_search_by(|n| (**n).cmp(name)).ok()
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::new(self.names.iter().chain(&other.names).cloned().collect())
    }

    /// Number of letters, `2^|P|`.
    pub fn letter_count(&self) -> usize {
        1usize << self.names.len()
    }
}

// Printing. Precedence from loosest to tightest:
// `->` (right), `|`, `&`, `U R S` (right), unary, primary.

const P_IMPLIES: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_BIN: u8 = 4;
const P_UNARY: u8 = 5;
const P_ATOM: u8 = 6;

/// Printer options; `Display` uses the default (minimal parentheses,
/// `F`/`G` re-sugared).
#[derive(Debug, Clone, Copy)]
pub struct PrintOptions {
    pub full_parens: bool,
    pub sugar: bool,
}

impl Default for PrintOptions {
    fn default() -> Self {
        PrintOptions { full_parens: false, sugar: true }
    }
}

enum View<'a, T> {
    Leaf(&'a str),
    Unary(&'a str, &'a T),
    Binary(&'a str, u8, bool, &'a T, &'a T),
}

trait Printable: Sized {
    fn view(&self, sugar: bool) -> View<'_, Self>;
}

fn prec<T: Printable>(v: &View<'_, T>) -> u8 {
    match v {
        View::Leaf(_) => P_ATOM,
        View::Unary(..) => P_UNARY,
        View::Binary(_, p, ..) => *p,
    }
}

fn write_node<T: Printable>(f: &T, min: u8, opts: PrintOptions, out: &mut dyn fmt::Write) -> fmt::Result {
    let v = f.view(opts.sugar);
    let p = prec(&v);
    let parens = match v {
        View::Leaf(_) => false,
        View::Unary(..) => p < min,
        View::Binary(..) => opts.full_parens || p < min,
    };
    if parens {
        out.write_char('(')?;
    }
    match v {
        View::Leaf(s) => out.write_str(s)?,
        View::Unary(op, a) => {
            out.write_str(op)?;
            if op != "!" {
                out.write_char(' ')?;
            }
            write_node(a, P_UNARY, opts, out)?;
        }
        View::Binary(op, p, right_assoc, a, b) => {
            let (lmin, rmin) = if right_assoc { (p + 1, p) } else { (p, p + 1) };
            write_node(a, lmin, opts, out)?;
            write!(out, " {op} ")?;
            write_node(b, rmin, opts, out)?;
        }
    }
    if parens {
        out.write_char(')')?;
    }
    Ok(())
}

impl Printable for Ltlf {
    fn view(&self, sugar: bool) -> View<'_, Self> {
        use Ltlf::*;
        match self {
            True => View::Leaf("true"),
            False => View::Leaf("false"),
            Atom(n) => View::Leaf(n),
            Not(a) => View::Unary("!", a),
            Next(a) => View::Unary("X", a),
            WeakNext(a) => View::Unary("N", a),
            Until(t, a) if sugar && **t == True => View::Unary("F", a),
            Release(f, a) if sugar && **f == False => View::Unary("G", a),
            And(a, b) => View::Binary("&", P_AND, false, a, b),
            Or(a, b) => View::Binary("|", P_OR, false, a, b),
            Implies(a, b) => View::Binary("->", P_IMPLIES, true, a, b),
            Until(a, b) => View::Binary("U", P_BIN, true, a, b),
            Release(a, b) => View::Binary("R", P_BIN, true, a, b),
        }
    }
}

impl Printable for Pltlf {
    fn view(&self, _sugar: bool) -> View<'_, Self> {
        use Pltlf::*;
        match self {
            True => View::Leaf("true"),
            False => View::Leaf("false"),
            Atom(n) => View::Leaf(n),
            Not(a) => View::Unary("!", a),
            Yesterday(a) => View::Unary("Y", a),
            And(a, b) => View::Binary("&", P_AND, false, a, b),
            Or(a, b) => View::Binary("|", P_OR, false, a, b),
            Since(a, b) => View::Binary("S", P_BIN, true, a, b),
        }
    }
}

impl Ltlf {
    pub fn to_string_with(&self, opts: PrintOptions) -> String {
        let mut s = String::new();
        write_node(self, 0, opts, &mut s).expect("writing to a String");
        s
    }
}

impl Pltlf {
    pub fn to_string_with(&self, opts: PrintOptions) -> String {
        let mut s = String::new();
        write_node(self, 0, opts, &mut s).expect("writing to a String");
        s
    }
}

impl fmt::Display for Ltlf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(self, 0, PrintOptions::default(), f)
    }
}

impl fmt::Display for Pltlf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_node(self, 0, PrintOptions::default(), f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn a() -> Ltlf {
        Ltlf::atom("a")
    }
    fn b() -> Ltlf {
        Ltlf::atom("b")
    }

    #[test]
    fn nnf_examples() {
        assert_eq!(a().until(b()).not().to_nnf(), a().not().release(b().not()));
        assert_eq!(a().next().not().to_nnf(), a().not().weak_next());
        assert_eq!(a().not().not().to_nnf(), a());
    }

    #[test]
    fn bnf_examples() {
        assert_eq!(a().weak_next().to_bnf(), a().not().next().not());
        assert_eq!(a().release(b()).to_bnf(), a().not().until(b().not()).not());
        assert_eq!(a().until(b()).to_bnf(), a().until(b()));
    }

    #[test]
    fn closure_counts() {
        let c = a().until(b()).closure();
        assert_eq!(c.members(), &[a(), b(), a().until(b())]);
        assert_eq!((c.m(), c.n()), (1, 1));

        let f = a().eventually().not();
        let c = f.closure();
        assert_eq!(c.members(), &[Ltlf::True, a(), a().eventually(), f.clone()]);
        assert_eq!((c.m(), c.n()), (2, 1));

        let c = a().and(b()).closure();
        assert_eq!((c.m(), c.n()), (1, 0));
    }

    #[test]
    fn shared_subformulas_merge() {
        let f = a().eventually().and(a().eventually());
        assert_eq!(f.closure().len(), 4);
    }

    #[test]
    fn reversal() {
        let p = Ltlf::atom("p");
        let q = Ltlf::atom("q");
        assert_eq!(p.clone().next().reverse_to_past(), Pltlf::atom("p").yesterday());
        assert_eq!(p.clone().until(q.clone()).reverse_to_past(), Pltlf::atom("p").since(Pltlf::atom("q")));
        assert_eq!(
            p.next().and(q).reverse_to_past(),
            Pltlf::atom("p").yesterday().and(Pltlf::atom("q"))
        );
    }

    #[test]
    fn printing() {
        assert_eq!(a().eventually().to_string(), "F a");
        assert_eq!(a().until(b().until(a())).to_string(), "a U b U a");
        assert_eq!(a().until(b()).until(a()).to_string(), "(a U b) U a");
        assert_eq!(a().or(b()).and(a()).to_string(), "(a | b) & a");
        assert_eq!(a().implies(b()).implies(a()).to_string(), "(a -> b) -> a");
        assert_eq!(a().not().next().to_string(), "X !a");
        let full = PrintOptions { full_parens: true, sugar: false };
        assert_eq!(a().eventually().not().to_string_with(full), "!(true U a)");
    }

    #[test]
    fn alphabet_sorted() {
        let al = b().and(a()).and(b()).atoms();
        assert_eq!(al.names().iter().map(|n| n.to_string()).collect::<Vec<_>>(), ["a", "b"]);
        assert_eq!(al.index_of("b"), Some(1));
        assert_eq!(al.index_of("c"), None);
    }
}
