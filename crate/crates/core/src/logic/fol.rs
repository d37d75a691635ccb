//! First-order encodings `fol(φ, 0)` and `fol_p(ψ, last)`.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::MonadicStructure;
use crate::error::{Error, Result};
use crate::formula::{Ltlf, Name, Pltlf};

pub type VarId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    Var(VarId),
    Zero,
    Last,
}

/// `base + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub base: Base,
    pub offset: i32,
}

impl Term {
    pub fn var(v: VarId) -> Term {
        Term { base: Base::Var(v), offset: 0 }
    }
    pub const ZERO: Term = Term { base: Base::Zero, offset: 0 };
    pub const LAST: Term = Term { base: Base::Last, offset: 0 };
    pub fn plus(self, k: i32) -> Term {
        Term { offset: self.offset + k, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Fol {
    True,
    False,
    Pred(Name, Term),
    Cmp(Cmp, Term, Term),
    Not(Box<Fol>),
    And(Box<Fol>, Box<Fol>),
    Or(Box<Fol>, Box<Fol>),
    Implies(Box<Fol>, Box<Fol>),
    Exists(VarId, Box<Fol>),
    Forall(VarId, Box<Fol>),
}

impl Fol {
    fn and(self, rhs: Fol) -> Fol {
        Fol::And(Box::new(self), Box::new(rhs))
    }
    fn or(self, rhs: Fol) -> Fol {
        Fol::Or(Box::new(self), Box::new(rhs))
    }
    fn implies(self, rhs: Fol) -> Fol {
        Fol::Implies(Box::new(self), Box::new(rhs))
    }
    fn negate(self) -> Fol {
        Fol::Not(Box::new(self))
    }
    fn cmp(op: Cmp, a: Term, b: Term) -> Fol {
        Fol::Cmp(op, a, b)
    }

    /// Number of quantifiers.
    pub fn quantifiers(&self) -> usize {
        match self {
            Fol::True | Fol::False | Fol::Pred(..) | Fol::Cmp(..) => 0,
            Fol::Not(a) => a.quantifiers(),
            Fol::And(a, b) | Fol::Or(a, b) | Fol::Implies(a, b) => a.quantifiers() + b.quantifiers(),
            Fol::Exists(_, a) | Fol::Forall(_, a) => 1 + a.quantifiers(),
        }
    }
}

struct Fresh(VarId);

impl Fresh {
    fn next(&mut self) -> VarId {
        self.0 += 1;
        self.0
    }
}

/// `fol(φ, 0)`.
pub fn encode_fol(f: &Ltlf) -> Fol {
    fol(f, Term::ZERO, &mut Fresh(0))
}

fn fol(f: &Ltlf, x: Term, fresh: &mut Fresh) -> Fol {
    use Ltlf::*;
    match f {
        True => Fol::True,
        False => Fol::False,
        Atom(p) => Fol::Pred(p.clone(), x),
        Not(a) => fol(a, x, fresh).negate(),
        And(a, b) => fol(a, x, fresh).and(fol(b, x, fresh)),
        Or(a, b) => fol(a, x, fresh).or(fol(b, x, fresh)),
        Implies(a, b) => fol(a, x, fresh).implies(fol(b, x, fresh)),
        Next(a) => next(a, x, fresh),
        WeakNext(a) => Fol::cmp(Cmp::Eq, x, Term::LAST).or(next(a, x, fresh)),
        Until(a, b) => {
            let y = fresh.next();
            let z = fresh.next();
            let (ty, tz) = (Term::var(y), Term::var(z));
            let range = Fol::cmp(Cmp::Le, x, ty).and(Fol::cmp(Cmp::Le, ty, Term::LAST));
            let before = Fol::cmp(Cmp::Le, x, tz).and(Fol::cmp(Cmp::Lt, tz, ty));
            let body = range.and(fol(b, ty, fresh)).and(Fol::Forall(z, Box::new(before.implies(fol(a, tz, fresh)))));
            Fol::Exists(y, Box::new(body))
        }
        Release(a, b) => {
            let y = fresh.next();
            let z = fresh.next();
            let (ty, tz) = (Term::var(y), Term::var(z));
            let range = Fol::cmp(Cmp::Le, x, ty).and(Fol::cmp(Cmp::Le, ty, Term::LAST));
            let upto = Fol::cmp(Cmp::Le, x, tz).and(Fol::cmp(Cmp::Le, tz, ty));
            let released =
                range.and(fol(a, ty, fresh)).and(Fol::Forall(z, Box::new(upto.implies(fol(b, tz, fresh)))));
            let w = fresh.next();
            let tw = Term::var(w);
            let all = Fol::cmp(Cmp::Le, x, tw).and(Fol::cmp(Cmp::Le, tw, Term::LAST));
            let always = Fol::Forall(w, Box::new(all.implies(fol(b, tw, fresh))));
            Fol::Exists(y, Box::new(released)).or(always)
        }
    }
}

fn next(a: &Ltlf, x: Term, fresh: &mut Fresh) -> Fol {
    let y = fresh.next();
    let ty = Term::var(y);
    Fol::Exists(y, Box::new(Fol::cmp(Cmp::Eq, ty, x.plus(1)).and(fol(a, ty, fresh))))
}

/// `fol_p(ψ, last)`.
pub fn encode_fol_past(f: &Pltlf) -> Fol {
    fol_p(f, Term::LAST, &mut Fresh(0))
}

fn fol_p(f: &Pltlf, x: Term, fresh: &mut Fresh) -> Fol {
    use Pltlf::*;
    match f {
        True => Fol::True,
        False => Fol::False,
        Atom(p) => Fol::Pred(p.clone(), x),
        Not(a) => fol_p(a, x, fresh).negate(),
        And(a, b) => fol_p(a, x, fresh).and(fol_p(b, x, fresh)),
        Or(a, b) => fol_p(a, x, fresh).or(fol_p(b, x, fresh)),
        Yesterday(a) => {
            let y = fresh.next();
            let ty = Term::var(y);
            let body = Fol::cmp(Cmp::Eq, ty, x.plus(-1)).and(Fol::cmp(Cmp::Le, Term::ZERO, ty)).and(fol_p(a, ty, fresh));
            Fol::Exists(y, Box::new(body))
        }
        Since(a, b) => {
            let y = fresh.next();
            let z = fresh.next();
            let (ty, tz) = (Term::var(y), Term::var(z));
            let range = Fol::cmp(Cmp::Le, Term::ZERO, ty).and(Fol::cmp(Cmp::Le, ty, x));
            let after = Fol::cmp(Cmp::Lt, ty, tz).and(Fol::cmp(Cmp::Le, tz, x));
            let body = range.and(fol_p(b, ty, fresh)).and(Fol::Forall(z, Box::new(after.implies(fol_p(a, tz, fresh)))));
            Fol::Exists(y, Box::new(body))
        }
    }
}

/// Tarskian evaluation with quantifiers over `0..=last`.
pub fn eval_fol(structure: &MonadicStructure, f: &Fol) -> Result<bool> {
    let mut env = Vec::new();
    eval(structure, f, &mut env)
}

fn term_value(structure: &MonadicStructure, t: Term, env: &[(VarId, i64)]) -> i64 {
    let base = match t.base {
        Base::Zero => 0,
        Base::Last => structure.len() as i64 - 1,
        Base::Var(v) => env.iter().rev().find(|(id, _)| *id == v).map(|(_, val)| *val).expect("unbound variable"),
    };
    base + t.offset as i64
}

fn eval(structure: &MonadicStructure, f: &Fol, env: &mut Vec<(VarId, i64)>) -> Result<bool> {
    Ok(match f {
        Fol::True => true,
        Fol::False => false,
        Fol::Pred(name, t) => {
            let ext = structure.extent(name).ok_or_else(|| Error::UnknownPredicate(String::from(&**name)))?;
            let x = term_value(structure, *t, env);
            x >= 0 && (x as usize) < ext.len() && ext[x as usize]
        }
        Fol::Cmp(op, a, b) => {
            let (a, b) = (term_value(structure, *a, env), term_value(structure, *b, env));
            match op {
                Cmp::Eq => a == b,
                Cmp::Ne => a != b,
                Cmp::Lt => a < b,
                Cmp::Le => a <= b,
            }
        }
        Fol::Not(a) => !eval(structure, a, env)?,
        Fol::And(a, b) => eval(structure, a, env)? && eval(structure, b, env)?,
        Fol::Or(a, b) => eval(structure, a, env)? || eval(structure, b, env)?,
        Fol::Implies(a, b) => !eval(structure, a, env)? || eval(structure, b, env)?,
        Fol::Exists(v, body) | Fol::Forall(v, body) => {
            let want = matches!(f, Fol::Exists(..));
            let mut result = !want;
            for x in 0..structure.len() as i64 {
                env.push((*v, x));
                let r = eval(structure, body, env);
                env.pop();
                if r? == want {
                    result = want;
                    break;
                }
            }
            result
        }
    })
}

fn var_name(v: VarId) -> String {
    alloc::format!("v{v}")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.base {
            Base::Zero => {
                f.write_str("0")?;
                write_offset(f, self.offset)?;
            }
            Base::Last => {
                f.write_str("last")?;
                write_offset(f, self.offset)?;
            }
            Base::Var(v) => {
                f.write_str(&var_name(v))?;
                write_offset(f, self.offset)?;
            }
        }
        Ok(())
    }
}

fn write_offset(f: &mut fmt::Formatter<'_>, k: i32) -> fmt::Result {
    match k {
        0 => Ok(()),
        k if k > 0 => write!(f, "+{k}"),
        k => write!(f, "{k}"),
    }
}

impl fmt::Display for Fol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fol::True => f.write_str("true"),
            Fol::False => f.write_str("false"),
            Fol::Pred(p, t) => write!(f, "Q_{p}({t})"),
            Fol::Cmp(op, a, b) => {
                let s = match op {
                    Cmp::Eq => "=",
                    Cmp::Ne => "!=",
                    Cmp::Lt => "<",
                    Cmp::Le => "<=",
                };
                write!(f, "{a} {s} {b}")
            }
            Fol::Not(a) => write!(f, "!({a})"),
            Fol::And(a, b) => write!(f, "({a} & {b})"),
            Fol::Or(a, b) => write!(f, "({a} | {b})"),
            Fol::Implies(a, b) => write!(f, "({a} -> {b})"),
            Fol::Exists(v, a) => write!(f, "ex {}. {a}", var_name(*v)),
            Fol::Forall(v, a) => write!(f, "all {}. {a}", var_name(*v)),
        }
    }
}

/// Atom names mentioned by `f`, sorted.
pub fn predicates(f: &Fol) -> Vec<Name> {
    let mut out = vec![];
    collect(f, &mut out);
    out.sort();
    out.dedup();
    out
}

fn collect(f: &Fol, out: &mut Vec<Name>) {
    match f {
        Fol::Pred(p, _) => out.push(p.clone()),
        Fol::True | Fol::False | Fol::Cmp(..) => {}
        Fol::Not(a) | Fol::Exists(_, a) | Fol::Forall(_, a) => collect(a, out),
        Fol::And(a, b) | Fol::Or(a, b) | Fol::Implies(a, b) => {
            collect(a, out);
            collect(b, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Alphabet;
    use crate::parse::{parse_ltlf, parse_pltlf};
    use crate::semantics::Trace;

    fn structure(names: &[&str], letters: &[u32]) -> MonadicStructure {
        MonadicStructure::from_trace(&Trace::new(letters.to_vec()), &Alphabet::from_strs(names.iter().copied()))
    }

    #[test]
    fn atom_and_next_shapes() {
        assert_eq!(encode_fol(&Ltlf::atom("p")), Fol::Pred("p".into(), Term::ZERO));
        let f = encode_fol(&parse_ltlf("X a").unwrap());
        let Fol::Exists(y, body) = f else { panic!("expected ex") };
        assert_eq!(*body, Fol::Cmp(Cmp::Eq, Term::var(y), Term::ZERO.plus(1)).and(Fol::Pred("a".into(), Term::var(y))));
        assert_eq!(encode_fol_past(&Pltlf::atom("p")), Fol::Pred("p".into(), Term::LAST));
    }

    #[test]
    fn evaluation_examples() {
        let i = structure(&["p"], &[1]);
        assert!(eval_fol(&i, &encode_fol(&Ltlf::atom("p"))).unwrap());
        let i = structure(&["a"], &[0, 1]);
        assert!(eval_fol(&i, &encode_fol(&parse_ltlf("F a").unwrap())).unwrap());
        assert!(!eval_fol(&i, &encode_fol(&parse_ltlf("!F a").unwrap())).unwrap());
        let i = structure(&["p", "q"], &[0b10, 0b01]);
        assert!(eval_fol(&i, &encode_fol_past(&parse_pltlf("p S q").unwrap())).unwrap());
    }

    #[test]
    fn unknown_predicate() {
        let i = structure(&["a"], &[0]);
        assert_eq!(
            eval_fol(&i, &encode_fol(&Ltlf::atom("zz"))),
            Err(Error::UnknownPredicate("zz".into()))
        );
    }
}
