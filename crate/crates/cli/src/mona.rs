//! MONA (M2L-Str) source for the first-order and second-order encodings.
//!
//! Atoms become free second-order variables. Successor terms are guarded
//! (`x < $` before `x+1`, `0 < x` before `x-1`) so that no term falls off
//! the word, whatever MONA does with `$+1`. Clause matrices are emitted in
//! their lowered pointwise form; lean set terms are expanded into membership
//! tests.

use std::fmt::Write as _;

use ltlf_core::formula::{Alphabet, Ltlf, Pltlf};
use ltlf_core::logic::fol::{Base, Cmp, Fol, Term};
use ltlf_core::logic::{encode_fol, encode_fol_past, encode_mso, EncodingConfig, MonadicSentence, PExpr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Fol,
    FolPast,
    Mso(EncodingConfig),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MonaError {
    #[error("atom `{0}` is a MONA keyword")]
    Reserved(String),
    #[error(transparent)]
    Encoding(#[from] ltlf_core::Error),
}

const KEYWORDS: &[&str] = &[
    "all0", "all1", "all2", "allpos", "ex0", "ex1", "ex2", "in", "notin", "true", "false", "var0", "var1", "var2",
    "pred", "macro", "let0", "let1", "let2", "empty", "union", "inter", "sub", "m2l-str", "ws1s", "ws2s", "min",
    "max", "assert", "where", "export", "import", "const", "defaultwhere1", "defaultwhere2", "include", "tree",
    "restrict", "execute", "verify", "lastpos", "guide", "universe",
];

fn check_names(alphabet: &Alphabet) -> Result<(), MonaError> {
    match alphabet.names().iter().find(|n| KEYWORDS.contains(&&***n)) {
        Some(n) => Err(MonaError::Reserved(n.to_string())),
        None => Ok(()),
    }
}

fn preamble(out: &mut String, title: &str, alphabet: &Alphabet) {
    writeln!(out, "# {title}").unwrap();
    out.push_str("m2l-str;\n");
    if !alphabet.is_empty() {
        let names: Vec<&str> = alphabet.names().iter().map(|n| &**n).collect();
        writeln!(out, "var2 {};", names.join(", ")).unwrap();
    }
}

/// A name not among the atoms, built from `base` by appending `_`.
fn fresh(base: &str, alphabet: &Alphabet) -> String {
    let mut s = base.to_string();
    while alphabet.names().iter().any(|n| n.starts_with(&*s)) {
        s.push('_');
    }
    s
}

struct FolPrinter {
    var: String,
}

impl FolPrinter {
    fn term(&self, t: Term) -> String {
        let base = match t.base {
            Base::Var(v) => format!("{}{v}", self.var),
            Base::Zero => "0".to_string(),
            Base::Last => "$".to_string(),
        };
        match t.offset {
            0 => base,
            k if k > 0 => format!("{base} + {k}"),
            k => format!("{base} - {}", -k),
        }
    }

    /// Conditions under which `t` names a position.
    fn defined(&self, t: Term) -> Option<String> {
        let base = Term { offset: 0, ..t };
        match t.offset {
            0 => None,
            k if k > 0 => Some(format!("{} < {}", self.term(base), self.term(Term { base: Base::Last, offset: 1 - k }))),
            k => Some(format!("{} <= {}", -k, self.term(base))),
        }
    }

    fn guarded(&self, conds: [Option<String>; 2], body: String) -> String {
        let conds: Vec<String> = conds.into_iter().flatten().collect();
        if conds.is_empty() {
            body
        } else {
            format!("({} & {body})", conds.join(" & "))
        }
    }

    fn fol(&self, f: &Fol) -> String {
        match f {
            Fol::True => "true".into(),
            Fol::False => "false".into(),
            Fol::Pred(p, t) => self.guarded([self.defined(*t), None], format!("{} in {p}", self.term(*t))),
            Fol::Cmp(op, a, b) => {
                let op = match op {
                    Cmp::Eq => "=",
                    Cmp::Ne => "~=",
                    Cmp::Lt => "<",
                    Cmp::Le => "<=",
                };
                self.guarded([self.defined(*a), self.defined(*b)], format!("{} {op} {}", self.term(*a), self.term(*b)))
            }
            Fol::Not(a) => format!("~({})", self.fol(a)),
            Fol::And(a, b) => format!("({} & {})", self.fol(a), self.fol(b)),
            Fol::Or(a, b) => format!("({} | {})", self.fol(a), self.fol(b)),
            Fol::Implies(a, b) => format!("({} => {})", self.fol(a), self.fol(b)),
            Fol::Exists(v, a) => format!("(ex1 {}{v}: {})", self.var, self.fol(a)),
            Fol::Forall(v, a) => format!("(all1 {}{v}: {})", self.var, self.fol(a)),
        }
    }
}

fn emit_fol_formula(title: &str, fol: &Fol, alphabet: &Alphabet) -> Result<String, MonaError> {
    check_names(alphabet)?;
    let printer = FolPrinter { var: fresh("v", alphabet) };
    let mut out = String::new();
    preamble(&mut out, title, alphabet);
    writeln!(out, "{};", printer.fol(fol)).unwrap();
    Ok(out)
}

/// `fol(φ, 0)`.
pub fn emit_fol(f: &Ltlf) -> Result<String, MonaError> {
    emit_fol_formula(&format!("fol: {f}"), &encode_fol(f), &f.atoms())
}

/// `fol_p(ψ, last)`.
pub fn emit_fol_past(f: &Pltlf) -> Result<String, MonaError> {
    emit_fol_formula(&format!("fol-past: {f}"), &encode_fol_past(f), &f.atoms())
}

fn pexpr(s: &MonadicSentence, e: &PExpr, x: &str, out: &mut String) {
    let name = |p: ltlf_core::logic::PredId| &*s.preds()[p.index()].name;
    match e {
        PExpr::Const(b) => out.push_str(if *b { "true" } else { "false" }),
        PExpr::At(p, 0) => write!(out, "{x} in {}", name(*p)).unwrap(),
        PExpr::At(p, 1) => write!(out, "({x} < $ & {x} + 1 in {})", name(*p)).unwrap(),
        PExpr::At(p, -1) => write!(out, "(0 < {x} & {x} - 1 in {})", name(*p)).unwrap(),
        PExpr::At(_, o) | PExpr::Exists(o) if o.abs() > 1 => unreachable!("sentences stay within x-1..x+1"),
        PExpr::Exists(0) => out.push_str("true"),
        PExpr::Exists(1) => write!(out, "{x} < $").unwrap(),
        PExpr::Exists(_) => write!(out, "0 < {x}").unwrap(),
        PExpr::At(..) => unreachable!(),
        PExpr::Not(a) => {
            out.push_str("~(");
            pexpr(s, a, x, out);
            out.push(')');
        }
        PExpr::And(v) | PExpr::Or(v) if v.is_empty() => {
            out.push_str(if matches!(e, PExpr::And(_)) { "true" } else { "false" })
        }
        PExpr::And(v) | PExpr::Or(v) => {
            let op = if matches!(e, PExpr::And(_)) { " & " } else { " | " };
            out.push('(');
            for (i, a) in v.iter().enumerate() {
                if i > 0 {
                    out.push_str(op);
                }
                pexpr(s, a, x, out);
            }
            out.push(')');
        }
        PExpr::Implies(a, b) | PExpr::Iff(a, b) => {
            let op = if matches!(e, PExpr::Implies(..)) { " => " } else { " <=> " };
            out.push('(');
            pexpr(s, a, x, out);
            out.push_str(op);
            pexpr(s, b, x, out);
            out.push(')');
        }
    }
}

/// `∃Q… (Init(0) ∧ ∀x Matrix)` with one `ex2` and one `all1`.
pub fn emit_sentence(title: &str, s: &MonadicSentence) -> Result<String, MonaError> {
    check_names(s.alphabet())?;
    let mut out = String::new();
    preamble(&mut out, title, s.alphabet());
    let x = fresh("x", s.alphabet());
    let lowered = s.lower();
    let quantified: Vec<&str> = s.quantified().iter().map(|d| &*d.name).collect();
    let mut body = String::new();
    pexpr(s, &lowered[0], "0", &mut body);
    body.push_str(&format!(" &\n  (all1 {x}:"));
    if lowered.len() == 1 {
        body.push_str(" true");
    }
    for (i, c) in lowered[1..].iter().enumerate() {
        body.push_str(if i == 0 { "\n    " } else { " &\n    " });
        pexpr(s, c, &x, &mut body);
    }
    body.push(')');
    if quantified.is_empty() {
        writeln!(out, "{body};").unwrap();
    } else {
        writeln!(out, "ex2 {}:\n  {body};", quantified.join(", ")).unwrap();
    }
    Ok(out)
}

pub fn emit_mso(f: &Ltlf, cfg: EncodingConfig) -> Result<String, MonaError> {
    let g = cfg.normalize(f);
    let s = encode_mso(&g, cfg)?;
    emit_sentence(&format!("mso/{}: {g}", cfg.label()), &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltlf_core::parse::parse_ltlf;

    #[test]
    fn fol_of_an_atom() {
        let text = emit_fol(&Ltlf::atom("p")).unwrap();
        assert_eq!(text, "# fol: p\nm2l-str;\nvar2 p;\n0 in p;\n");
    }

    #[test]
    fn next_is_guarded() {
        let text = emit_fol(&parse_ltlf("X a").unwrap()).unwrap();
        assert!(text.contains("(ex1 v1: ((0 < $ & v1 = 0 + 1) & v1 in a))"), "{text}");
    }

    #[test]
    fn mso_shape() {
        let f = parse_ltlf("a & b").unwrap();
        let text = emit_mso(&f, "bnf-fussy-full".parse().unwrap()).unwrap();
        assert_eq!(text.matches("ex2").count(), 1, "{text}");
        assert_eq!(text.matches("all1").count(), 1, "{text}");
        assert!(text.contains("ex2 Q1:"));
        assert_eq!(text, emit_mso(&f, "bnf-fussy-full".parse().unwrap()).unwrap());
    }

    #[test]
    fn keywords_rejected() {
        let f = Ltlf::atom("in");
        assert_eq!(emit_fol(&f), Err(MonaError::Reserved("in".into())));
    }
}
