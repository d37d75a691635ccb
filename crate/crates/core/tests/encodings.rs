mod common;

use common::*;
use ltlf_core::formula::{Alphabet, Ltlf};
use ltlf_core::logic::eval::{eval_sentence_bruteforce, eval_sentence_witness, witness_extents};
use ltlf_core::logic::mso::{encode_mso_unchecked, lean_term};
use ltlf_core::logic::sentence::eval_set_term;
use ltlf_core::logic::{
    encode_fol, encode_fol_past, encode_mso, eval_fol, Constraint, EncodingConfig, MonadicStructure, NormalForm,
    PredId, PredRole, VarForm,
};
use ltlf_core::parse::{parse_ltlf, parse_pltlf};
use ltlf_core::semantics::ltlf_truth;
use ltlf_core::{Error, Limits, Trace};
use proptest::prelude::*;

fn cfg(s: &str) -> EncodingConfig {
    s.parse().unwrap()
}

#[test]
fn config_rejects_sloppy_bnf() {
    assert_eq!(
        EncodingConfig::new(NormalForm::Bnf, Constraint::Sloppy, VarForm::Full),
        Err(Error::InvalidConfig("sloppy constraints require NNF input"))
    );
    assert!("bnf-sloppy-lean".parse::<EncodingConfig>().is_err());
    assert_eq!(EncodingConfig::all().len(), 6);
    let labels: Vec<String> = EncodingConfig::all().iter().map(|c| c.label()).collect();
    assert!(labels.contains(&"nnf-sloppy-lean".to_string()));
}

#[test]
fn encode_requires_normal_form() {
    let f = parse_ltlf("a -> b").unwrap();
    assert!(matches!(encode_mso(&f, cfg("bnf-fussy-full")), Err(Error::NotInNormalForm(_))));
    assert!(matches!(encode_mso(&f, cfg("nnf-fussy-full")), Err(Error::NotInNormalForm(_))));
}

#[test]
fn atom_has_no_quantifiers() {
    let p = Ltlf::atom("p");
    for c in EncodingConfig::all() {
        let s = encode_mso(&p, c).unwrap();
        assert_eq!(s.quantifier_count(), 0, "{c}");
        assert!(s.clauses().is_empty());
        let init = s.display_expr(s.init());
        assert!(init == "p(x)" || init == "x in p", "{c}: {init}");
    }
}

#[test]
fn conjunction_full_fussy_shape() {
    let f = parse_ltlf("a & b").unwrap();
    let s = encode_mso(&f, cfg("bnf-fussy-full")).unwrap();
    assert_eq!(s.quantifier_count(), 1);
    assert_eq!(s.display_expr(s.init()), "Q1(x)");
    assert_eq!(s.clauses().len(), 1);
    assert_eq!(s.display_expr(&s.clauses()[0].expr), "Q1(x) <-> (a(x) & b(x))");
}

#[test]
fn lean_next_shape() {
    let f = parse_ltlf("X a").unwrap();
    let s = encode_mso(&f, cfg("nnf-fussy-lean")).unwrap();
    assert_eq!(s.quantifier_count(), 0);
    assert_eq!(s.display_expr(s.init()), "x in ((a - 1) \\ {last})");
}

#[test]
fn fol_examples() {
    let x = encode_fol(&parse_ltlf("X a").unwrap());
    assert_eq!(x.to_string(), "ex v1. (v1 = 0+1 & Q_a(v1))");
    let y = encode_fol_past(&parse_pltlf("Y a").unwrap());
    assert_eq!(y.to_string(), "ex v1. ((v1 = last-1 & 0 <= v1) & Q_a(v1))");
    let i = MonadicStructure::from_trace(&Trace::new(vec![0, 1]), &Alphabet::from_strs(["a"]));
    assert!(!eval_fol(&i, &encode_fol(&parse_ltlf("!F a").unwrap())).unwrap());
}

#[test]
fn sloppy_bnf_counterexample() {
    let f = parse_ltlf("!F a").unwrap().to_bnf();
    let t = Trace::new(vec![0, 1]);
    let i = MonadicStructure::from_trace(&t, &f.atoms());
    let bad = encode_mso_unchecked(&f, EncodingConfig::new_unchecked(NormalForm::Bnf, Constraint::Sloppy, VarForm::Full));
    assert!(eval_sentence_bruteforce(&i, &bad, &Limits::default()).unwrap());
    assert!(!models(&f, &t, &f.atoms()));
    let good = encode_mso(&f, cfg("bnf-fussy-full")).unwrap();
    assert!(!eval_sentence_bruteforce(&i, &good, &Limits::default()).unwrap());
}

#[test]
fn witness_examples() {
    let a = Ltlf::atom("a");
    for c in EncodingConfig::all() {
        let s = encode_mso(&a, c).unwrap();
        assert!(eval_sentence_witness(&Trace::new(vec![1]), &a, &s).unwrap());
    }
    let g = parse_ltlf("G a").unwrap().to_bnf();
    let s = encode_mso(&g, cfg("bnf-fussy-full")).unwrap();
    let t = Trace::new(vec![1, 1]);
    assert!(eval_sentence_witness(&t, &g, &s).unwrap());
    let ext = witness_extents(&t, &g, &s).unwrap();
    let top = s.preds().iter().position(|d| d.role == PredRole::Subformula(g.clone())).unwrap();
    assert_eq!(ext[top], vec![true, true]);

    let f = parse_ltlf("F a").unwrap().to_nnf();
    let s = encode_mso(&f, cfg("nnf-sloppy-lean")).unwrap();
    let t = Trace::new(vec![0, 1]);
    assert!(eval_sentence_witness(&t, &f, &s).unwrap());
    assert_eq!(witness_extents(&t, &f, &s).unwrap()[1], vec![true, true]);
}

/// Evaluates a formula over `ab()` traces via each encoding, with both
/// evaluators, against the direct oracle.
fn check_all_encodings(f: &Ltlf, t: &Trace) -> Result<(), TestCaseError> {
    let al = ab();
    let want = models(f, t, &al);
    let i = MonadicStructure::from_trace(t, &al);
    prop_assert_eq!(eval_fol(&i, &encode_fol(f)).unwrap(), want, "fol");
    for c in EncodingConfig::all() {
        let g = c.normalize(f);
        let s = encode_mso(&g, c).unwrap();
        if s.quantifier_count() * t.len() <= 20 {
            prop_assert_eq!(eval_sentence_bruteforce(&i, &s, &Limits::default()).unwrap(), want, "{} brute force", c);
        }
        if want {
            let local = project(t, &al, s.alphabet());
            prop_assert!(eval_sentence_witness(&local, &g, &s).unwrap(), "{} witness", c);
        }
    }
    Ok(())
}

#[test]
fn corpus_encodings_agree() {
    for f in corpus() {
        for t in traces(2, 3) {
            check_all_encodings(&f, &t).unwrap();
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encodings_agree(f in arb_ltlf(3), t in arb_trace(2, 4)) {
        check_all_encodings(&f, &t)?;
    }

    #[test]
    fn past_fol_agrees(f in arb_pltlf(3), t in arb_trace(2, 4)) {
        let al = Alphabet::from_strs(["p", "q"]);
        let i = MonadicStructure::from_trace(&t, &al);
        prop_assert_eq!(eval_fol(&i, &encode_fol_past(&f)).unwrap(), holds_past(&f, &t, &al, t.len() - 1));
    }

    /// Non-U/R subformulas evaluate pointwise through their lean terms.
    #[test]
    fn lean_terms_are_pointwise(f in arb_ltlf(3), t in arb_trace(2, 4)) {
        let al = ab();
        for c in [cfg("bnf-fussy-lean"), cfg("nnf-sloppy-lean")] {
            let g = c.normalize(&f);
            let s = encode_mso(&g, c).unwrap();
            let t = project(&t, &al, s.alphabet());
            let ext = witness_extents(&t, &g, &s).unwrap();
            let extent = |p: PredId| ext[p.index()].clone();
            for h in g.closure().members() {
                if matches!(h, Ltlf::Until(..) | Ltlf::Release(..)) {
                    continue;
                }
                let term = lean_term(&s, h).unwrap();
                prop_assert_eq!(eval_set_term(&term, t.len(), &extent), ltlf_truth(&t, s.alphabet(), h), "{}", h);
            }
        }
    }

    #[test]
    fn lean_is_never_larger(f in arb_ltlf(4)) {
        for (full, lean) in [("bnf-fussy-full", "bnf-fussy-lean"), ("nnf-sloppy-full", "nnf-sloppy-lean")] {
            let (a, b) = (cfg(full), cfg(lean));
            let g = a.normalize(&f);
            let m = encode_mso(&g, a).unwrap().quantifier_count();
            let n = encode_mso(&g, b).unwrap().quantifier_count();
            prop_assert!(n <= m);
            let cl = g.closure();
            prop_assert_eq!(m, cl.m());
            prop_assert_eq!(n, cl.n());
            prop_assert_eq!(n == m, cl.non_atomic().all(|h| matches!(h, Ltlf::Until(..) | Ltlf::Release(..))));
        }
    }
}

#[test]
fn lean_strictly_smaller_somewhere() {
    let f = parse_ltlf("G (a -> X b)").unwrap().to_nnf();
    let m = encode_mso(&f, cfg("nnf-fussy-full")).unwrap().quantifier_count();
    let n = encode_mso(&f, cfg("nnf-fussy-lean")).unwrap().quantifier_count();
    assert!(n < m, "{n} vs {m}");
}

#[test]
fn witness_rejects_foreign_sentence() {
    let s = encode_mso(&parse_ltlf("F a").unwrap().to_bnf(), cfg("bnf-fussy-full")).unwrap();
    let other = parse_ltlf("G b").unwrap().to_bnf();
    assert_eq!(eval_sentence_witness(&Trace::new(vec![1]), &other, &s), Err(Error::WitnessMismatch));
}

#[test]
fn unknown_predicate_in_structure() {
    let s = encode_mso(&parse_ltlf("F c").unwrap().to_bnf(), cfg("bnf-fussy-full")).unwrap();
    let i = MonadicStructure::from_trace(&Trace::new(vec![1]), &ab());
    assert_eq!(eval_sentence_bruteforce(&i, &s, &Limits::default()), Err(Error::UnknownPredicate("c".into())));
}
