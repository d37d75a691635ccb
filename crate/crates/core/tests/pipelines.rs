mod common;

use common::*;
use ltlf_core::bdd::{Bdd, NodeId};
use ltlf_core::compact::{build_rev, Flavor};
use ltlf_core::compile::compile;
use ltlf_core::formula::{Alphabet, Ltlf, Pltlf};
use ltlf_core::logic::eval::{eval_sentence_bruteforce, eval_with_extents, violations};
use ltlf_core::logic::{encode_mso, Family, MonadicStructure, PredId};
use ltlf_core::parse::{parse_ltlf, parse_pltlf};
use ltlf_core::pipeline::{translate, Pipeline};
use ltlf_core::symbolic::{pltlf_to_symbolic_dfa, SymbolicDfa};
use ltlf_core::{Limits, Trace};
use proptest::prelude::*;

fn symbolic(src: &str) -> (Pltlf, SymbolicDfa) {
    let psi = parse_pltlf(src).unwrap();
    let f = pltlf_to_symbolic_dfa(&psi, &psi.atoms(), &Limits::default()).unwrap();
    (psi, f)
}

#[test]
fn symbolic_examples() {
    let (psi, f) = symbolic("p");
    assert_eq!(f.k(), 2);
    for t in traces(1, 4) {
        assert_eq!(f.accepts(&t), t.holds(t.len() - 1, 0));
        assert_eq!(f.accepts(&t), holds_past(&psi, &t, psi.atoms().names().len().min(1).eq(&1).then(|| psi.atoms()).as_ref().unwrap(), t.len() - 1));
    }
    let (_, y) = symbolic("Y p");
    for t in traces(1, 4) {
        assert_eq!(y.accepts(&t), t.len() >= 2 && t.holds(t.len() - 2, 0));
    }
    let d = y.to_explicit(&Limits::default()).unwrap();
    assert_eq!(d.initial(), 0);
}

#[test]
fn reachable_states_bound() {
    for src in ["p S q", "Y (p S !q)", "(Y p) S (q & Y Y p)", "!(p S (q S p))"] {
        let (psi, f) = symbolic(src);
        let d = f.to_explicit(&Limits::default()).unwrap();
        assert!(d.num_states() <= (1 << psi.closure().len()) + 1, "{src}");
    }
}

#[test]
fn composed_acceptance_is_pointwise() {
    for src in ["p S q", "Y p & !q", "Y (Y p | q S p)", "true", "p"] {
        let (_, mut f) = symbolic(src);
        let bf = f.compose_acceptance().unwrap();
        let k = f.k();
        let atoms = f.alphabet().len();
        assert!(k + atoms <= 12);
        for bits in 0..1u32 << (k + atoms) {
            let state: Vec<bool> = (0..k).map(|q| bits >> q & 1 == 1).collect();
            let letter = bits >> k;
            let next = f.step(&state, letter);
            let direct = f.bdd().eval(bf, &|v| bits >> v & 1 == 1);
            assert_eq!(direct, f.is_accepting(&next), "{src} {bits:b}");
        }
    }
}

#[test]
fn compose_acceptance_examples() {
    let mut b = Bdd::default();
    let p = b.var(1).unwrap();
    let x0 = b.var(0).unwrap();
    let mut f = SymbolicDfa::from_parts(Alphabet::from_strs(["p"]), b.clone(), vec![p], x0, vec![false]);
    assert_eq!(f.compose_acceptance().unwrap(), p);
    let mut g = SymbolicDfa::from_parts(Alphabet::from_strs(["p"]), b, vec![p], NodeId::TRUE, vec![false]);
    assert_eq!(g.compose_acceptance().unwrap(), NodeId::TRUE);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symbolic_matches_past_semantics(psi in arb_pltlf(3)) {
        let al = Alphabet::from_strs(["p", "q"]);
        let f = pltlf_to_symbolic_dfa(&psi, &al, &Limits::default()).unwrap();
        let d = f.to_explicit(&Limits::default()).unwrap();
        prop_assert!(d.num_states() <= (1usize << psi.closure().len()) + 1);
        for t in traces(2, 4) {
            let want = holds_past(&psi, &t, &al, t.len() - 1);
            prop_assert_eq!(f.accepts(&t), want);
            prop_assert_eq!(d.accepts(&t), want);
        }
    }

    #[test]
    fn explicit_matches_run_simulation(psi in arb_pltlf(3), t in arb_trace(2, 12)) {
        let al = Alphabet::from_strs(["p", "q"]);
        let f = pltlf_to_symbolic_dfa(&psi, &al, &Limits::default()).unwrap();
        let d = f.to_explicit(&Limits::default()).unwrap();
        let run = f.run(&t);
        prop_assert_eq!(run.states.len(), t.len() + 1);
        prop_assert_eq!(run.truncated().len(), t.len());
        prop_assert_eq!(d.accepts(&t), f.accepts(&t));
    }
}

fn rev(src: &str, flavor: Flavor) -> (Ltlf, ltlf_core::compact::RevSentence) {
    let f = parse_ltlf(src).unwrap();
    let mut sym = pltlf_to_symbolic_dfa(&f.reverse_to_past(), &f.atoms(), &Limits::default()).unwrap();
    (f, build_rev(&mut sym, flavor).unwrap())
}

#[test]
fn compact_witness_examples() {
    let (_, r) = rev("F a", Flavor::Fussy);
    let good = Trace::new(vec![0, 1]);
    assert!(eval_with_extents(r.sentence(), 2, &r.canonical_witness(&good)));
    let bad = Trace::new(vec![0, 0]);
    let v = violations(r.sentence(), 2, &r.canonical_witness(&bad));
    assert!(!v.is_empty());
    for x in v {
        assert_eq!(x.position, 0);
        assert_eq!(r.sentence().clauses()[x.clause.unwrap()].family, Family::Racc);
    }
    let one = Trace::new(vec![1]);
    assert!(eval_with_extents(r.sentence(), 1, &r.canonical_witness(&one)));
    assert!(!eval_with_extents(r.sentence(), 1, &r.canonical_witness(&Trace::new(vec![0]))));
}

#[test]
fn compact_sentence_shape() {
    let (_, fussy) = rev("G (a -> X b)", Flavor::Fussy);
    let (_, sloppy) = rev("G (a -> X b)", Flavor::Sloppy);
    let s = sloppy.sentence();
    assert!(s.clauses().iter().all(|c| !matches!(c.family, Family::PreCon | Family::Racc)));
    let fam = |s: &ltlf_core::logic::MonadicSentence, f: Family| s.clauses().iter().filter(|c| c.family == f).count();
    assert_eq!(fam(s, Family::PostCon), fam(fussy.sentence(), Family::PostCon));
    assert_eq!(fam(s, Family::Rterminal), fam(fussy.sentence(), Family::Rterminal));
    assert_eq!(s.quantifier_count(), fussy.k() + fussy.u());
    // windows: only Rinit looks ahead (to test for the last position)
    for c in fussy.sentence().clauses() {
        let lowered = ltlf_core::logic::sentence::lower(&c.expr);
        let (lo, hi) = lowered.offset_range();
        assert!(hi == 0 || c.family == Family::Rinit, "{:?}", c.family);
        assert!(lo == 0 || c.family == Family::Rterminal || c.family == Family::Racc || c.family == Family::Rinit,
            "{:?}", c.family);
    }
}

#[test]
fn compact_witness_and_brute_force() {
    let al = ab();
    for src in CORPUS {
        for flavor in [Flavor::Fussy, Flavor::Sloppy] {
            let (f, r) = rev(src, flavor);
            let local = f.atoms();
            for t in traces(2, 4) {
                let lt = project(&t, &al, &local);
                let want = models(&f, &t, &al);
                let w = r.canonical_witness(&lt);
                if want {
                    assert!(eval_with_extents(r.sentence(), lt.len(), &w), "{src} {flavor:?} {t:?}");
                }
                let bits = r.sentence().quantifier_count() * t.len();
                if bits <= 20 {
                    let i = MonadicStructure::from_trace(&t, &al);
                    let got = eval_sentence_bruteforce(&i, r.sentence(), &Limits::default()).unwrap();
                    assert_eq!(got, want, "{src} {flavor:?} {t:?}");
                }
            }
        }
    }
}

#[test]
fn compile_examples() {
    let p = Ltlf::atom("p");
    let c = compile(&encode_mso(&p, "bnf-fussy-full".parse().unwrap()).unwrap(), &Limits::default()).unwrap();
    assert_eq!(c.dfa.minimize().num_states(), 3);
    let f = parse_ltlf("F a").unwrap();
    let full = compile(&encode_mso(&f.to_bnf(), "bnf-fussy-full".parse().unwrap()).unwrap(), &Limits::default()).unwrap();
    let lean = compile(&encode_mso(&f.to_nnf(), "nnf-sloppy-lean".parse().unwrap()).unwrap(), &Limits::default()).unwrap();
    assert_eq!(full.dfa.minimize(), lean.dfa.minimize());
    assert_eq!(full.dfa.minimize().num_states(), 2);
}

#[test]
fn width_cap() {
    let f = parse_ltlf("F a & F b & G (a -> X b)").unwrap().to_bnf();
    let s = encode_mso(&f, "bnf-fussy-full".parse().unwrap()).unwrap();
    let limits = Limits { max_width: 3, ..Limits::default() };
    assert!(compile(&s, &limits).unwrap_err().is_budget());
}

#[test]
fn aux_order_does_not_matter() {
    for src in ["G (a -> X b)", "a U (b U a)", "F a & F b"] {
        let f = parse_ltlf(src).unwrap().to_bnf();
        let s = encode_mso(&f, "bnf-fussy-full".parse().unwrap()).unwrap();
        let n = s.quantifier_count();
        let reversed: Vec<usize> = (0..n).rev().collect();
        let rotated: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let base = compile(&s, &Limits::default()).unwrap().dfa.minimize();
        for perm in [reversed, rotated] {
            let t = s.permute_quantified(&perm);
            assert_eq!(compile(&t, &Limits::default()).unwrap().dfa.minimize(), base, "{src}");
        }
    }
}

#[test]
fn variable_order_does_not_matter() {
    for src in ["a U b", "G (a -> F b)", "F a & F b"] {
        for flavor in [Flavor::Fussy, Flavor::Sloppy] {
            let (_, r) = rev(src, flavor);
            let s = r.sentence().clone();
            let n = s.preds().len() as u32;
            let base = compile(&s, &Limits::default()).unwrap().dfa.minimize();
            for order in [(0..n).map(PredId).collect(), (0..n).rev().map(PredId).collect::<Vec<_>>()] {
                let t = s.clone().with_order(order);
                assert_eq!(compile(&t, &Limits::default()).unwrap().dfa.minimize(), base, "{src} {flavor:?}");
            }
        }
    }
}

#[test]
fn every_pipeline_on_the_corpus() {
    let al = ab();
    for f in corpus() {
        let mut reference = None;
        for p in Pipeline::all() {
            let out = translate(&f, p, &Limits::default()).unwrap();
            let d = &out.dfa;
            for t in traces(2, 4) {
                let lt = project(&t, &al, &f.atoms());
                assert_eq!(d.accepts(&lt), models(&f, &t, &al), "{f} via {p} on {t:?}");
            }
            match &reference {
                None => reference = Some(out.dfa.clone()),
                Some(r) => assert_eq!(r, &out.dfa, "{f} via {p}"),
            }
        }
    }
}

#[test]
fn minimal_sizes() {
    let conj = Ltlf::all((1..=3).map(|i| Ltlf::atom(&format!("p{i}")).eventually()));
    for (f, n) in [
        (Ltlf::atom("p"), 3),
        (parse_ltlf("F a").unwrap(), 2),
        (parse_ltlf("G a").unwrap(), 2),
        (conj, 8),
    ] {
        for p in Pipeline::all() {
            let out = translate(&f, p, &Limits::default()).unwrap_or_else(|e| panic!("{f} via {p}: {e}"));
            assert_eq!(out.dfa.num_states(), n, "{f} via {p}");
        }
    }
}

#[test]
fn satisfiability_filter() {
    let f = parse_ltlf("a & !a").unwrap();
    assert!(translate(&f, Pipeline::Reverse, &Limits::default()).unwrap().dfa.is_empty());
}
