mod common;

use common::*;
use ltlf_core::formula::{Alphabet, Ltlf, PrintOptions};
use ltlf_core::parse::{parse_ltlf, parse_pltlf};
use ltlf_core::semantics::{
    bounded_language_ltlf, eval_ltlf_at, eval_pltlf_at, satisfies_ltlf, satisfies_pltlf, trace_count,
};
use ltlf_core::{Error, Limits, Trace};
use proptest::prelude::*;

#[test]
fn eval_examples() {
    let a = Alphabet::from_strs(["a"]);
    let f = parse_ltlf("F a").unwrap();
    assert!(eval_ltlf_at(&Trace::new(vec![0, 1]), &a, &f, 0).unwrap());
    assert!(!eval_ltlf_at(&Trace::new(vec![0, 0]), &a, &f, 0).unwrap());
    assert_eq!(eval_ltlf_at(&Trace::new(vec![]), &a, &f, 0), Err(Error::EmptyTrace));
    assert_eq!(
        eval_ltlf_at(&Trace::new(vec![0]), &a, &f, 3),
        Err(Error::PositionOutOfRange { position: 3, len: 1 })
    );
    let g = parse_ltlf("G a").unwrap();
    assert!(eval_ltlf_at(&Trace::new(vec![1, 1]), &a, &g, 0).unwrap());
    let pq = Alphabet::from_strs(["p", "q"]);
    let s = parse_pltlf("p S q").unwrap();
    // [{q},{p}]
    assert!(eval_pltlf_at(&Trace::new(vec![0b10, 0b01]), &pq, &s, 1).unwrap());
    let y = parse_pltlf("Y p").unwrap();
    assert!(!eval_pltlf_at(&Trace::new(vec![1]), &pq, &y, 0).unwrap());
}

#[test]
fn bounded_language_of_eventually() {
    let a = Alphabet::from_strs(["a"]);
    let f = parse_ltlf("F a").unwrap();
    let got = bounded_language_ltlf(&f, &a, 2, &Limits::default()).unwrap();
    // lexicographic: [{}] < [{a}] letterwise, shorter prefix first
    let want: Vec<Trace> = [vec![0, 1], vec![1], vec![1, 0], vec![1, 1]].into_iter().map(Trace::new).collect();
    assert_eq!(got, want);
    assert_eq!(trace_count(1, 2), 6);
}

#[test]
fn bounded_language_cap_is_an_error() {
    let f = parse_ltlf("a").unwrap();
    let limits = Limits { max_trace_evaluations: 10, ..Limits::default() };
    let err = bounded_language_ltlf(&f, &ab(), 4, &limits).unwrap_err();
    assert!(err.is_budget());
}

#[test]
fn corpus_matches_direct_semantics() {
    let al = ab();
    for f in corpus() {
        for t in traces(2, 4) {
            assert_eq!(satisfies_ltlf(&t, &al, &f), models(&f, &t, &al), "{f} on {t:?}");
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    assert_eq!(parse_ltlf("a &").unwrap_err().position(), 3);
    assert_eq!(parse_ltlf("a $ b").unwrap_err().position(), 2);
    assert_eq!(parse_ltlf("Y a").unwrap_err().position(), 0);
    assert!(parse_pltlf("a U b").is_err());
}

proptest! {
    #[test]
    fn truth_matches_oracle(f in arb_ltlf(3), t in arb_trace(2, 5)) {
        let al = ab();
        for i in 0..t.len() {
            prop_assert_eq!(eval_ltlf_at(&t, &al, &f, i).unwrap(), holds(&f, &t, &al, i));
        }
    }

    #[test]
    fn past_truth_matches_oracle(f in arb_pltlf(3), t in arb_trace(2, 5)) {
        let al = Alphabet::from_strs(["p", "q"]);
        for i in 0..t.len() {
            prop_assert_eq!(eval_pltlf_at(&t, &al, &f, i).unwrap(), holds_past(&f, &t, &al, i));
        }
    }

    #[test]
    fn print_parse_round_trip(f in arb_ltlf(4)) {
        prop_assert_eq!(parse_ltlf(&f.to_string()).unwrap(), f.clone());
        let full = PrintOptions { full_parens: true, sugar: false };
        prop_assert_eq!(parse_ltlf(&f.to_string_with(full)).unwrap(), f);
    }

    #[test]
    fn normal_forms_preserve_meaning(f in arb_ltlf(3), t in arb_trace(2, 4)) {
        let al = ab();
        let (n, b) = (f.to_nnf(), f.to_bnf());
        prop_assert!(n.is_nnf());
        prop_assert!(b.is_bnf());
        let want = models(&f, &t, &al);
        prop_assert_eq!(models(&n, &t, &al), want);
        prop_assert_eq!(models(&b, &t, &al), want);
    }

    /// ρ ⊨ φ iff ρ^R ⊨ φ^R at the last position.
    #[test]
    fn reversal(f in arb_ltlf(3), t in arb_trace(2, 4)) {
        let al = ab();
        let psi = f.reverse_to_past();
        prop_assert_eq!(satisfies_pltlf(&t.reversed(), &al, &psi), models(&f, &t, &al));
    }

    #[test]
    fn closure_is_subformula_closed(f in arb_ltlf(4)) {
        let cl = f.closure();
        prop_assert_eq!(cl.members().last(), Some(&f));
        for (i, g) in cl.members().iter().enumerate() {
            for c in g.children().iter() {
                prop_assert!(cl.index_of(c).unwrap() < i);
            }
        }
        prop_assert!(cl.n() <= cl.m());
    }
}

#[test]
fn constants_and_missing_atoms() {
    let al = Alphabet::from_strs(["a"]);
    let t = Trace::new(vec![1]);
    assert!(satisfies_ltlf(&t, &al, &Ltlf::True));
    assert!(!satisfies_ltlf(&t, &al, &Ltlf::False));
    assert!(!satisfies_ltlf(&t, &al, &Ltlf::atom("zz")));
    assert!(!satisfies_ltlf(&Trace::new(vec![]), &al, &Ltlf::True));
}
