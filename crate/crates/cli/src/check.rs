//! Runs every pipeline on a formula and cross-checks the results against
//! each other and against the trace semantics.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use ltlf_core::compile::compile;
use ltlf_core::logic::mso::encode_mso_unchecked;
use ltlf_core::logic::{Constraint, EncodingConfig, NormalForm};
use ltlf_core::pipeline::{translate, Pipeline, PipelineStats, Translation};
use ltlf_core::semantics::{all_traces, satisfies_ltlf, trace_count};
use ltlf_core::{Dfa, Error, Limits, Ltlf};

use crate::config::Settings;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Done(PipelineStats),
    Timeout,
    /// Budget exhausted or a hard error; the message says which.
    Failed(String),
}

#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub pipeline: Pipeline,
    pub outcome: Outcome,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Satisfiability {
    Unsatisfiable,
    Valid,
    Contingent,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Consistent,
    Mismatch(String),
    /// No pipeline finished.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub id: usize,
    pub formula: Ltlf,
    pub runs: Vec<PipelineRun>,
    pub satisfiability: Satisfiability,
    /// Longest trace length checked against the semantics.
    pub trace_len: usize,
    pub verdict: Verdict,
}

impl PipelineReport {
    pub fn is_mismatch(&self) -> bool {
        matches!(self.verdict, Verdict::Mismatch(_))
    }

    /// Minimized state count, equal across the pipelines that finished.
    pub fn states(&self) -> Option<usize> {
        self.runs.iter().find_map(|r| match &r.outcome {
            Outcome::Done(s) => Some(s.final_states),
            _ => None,
        })
    }
}

/// Replaces the constraint of BNF variations by its opposite, producing the
/// unsound sloppy-BNF sentences. For testing the harness only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Fault {
    pub swap_bnf_constraint: bool,
}

fn run_faulty(f: &Ltlf, cfg: EncodingConfig, limits: &Limits<'_>) -> ltlf_core::Result<Translation> {
    let flipped = match cfg.constraint() {
        Constraint::Fussy => Constraint::Sloppy,
        Constraint::Sloppy => Constraint::Fussy,
    };
    let cfg = EncodingConfig::new_unchecked(cfg.normal(), flipped, cfg.vars());
    let s = encode_mso_unchecked(&cfg.normalize(f), cfg);
    let c = compile(&s, limits)?;
    let dfa = c.dfa.minimize();
    let stats = PipelineStats {
        quantified: s.quantifier_count(),
        clauses: c.stats.clauses,
        intermediate_states: c.stats.states,
        final_states: dfa.num_states(),
        final_transitions: dfa.num_edges(),
    };
    Ok(Translation { dfa, stats })
}

/// One pipeline under the settings' caps and deadline.
pub fn run_pipeline(f: &Ltlf, pipeline: Pipeline, settings: &Settings, fault: Fault) -> (PipelineRun, Option<Dfa>) {
    let start = Instant::now();
    let deadline = settings.timeout.map(|t| start + t);
    let stop = move || deadline.is_some_and(|d| Instant::now() >= d);
    let limits = settings.limits().with_interrupt(&stop);
    let result = match pipeline {
        Pipeline::Mso(cfg) if fault.swap_bnf_constraint && cfg.normal() == NormalForm::Bnf => {
            run_faulty(f, cfg, &limits)
        }
        _ => translate(f, pipeline, &limits),
    };
    let elapsed = start.elapsed();
    let (outcome, dfa) = match result {
        Ok(t) => (Outcome::Done(t.stats), Some(t.dfa)),
        Err(Error::Interrupted) => (Outcome::Timeout, None),
        Err(e) => (Outcome::Failed(e.to_string()), None),
    };
    (PipelineRun { pipeline, outcome, elapsed }, dfa)
}

/// Longest length `≤ bound` whose trace count fits the evaluation budget.
pub fn effective_trace_len(atoms: usize, bound: usize, budget: usize) -> usize {
    (0..=bound).rev().find(|&l| trace_count(atoms, l) <= budget).unwrap_or(0)
}

pub fn check_formula(id: usize, f: &Ltlf, settings: &Settings, fault: Fault) -> PipelineReport {
    let mut runs = Vec::new();
    let mut dfas: Vec<(Pipeline, Dfa)> = Vec::new();
    for p in Pipeline::all() {
        let (run, dfa) = run_pipeline(f, p, settings, fault);
        runs.push(run);
        if let Some(d) = dfa {
            dfas.push((p, d));
        }
    }
    let alphabet = f.atoms();
    let trace_len = effective_trace_len(alphabet.len(), settings.trace_len, settings.max_trace_evaluations);
    let mut verdict = Verdict::Consistent;
    let mut satisfiability = Satisfiability::Unknown;
    if let Some((p0, d0)) = dfas.first() {
        satisfiability = if d0.is_empty() {
            Satisfiability::Unsatisfiable
        } else if d0.is_universal() {
            Satisfiability::Valid
        } else {
            Satisfiability::Contingent
        };
        for (p, d) in &dfas[1..] {
            if !d0.isomorphic(d).unwrap_or(false) {
                verdict = Verdict::Mismatch(format!(
                    "{p0} has {} states, {p} has {} states or a different language",
                    d0.num_states(),
                    d.num_states()
                ));
                break;
            }
        }
        if verdict == Verdict::Consistent {
            // isomorphic automata agree on every trace; one check covers all
            if let Some(t) = all_traces(alphabet.len(), trace_len).find(|t| d0.accepts(t) != satisfies_ltlf(t, &alphabet, f)) {
                verdict = Verdict::Mismatch(format!(
                    "automata disagree with the semantics on {}",
                    crate::formats::format_trace(&t, &alphabet)
                ));
            }
        }
    } else {
        verdict = Verdict::Inconclusive;
    }
    PipelineReport { id, formula: f.clone(), runs, satisfiability, trace_len, verdict }
}

/// Maps `work` over `items` on up to `workers` threads; results keep the
/// input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], workers: usize, work: impl Fn(usize, &T) -> R + Sync) -> Vec<R> {
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<R>>> = Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers.clamp(1, items.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(item) = items.get(i) else { break };
                let r = work(i, item);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    results.into_inner().unwrap().into_iter().map(|r| r.expect("every item processed")).collect()
}

pub fn check_all(formulas: &[Ltlf], settings: &Settings, fault: Fault) -> Vec<PipelineReport> {
    par_map(formulas, settings.workers, |i, f| check_formula(i, f, settings, fault))
}

pub fn describe(r: &PipelineReport) -> String {
    let mut out = String::new();
    let status = match &r.verdict {
        Verdict::Consistent => "ok",
        Verdict::Mismatch(_) => "MISMATCH",
        Verdict::Inconclusive => "inconclusive",
    };
    write!(out, "{status} #{} {}", r.id, r.formula).unwrap();
    if let Some(n) = r.states() {
        write!(out, " states={n}").unwrap();
    }
    let sat = match r.satisfiability {
        Satisfiability::Unsatisfiable => " unsatisfiable",
        Satisfiability::Valid => " valid",
        _ => "",
    };
    write!(out, "{sat} traces<={}", r.trace_len).unwrap();
    if let Verdict::Mismatch(why) = &r.verdict {
        write!(out, "\n  {why}").unwrap();
    }
    for run in &r.runs {
        match &run.outcome {
            Outcome::Done(_) => {}
            Outcome::Timeout => write!(out, "\n  {}: timeout", run.pipeline).unwrap(),
            Outcome::Failed(e) => write!(out, "\n  {}: {e}", run.pipeline).unwrap(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ltlf_core::parse::parse_ltlf;

    #[test]
    fn consistent_on_small_formulas() {
        let s = Settings::default();
        for src in ["p", "F a", "G (a -> X b)"] {
            let r = check_formula(0, &parse_ltlf(src).unwrap(), &s, Fault::default());
            assert_eq!(r.verdict, Verdict::Consistent, "{}", describe(&r));
            assert_eq!(r.runs.len(), 9);
        }
    }

    #[test]
    fn injected_fault_is_caught() {
        let r = check_formula(0, &parse_ltlf("!F a").unwrap(), &Settings::default(), Fault { swap_bnf_constraint: true });
        assert!(r.is_mismatch());
    }

    #[test]
    fn unsatisfiable_is_flagged() {
        let r = check_formula(0, &parse_ltlf("false").unwrap(), &Settings::default(), Fault::default());
        assert_eq!(r.satisfiability, Satisfiability::Unsatisfiable);
        assert_eq!(r.verdict, Verdict::Consistent);
    }

    #[test]
    fn trace_budget() {
        assert_eq!(effective_trace_len(2, 4, 1_000_000), 4);
        assert_eq!(effective_trace_len(6, 4, 2_000_000), 3);
    }

    #[test]
    fn par_map_keeps_order() {
        let v: Vec<usize> = (0..100).collect();
        assert_eq!(par_map(&v, 4, |_, x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }
}
