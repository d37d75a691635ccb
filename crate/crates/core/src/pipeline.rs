//! End-to-end routes from an LTLf formula to its minimal DFA.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automata::Dfa;
use crate::compact::{build_rev, Flavor};
use crate::compile::compile;
use crate::error::Result;
use crate::formula::Ltlf;
use crate::limits::Limits;
use crate::logic::mso::encode_mso;
use crate::logic::EncodingConfig;
use crate::symbolic::pltlf_to_symbolic_dfa;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pipeline {
    /// Past formula, symbolic DFA, explicit reversal and determinization.
    Reverse,
    Mso(EncodingConfig),
    Cmso(Flavor),
}

impl Pipeline {
    /// The reverse route, the six MSO variations and the two compact ones.
    pub fn all() -> Vec<Pipeline> {
        let mut v = Vec::from([Pipeline::Reverse]);
        v.extend(EncodingConfig::all().into_iter().map(Pipeline::Mso));
        v.push(Pipeline::Cmso(Flavor::Fussy));
        v.push(Pipeline::Cmso(Flavor::Sloppy));
        v
    }

    /// Family name: `reverse`, `mso` or `cmso`.
    pub fn name(&self) -> &'static str {
        match self {
            Pipeline::Reverse => "reverse",
            Pipeline::Mso(_) => "mso",
            Pipeline::Cmso(_) => "cmso",
        }
    }

    /// Variation label, empty for the reverse route.
    pub fn variation(&self) -> String {
        match self {
            Pipeline::Reverse => String::new(),
            Pipeline::Mso(c) => c.label(),
            Pipeline::Cmso(f) => String::from(f.label()),
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pipeline::Reverse => f.write_str("reverse"),
            _ => write!(f, "{}/{}", self.name(), self.variation()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PipelineStats {
    /// Quantified predicates (`m`, `n` or `k + u`); 0 for the reverse route.
    pub quantified: usize,
    pub clauses: usize,
    /// Largest automaton built before minimization.
    pub intermediate_states: usize,
    pub final_states: usize,
    pub final_transitions: usize,
}

#[derive(Debug, Clone)]
pub struct Translation {
    pub dfa: Dfa,
    pub stats: PipelineStats,
}

/// Runs one route; the result is minimal and canonically numbered, over the
/// atoms of `φ`.
pub fn translate(f: &Ltlf, pipeline: Pipeline, limits: &Limits<'_>) -> Result<Translation> {
    let alphabet = f.atoms();
    let mut stats = PipelineStats::default();
    let raw = match pipeline {
        Pipeline::Reverse => {
            let psi = f.reverse_to_past();
            let sym = pltlf_to_symbolic_dfa(&psi, &alphabet, limits)?;
            let explicit = sym.to_explicit(limits)?;
            let det = explicit.reverse().determinize(limits)?;
            stats.intermediate_states = explicit.num_states().max(det.num_states());
            det
        }
        Pipeline::Mso(cfg) => {
            let g = cfg.normalize(f);
            let s = encode_mso(&g, cfg)?;
            stats.quantified = s.quantifier_count();
            let c = compile(&s, limits)?;
            stats.clauses = c.stats.clauses;
            stats.intermediate_states = c.stats.states;
            c.dfa
        }
        Pipeline::Cmso(flavor) => {
            let psi = f.reverse_to_past();
            let mut sym = pltlf_to_symbolic_dfa(&psi, &alphabet, limits)?;
            let rev = build_rev(&mut sym, flavor)?;
            stats.quantified = rev.sentence().quantifier_count();
            let c = compile(rev.sentence(), limits)?;
            stats.clauses = c.stats.clauses;
            stats.intermediate_states = c.stats.states;
            c.dfa
        }
    };
    let dfa = raw.minimize();
    stats.final_states = dfa.num_states();
    stats.final_transitions = dfa.num_edges();
    Ok(Translation { dfa, stats })
}

/// Short description of the statistics, for logs.
pub fn describe(stats: &PipelineStats) -> String {
    format!(
        "quantified={} clauses={} intermediate={} states={} transitions={}",
        stats.quantified, stats.clauses, stats.intermediate_states, stats.final_states, stats.final_transitions
    )
}
