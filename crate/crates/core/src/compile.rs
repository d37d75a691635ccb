//! Compiles a sequential monadic sentence into a DFA.
//!
//! The automaton reads the trace left to right. Each clause instance is
//! conjoined at the step that reads the last position of its window (or its
//! own position when it only looks back), so a state only speaks about
//! positions already read: it is the set of assignments to the predicates
//! that later instances still mention, projected from all consistent runs.
//! Every other variable is projected as soon as no remaining part of the
//! step mentions it. Variables are relative to the position being read, and
//! shifting after each letter keeps the reachable states finite. A word
//! ending at `t` is accepted iff the instances reaching past `t` can still
//! hold with every later position absent.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::automata::Dfa;
use crate::bdd::{Bdd, NodeId, Var};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::logic::{MonadicSentence, PExpr};
use crate::semantics::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CompileStats {
    /// Reachable states, the start state included.
    pub states: usize,
    pub clauses: usize,
    /// Peak BDD store size.
    pub bdd_nodes: usize,
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub dfa: Dfa,
    pub stats: CompileStats,
}

/// Variable layout: positions are interleaved, so predicate `p` at `t + r`
/// (`-back <= r <= 0`) is variable `rank(p)·B + r + back` with `B` blocks.
struct Layout {
    blocks: u32,
    back: i32,
    rank: Vec<u32>,
    slot: Vec<u32>,
}

impl Layout {
    fn pred(&self, r: i32, p: u32) -> Var {
        self.rank[p as usize] * self.blocks + (r + self.back) as u32
    }
    fn offset(&self, v: Var) -> i32 {
        (v % self.blocks) as i32 - self.back
    }
    fn slot(&self, v: Var) -> u32 {
        self.slot[(v / self.blocks) as usize]
    }
}

/// The instance of `e` at `x = t + shift`, where `t` is the position being
/// read. Positions before 0 and after `t` do not exist.
fn instance(bdd: &mut Bdd, layout: &Layout, e: &PExpr, shift: i32, t: usize) -> Result<NodeId> {
    let present = |r: i32| r <= 0 && t as i64 + r as i64 >= 0;
    Ok(match e {
        PExpr::Const(b) => NodeId::constant(*b),
        PExpr::At(p, o) => {
            let r = shift + o;
            if present(r) {
                bdd.var(layout.pred(r, p.0))?
            } else {
                NodeId::FALSE
            }
        }
        PExpr::Exists(o) => NodeId::constant(present(shift + o)),
        PExpr::Not(a) => {
            let a = instance(bdd, layout, a, shift, t)?;
            bdd.not(a)?
        }
        PExpr::And(v) => {
            let mut acc = NodeId::TRUE;
            for a in v {
                let a = instance(bdd, layout, a, shift, t)?;
                acc = bdd.and(acc, a)?;
                if acc == NodeId::FALSE {
                    break;
                }
            }
            acc
        }
        PExpr::Or(v) => {
            let mut acc = NodeId::FALSE;
            for a in v {
                let a = instance(bdd, layout, a, shift, t)?;
                acc = bdd.or(acc, a)?;
                if acc == NodeId::TRUE {
                    break;
                }
            }
            acc
        }
        PExpr::Implies(a, b) => {
            let a = instance(bdd, layout, a, shift, t)?;
            let b = instance(bdd, layout, b, shift, t)?;
            bdd.implies(a, b)?
        }
        PExpr::Iff(a, b) => {
            let a = instance(bdd, layout, a, shift, t)?;
            let b = instance(bdd, layout, b, shift, t)?;
            bdd.iff(a, b)?
        }
    })
}

/// Parts of one step with the letter fixed, and after which part each
/// projectable variable is quantified. Variables no part mentions are
/// listed under `early`.
struct Step {
    parts: Vec<NodeId>,
    after: Vec<Vec<Var>>,
}

fn schedule(bdd: &Bdd, parts: Vec<NodeId>, projectable: &dyn Fn(Var) -> bool) -> Step {
    // greedy order: fewest new variables, then most variables retired
    let supports: Vec<Vec<Var>> = parts.iter().map(|&r| bdd.support(r)).collect();
    let mut uses: HashMap<Var, usize> = HashMap::new();
    for v in supports.iter().flatten() {
        *uses.entry(*v).or_default() += 1;
    }
    let mut live: HashMap<Var, ()> = HashMap::new();
    let mut left: Vec<usize> = (0..parts.len()).collect();
    let mut order = Vec::with_capacity(parts.len());
    while !left.is_empty() {
        let score = |j: usize| {
            let fresh = supports[j].iter().filter(|v| !live.contains_key(*v)).count() as i64;
            let retired = supports[j].iter().filter(|v| projectable(**v) && uses[*v] == 1).count() as i64;
            (fresh - retired, fresh)
        };
        let (at, &j) = left.iter().enumerate().min_by_key(|(_, &j)| score(j)).unwrap();
        left.swap_remove(at);
        for v in &supports[j] {
            live.insert(*v, ());
            *uses.get_mut(v).unwrap() -= 1;
        }
        order.push(j);
    }
    let mut after = Vec::with_capacity(parts.len());
    let mut seen: HashMap<Var, usize> = HashMap::new();
    for v in supports.iter().flatten() {
        *seen.entry(*v).or_default() += 1;
    }
    for &j in &order {
        let mut now = Vec::new();
        for v in &supports[j] {
            let n = seen.get_mut(v).unwrap();
            *n -= 1;
            if *n == 0 && projectable(*v) {
                now.push(*v);
            }
        }
        after.push(now);
    }
    Step { parts: order.iter().map(|&j| parts[j]).collect(), after }
}

/// Conjoins `start` with the parts, quantifying on schedule.
fn conjoin(bdd: &mut Bdd, start: NodeId, step: &Step) -> Result<NodeId> {
    let mut acc = start;
    for (part, now) in step.parts.iter().zip(&step.after) {
        if acc == NodeId::FALSE {
            break;
        }
        acc = bdd.and(acc, *part)?;
        if !now.is_empty() {
            acc = bdd.exists(acc, &|v| now.contains(&v))?;
        }
    }
    Ok(acc)
}

fn collect(bdd: &mut Bdd, states: &mut [(usize, NodeId)], cubes: &mut [NodeId], steps: &mut [Step], finals: &mut [Step]) {
    let mut roots: Vec<NodeId> = states.iter().map(|s| s.1).collect();
    roots.extend(cubes.iter().copied());
    for st in steps.iter().chain(finals.iter()) {
        roots.extend(st.parts.iter().copied());
    }
    bdd.collect_garbage(&mut roots);
    let mut rest = roots.into_iter();
    for s in states.iter_mut() {
        s.1 = rest.next().unwrap();
    }
    for c in cubes.iter_mut() {
        *c = rest.next().unwrap();
    }
    for st in steps.iter_mut().chain(finals.iter_mut()) {
        for p in st.parts.iter_mut() {
            *p = rest.next().unwrap();
        }
    }
}

/// DFA accepting the non-empty traces that extend to a model of `s`.
pub fn compile(s: &MonadicSentence, limits: &Limits<'_>) -> Result<Compiled> {
    let atoms = s.alphabet().len();
    let preds = s.preds().len();
    if preds > limits.max_width {
        return Err(Error::BudgetExceeded { what: "predicate width", limit: limits.max_width });
    }
    let clauses = s.lower();
    // instance at x is added at step x + delay
    let delay: Vec<i32> = clauses.iter().map(|c| c.offset_range().1).collect();
    let back = clauses.iter().zip(&delay).map(|(c, d)| d - c.offset_range().0).max().unwrap_or(0);
    let slot: Vec<u32> = s.order().iter().map(|p| p.0).collect();
    let mut rank = vec![0; preds];
    for (i, &p) in slot.iter().enumerate() {
        rank[p as usize] = i as u32;
    }
    let layout = Layout { blocks: back as u32 + 1, back, rank, slot };
    // (p, r) is still needed after the step iff r >= keep[p]
    let mut keep = vec![i32::MAX; preds];
    for (c, d) in clauses.iter().zip(&delay) {
        c.visit_atoms(&mut |p, o| keep[p.index()] = keep[p.index()].min(1 - d + o));
    }
    let dropped = |v: Var| layout.offset(v) < keep[layout.slot(v) as usize];
    let fix_letter = |v: Var, letter: Letter| -> Option<bool> {
        let slot = layout.slot(v);
        (layout.offset(v) == 0 && (slot as usize) < atoms).then(|| letter >> slot & 1 == 1)
    };
    let mut bdd = Bdd::new(limits.max_bdd_nodes);

    // steps 0 .. phases-1 are told apart, later steps look alike
    let phases = back as usize + 1;
    let letter_count = 1usize << atoms;
    let mut steps: Vec<Step> = Vec::with_capacity(phases * letter_count);
    let mut finals: Vec<Step> = Vec::with_capacity(phases * letter_count);
    for t in 0..phases {
        let mut step_parts = Vec::new();
        let mut final_parts = Vec::new();
        for (c, &d) in clauses.iter().zip(&delay) {
            limits.check()?;
            if t as i32 >= d {
                step_parts.push(instance(&mut bdd, &layout, c, -d, t)?);
            }
            // instances never added when the word ends at t
            for x in (1 - d).max(-(t as i32))..=0 {
                final_parts.push(instance(&mut bdd, &layout, c, x, t)?);
            }
        }
        for l in 0..letter_count as Letter {
            limits.check()?;
            for (list, out, all) in [(&step_parts, &mut steps, false), (&final_parts, &mut finals, true)] {
                let mut fixed = Vec::new();
                for &inst in list.iter() {
                    let r = bdd.restrict_with(inst, &|v| fix_letter(v, l))?;
                    if r != NodeId::TRUE {
                        fixed.push(r);
                    }
                }
                let step = if all { schedule(&bdd, fixed, &|_| true) } else { schedule(&bdd, fixed, &dropped) };
                out.push(step);
            }
        }
    }
    // letter bits at t that later steps still read
    let mut cubes = Vec::with_capacity(letter_count);
    for l in 0..letter_count as Letter {
        let mut cube = NodeId::TRUE;
        for a in (0..atoms).filter(|&a| keep[a] <= 0) {
            let v = bdd.var(layout.pred(0, a as u32))?;
            let lit = if l >> a & 1 == 1 { v } else { bdd.not(v)? };
            cube = bdd.and(cube, lit)?;
        }
        cubes.push(cube);
    }

    // state 0 is the start; a state is its phase and its obligation
    let mut states: Vec<(usize, NodeId)> = vec![(0, NodeId::TRUE)];
    let mut accepting = vec![false];
    let mut ids: HashMap<(usize, NodeId), u32> = HashMap::new();
    let mut delta: Vec<u32> = Vec::new();
    let mut peak = bdd.len();
    let mut i = 0;
    while i < states.len() {
        limits.check()?;
        let phase = states[i].0;
        let next_phase = (phase + 1).min(phases - 1);
        let mut row = vec![0u32; letter_count];
        for (l, cell) in row.iter_mut().enumerate() {
            peak = peak.max(bdd.len());
            if bdd.len() > limits.max_bdd_nodes / 2 {
                collect(&mut bdd, &mut states, &mut cubes, &mut steps, &mut finals);
                ids = states.iter().enumerate().skip(1).map(|(j, &s)| (s, j as u32)).collect();
            }
            let obligation = states[i].1;
            let step = &steps[phase * letter_count + l];
            // variables only the obligation mentions go first
            let early = bdd.exists(obligation, &|v| dropped(v) && !step.after.iter().any(|a| a.contains(&v)))?;
            let start = bdd.and(early, cubes[l])?;
            let acc = conjoin(&mut bdd, start, step)?;
            let now = bdd.exists(acc, &dropped)?;
            let next = bdd.rename_monotone(now, &|v| v - 1)?;
            *cell = match ids.get(&(next_phase, next)) {
                Some(&id) => id,
                None => {
                    limits.check_states(states.len() + 1)?;
                    let fin = &finals[phase * letter_count + l];
                    let ends = conjoin(&mut bdd, now, fin)?;
                    let id = states.len() as u32;
                    ids.insert((next_phase, next), id);
                    states.push((next_phase, next));
                    accepting.push(ends != NodeId::FALSE);
                    id
                }
            };
        }
        delta.extend_from_slice(&row);
        i += 1;
    }
    peak = peak.max(bdd.len());
    let dfa = Dfa::new(s.alphabet().clone(), 0, delta, accepting)?;
    Ok(Compiled { dfa, stats: CompileStats { states: states.len(), clauses: s.clause_count(), bdd_nodes: peak } })
}
#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::mso::encode_mso;
    use crate::parse::parse_ltlf;
    use crate::semantics::{all_traces, satisfies_ltlf};

    #[test]
    fn mso_encodings_compile_to_the_language() {
        for src in ["p", "F a", "G a", "a U b", "X a", "N (a & b)", "G (a -> X b)", "!F a"] {
            let f = parse_ltlf(src).unwrap();
            let alphabet = f.atoms();
            for cfg in crate::logic::EncodingConfig::all() {
                let g = cfg.normalize(&f);
                let s = encode_mso(&g, cfg).unwrap();
                let c = compile(&s, &Limits::default()).unwrap();
                for t in all_traces(alphabet.len(), 4) {
                    assert_eq!(c.dfa.accepts(&t), satisfies_ltlf(&t, &alphabet, &f), "{src} {cfg} {t:?}");
                }
            }
        }
    }

    #[test]
    fn minimal_sizes() {
        let cfg = "bnf-fussy-full".parse().unwrap();
        for (src, n) in [("p", 3), ("F a", 2), ("G a", 2)] {
            let f = parse_ltlf(src).unwrap().to_bnf();
            let d = compile(&encode_mso(&f, cfg).unwrap(), &Limits::default()).unwrap().dfa.minimize();
            assert_eq!(d.num_states(), n, "{src}");
        }
    }
}
