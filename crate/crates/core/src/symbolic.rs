//! Symbolic DFAs and the single-exponential PLTLf construction.
//!
//! A state is an assignment to `k` bits. For a past formula `ψ` there is one
//! bit per closure member (its truth at the last letter read) and a final
//! start bit, set only before the first letter. BDD variables `0..k` are the
//! state bits, `k + i` is atom `i`.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::automata::Dfa;
use crate::bdd::{Bdd, NodeId, Var};
use crate::error::{Error, Result};
use crate::formula::{Alphabet, Pltlf};
use crate::limits::Limits;
use crate::semantics::{letters_in_order, Letter, Trace};

#[derive(Debug, Clone)]
pub struct SymbolicDfa {
    alphabet: Alphabet,
    bdd: Bdd,
    /// One transition function per state bit.
    eta: Vec<NodeId>,
    accept: NodeId,
    init: Vec<bool>,
    labels: Vec<String>,
}

/// The state sequence `X₀ … X_e` of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunTrace {
    pub states: Vec<Vec<bool>>,
}

impl RunTrace {
    /// `X₀ … X_{e-1}`.
    pub fn truncated(&self) -> &[Vec<bool>] {
        &self.states[..self.states.len() - 1]
    }
}

impl SymbolicDfa {
    /// Builds `F = (P, X, X₀, η, f)` from its parts; `eta` and `accept` must
    /// live in `bdd` and respect the variable layout.
    pub fn from_parts(alphabet: Alphabet, bdd: Bdd, eta: Vec<NodeId>, accept: NodeId, init: Vec<bool>) -> SymbolicDfa {
        assert_eq!(eta.len(), init.len());
        let k = eta.len();
        let labels = (0..k).map(|q| format!("x{q}")).collect();
        let f = SymbolicDfa { alphabet, bdd, eta, accept, init, labels };
        debug_assert!(f.bdd.support(f.accept).iter().all(|&v| (v as usize) < k));
        debug_assert!(f.eta.iter().all(|&e| f.bdd.support(e).iter().all(|&v| (v as usize) < k + f.alphabet.len())));
        f
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Number of state bits.
    pub fn k(&self) -> usize {
        self.eta.len()
    }

    pub fn bdd(&self) -> &Bdd {
        &self.bdd
    }

    pub fn eta(&self) -> &[NodeId] {
        &self.eta
    }

    pub fn acceptance(&self) -> NodeId {
        self.accept
    }

    pub fn initial(&self) -> &[bool] {
        &self.init
    }

    /// Human-readable name of each state bit.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn atom_var(&self, atom: usize) -> Var {
        (self.k() + atom) as Var
    }

    fn assignment<'s>(&self, state: &'s [bool], letter: Letter) -> impl Fn(Var) -> bool + 's {
        let k = self.k();
        move |v| {
            let v = v as usize;
            if v < k {
                state[v]
            } else {
                letter >> (v - k) & 1 == 1
            }
        }
    }

    pub fn step(&self, state: &[bool], letter: Letter) -> Vec<bool> {
        let a = self.assignment(state, letter);
        self.eta.iter().map(|&e| self.bdd.eval(e, &a)).collect()
    }

    pub fn is_accepting(&self, state: &[bool]) -> bool {
        self.bdd.eval(self.accept, &self.assignment(state, 0))
    }

    pub fn run(&self, trace: &Trace) -> RunTrace {
        let mut states = vec![self.init.clone()];
        for &l in &trace.letters {
            let next = self.step(states.last().unwrap(), l);
            states.push(next);
        }
        RunTrace { states }
    }

    pub fn accepts(&self, trace: &Trace) -> bool {
        !trace.is_empty() && self.is_accepting(self.run(trace).states.last().unwrap())
    }

    /// Explicit DFA over the reachable states; `X₀` becomes state 0 and the
    /// rest are numbered breadth-first with letters in lexicographic order.
    pub fn to_explicit(&self, limits: &Limits<'_>) -> Result<Dfa> {
        let letters = self.alphabet.letter_count();
        let order = letters_in_order(self.alphabet.len());
        let mut ids: HashMap<Vec<bool>, u32> = HashMap::new();
        let mut states = vec![self.init.clone()];
        ids.insert(self.init.clone(), 0);
        let mut queue = VecDeque::from([0usize]);
        let mut delta: Vec<u32> = Vec::new();
        let mut rows: Vec<Vec<u32>> = vec![Vec::new()];
        while let Some(s) = queue.pop_front() {
            limits.check()?;
            let mut row = vec![0; letters];
            for &l in &order {
                let next = self.step(&states[s], l);
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        limits.check_states(states.len() + 1)?;
                        let id = states.len() as u32;
                        ids.insert(next.clone(), id);
                        states.push(next);
                        rows.push(Vec::new());
                        queue.push_back(id as usize);
                        id
                    }
                };
                row[l as usize] = id;
            }
            rows[s] = row;
        }
        for row in &rows {
            delta.extend_from_slice(row);
        }
        let accepting = states.iter().map(|s| self.is_accepting(s)).collect();
        Dfa::new(self.alphabet.clone(), 0, delta, accepting)
    }

    /// `B_f′ = f(η(X, P))`, over state bits and atoms.
    pub fn compose_acceptance(&mut self) -> Result<NodeId> {
        let k = self.k();
        let eta = self.eta.clone();
        self.bdd.vector_compose(self.accept, &|v| ((v as usize) < k).then(|| eta[v as usize]))
    }

    /// Reclaims nodes not reachable from `η`, `f` and `extra`.
    pub fn collect_garbage(&mut self, extra: &mut [NodeId]) {
        let mut roots: Vec<NodeId> = self.eta.clone();
        roots.push(self.accept);
        roots.extend_from_slice(extra);
        self.bdd.collect_garbage(&mut roots);
        let k = self.k();
        self.eta.copy_from_slice(&roots[..k]);
        self.accept = roots[k];
        extra.copy_from_slice(&roots[k + 1..]);
    }

    /// Edge tables of `roots`, duplicating shared nodes per root.
    pub fn extract_edges(&self, roots: &[NodeId]) -> EdgeTables {
        EdgeTables::extract(&self.bdd, roots)
    }
}

/// Single-exponential construction: the returned DFA accepts `ρ` iff
/// `ρ, last ⊨ ψ`, over the atoms of `alphabet` (a superset of `ψ`'s).
pub fn pltlf_to_symbolic_dfa(psi: &Pltlf, alphabet: &Alphabet, limits: &Limits<'_>) -> Result<SymbolicDfa> {
    let closure = psi.closure();
    let members = closure.members();
    let k = members.len() + 1;
    let start = (k - 1) as Var;
    let mut bdd = Bdd::new(limits.max_bdd_nodes);
    let mut new: Vec<NodeId> = Vec::with_capacity(members.len());
    for g in members {
        let idx = |h: &Pltlf| closure.index_of(h).expect("closure is subformula-closed");
        let node = match g {
            Pltlf::True => NodeId::TRUE,
            Pltlf::False => NodeId::FALSE,
            Pltlf::Atom(a) => {
                let i = alphabet.index_of(a).ok_or_else(|| Error::UnknownPredicate(String::from(&**a)))?;
                bdd.var((k + i) as Var)?
            }
            Pltlf::Not(a) => bdd.not(new[idx(a)])?,
            Pltlf::And(a, b) => bdd.and(new[idx(a)], new[idx(b)])?,
            Pltlf::Or(a, b) => bdd.or(new[idx(a)], new[idx(b)])?,
            Pltlf::Yesterday(a) => bdd.var(idx(a) as Var)?,
            Pltlf::Since(a, b) => {
                let prev = bdd.var(idx(g) as Var)?;
                let keep = bdd.and(new[idx(a)], prev)?;
                bdd.or(new[idx(b)], keep)?
            }
        };
        new.push(node);
    }
    new.push(NodeId::FALSE);
    let top = bdd.var(closure.index_of(psi).unwrap() as Var)?;
    let not_start = bdd.literal(start, false)?;
    let accept = bdd.and(top, not_start)?;
    let mut init = vec![false; k];
    init[k - 1] = true;
    let mut labels: Vec<String> = members.iter().map(|g| format!("{g}")).collect();
    labels.push("start".into());
    Ok(SymbolicDfa { alphabet: alphabet.clone(), bdd, eta: new, accept, init, labels })
}

/// Target of a BDD edge in the per-root duplicated node space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Target {
    Node(usize),
    Terminal(bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableNode {
    /// Index of the root whose BDD the node belongs to.
    pub root: usize,
    pub var: Var,
    pub low: Target,
    pub high: Target,
}

/// An edge `from --(var = value)--> to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub var: Var,
    pub value: bool,
    pub to: Target,
}

/// Nodes and edges of a list of BDDs, with a private copy of every node per
/// root so each node belongs to exactly one BDD. Nodes are numbered root by
/// root in depth-first preorder, low child first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeTables {
    nodes: Vec<TableNode>,
    roots: Vec<Target>,
    pre: Vec<Vec<Edge>>,
    pre_t: Vec<[Vec<Edge>; 2]>,
}

impl EdgeTables {
    pub fn extract(bdd: &Bdd, roots: &[NodeId]) -> EdgeTables {
        let mut nodes: Vec<TableNode> = Vec::new();
        let mut root_targets = Vec::with_capacity(roots.len());
        for (r, &root) in roots.iter().enumerate() {
            if root.is_terminal() {
                root_targets.push(Target::Terminal(root == NodeId::TRUE));
                continue;
            }
            let base = nodes.len();
            let mut local: HashMap<NodeId, usize> = HashMap::new();
            let mut order = Vec::new();
            bdd.for_each_node(&[root], |id, var, low, high| {
                local.insert(id, base + order.len());
                order.push((var, low, high));
            });
            let target = |id: NodeId| -> Target {
                if id.is_terminal() {
                    Target::Terminal(id == NodeId::TRUE)
                } else {
                    Target::Node(local[&id])
                }
            };
            for &(var, low, high) in &order {
                nodes.push(TableNode { root: r, var, low: target(low), high: target(high) });
            }
            root_targets.push(Target::Node(base));
        }
        let mut pre = vec![Vec::new(); nodes.len()];
        let mut pre_t = vec![[Vec::new(), Vec::new()]; roots.len()];
        for (from, n) in nodes.iter().enumerate() {
            for (value, to) in [(false, n.low), (true, n.high)] {
                let e = Edge { from, var: n.var, value, to };
                match to {
                    Target::Node(b) => pre[b].push(e),
                    Target::Terminal(c) => pre_t[n.root][c as usize].push(e),
                }
            }
        }
        EdgeTables { nodes, roots: root_targets, pre, pre_t }
    }

    /// `u`, the number of nonterminal nodes after duplication.
    pub fn u(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[TableNode] {
        &self.nodes
    }

    pub fn roots(&self) -> &[Target] {
        &self.roots
    }

    /// Edges into node `α`.
    pub fn pre(&self, alpha: usize) -> &[Edge] {
        &self.pre[alpha]
    }

    /// The two edges out of node `α`.
    pub fn post(&self, alpha: usize) -> [Edge; 2] {
        let n = self.nodes[alpha];
        [
            Edge { from: alpha, var: n.var, value: false, to: n.low },
            Edge { from: alpha, var: n.var, value: true, to: n.high },
        ]
    }

    /// Edges of root `r`'s BDD into terminal `c`.
    pub fn pre_t(&self, r: usize, c: bool) -> &[Edge] {
        &self.pre_t[r][c as usize]
    }

    /// Total number of edges (two per node).
    pub fn edge_count(&self) -> usize {
        2 * self.nodes.len()
    }

    /// Nodes on the evaluation path of every root under `assignment`, and the
    /// terminal each root reaches.
    pub fn follow(&self, assignment: &dyn Fn(Var) -> bool) -> (Vec<bool>, Vec<bool>) {
        let mut visited = vec![false; self.nodes.len()];
        let mut values = Vec::with_capacity(self.roots.len());
        for &root in &self.roots {
            let mut cur = root;
            loop {
                match cur {
                    Target::Terminal(c) => {
                        values.push(c);
                        break;
                    }
                    Target::Node(a) => {
                        visited[a] = true;
                        let n = self.nodes[a];
                        cur = if assignment(n.var) { n.high } else { n.low };
                    }
                }
            }
        }
        (visited, values)
    }
}

impl core::fmt::Display for EdgeTables {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let t = |t: Target| match t {
            Target::Node(a) => format!("N{}", a + 1),
            Target::Terminal(c) => format!("{}", c as u8),
        };
        writeln!(f, "u = {}", self.u())?;
        for (r, root) in self.roots.iter().enumerate() {
            writeln!(f, "root {r}: {}", t(*root))?;
        }
        for (a, n) in self.nodes.iter().enumerate() {
            let pre: Vec<String> = self.pre[a].iter().map(|e| format!("(N{},v{}={})", e.from + 1, e.var, e.value as u8)).collect();
            writeln!(
                f,
                "N{} root={} v{} low={} high={} pre=[{}]",
                a + 1,
                n.root,
                n.var,
                t(n.low),
                t(n.high),
                pre.join(" ")
            )?;
        }
        for (r, sets) in self.pre_t.iter().enumerate() {
            for c in [false, true] {
                let es: Vec<String> = sets[c as usize].iter().map(|e| format!("(N{},v{}={})", e.from + 1, e.var, e.value as u8)).collect();
                writeln!(f, "PreT({r},{}) = [{}]", c as u8, es.join(" "))?;
            }
        }
        Ok(())
    }
}
