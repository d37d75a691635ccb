//! Reduced ordered binary decision diagrams with hash-consing.
//!
//! Variables are plain indices; a smaller index sits closer to the root.
//! Within one [`Bdd`] store two functions are equal iff their [`NodeId`]s
//! are equal.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};

pub type Var = u32;

const TERMINAL_VAR: Var = Var::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(u32);

impl NodeId {
    pub const FALSE: NodeId = NodeId(0);
    pub const TRUE: NodeId = NodeId(1);

    pub fn constant(value: bool) -> NodeId {
        if value {
            NodeId::TRUE
        } else {
            NodeId::FALSE
        }
    }

    pub fn is_terminal(self) -> bool {
        self.0 < 2
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    var: Var,
    low: NodeId,
    high: NodeId,
}

#[derive(Debug, Clone)]
pub struct Bdd {
    nodes: Vec<Node>,
    unique: HashMap<Node, NodeId>,
    ite_cache: HashMap<(NodeId, NodeId, NodeId), NodeId>,
    max_nodes: usize,
}

const CACHE_LIMIT: usize = 1 << 22;

impl Default for Bdd {
    fn default() -> Self {
        Bdd::new(1 << 20)
    }
}

impl Bdd {
    pub fn new(max_nodes: usize) -> Bdd {
        let term = |v: u32| Node { var: TERMINAL_VAR, low: NodeId(v), high: NodeId(v) };
        Bdd { nodes: vec![term(0), term(1)], unique: HashMap::new(), ite_cache: HashMap::new(), max_nodes }
    }

    /// Number of nodes in the store, terminals included.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `(var, low, high)` of a nonterminal node.
    pub fn node(&self, id: NodeId) -> Option<(Var, NodeId, NodeId)> {
        if id.is_terminal() {
            return None;
        }
        let n = self.nodes[id.index()];
        Some((n.var, n.low, n.high))
    }

    pub fn top_var(&self, id: NodeId) -> Option<Var> {
        self.node(id).map(|n| n.0)
    }

    fn var_of(&self, id: NodeId) -> Var {
        self.nodes[id.index()].var
    }

    pub fn mk(&mut self, var: Var, low: NodeId, high: NodeId) -> Result<NodeId> {
        if low == high {
            return Ok(low);
        }
        debug_assert!(var < self.var_of(low) && var < self.var_of(high), "variable order violated");
        let node = Node { var, low, high };
        if let Some(&id) = self.unique.get(&node) {
            return Ok(id);
        }
        if self.nodes.len() >= self.max_nodes {
            return Err(Error::BudgetExceeded { what: "BDD node", limit: self.max_nodes });
        }
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        self.unique.insert(node, id);
        Ok(id)
    }

    /// The function `v`.
    pub fn var(&mut self, v: Var) -> Result<NodeId> {
        self.mk(v, NodeId::FALSE, NodeId::TRUE)
    }

    /// `v` when `positive`, else `¬v`.
    pub fn literal(&mut self, v: Var, positive: bool) -> Result<NodeId> {
        if positive {
            self.mk(v, NodeId::FALSE, NodeId::TRUE)
        } else {
            self.mk(v, NodeId::TRUE, NodeId::FALSE)
        }
    }

    fn cofactors(&self, f: NodeId, v: Var) -> (NodeId, NodeId) {
        let n = self.nodes[f.index()];
        if n.var == v {
            (n.low, n.high)
        } else {
            (f, f)
        }
    }

    pub fn ite(&mut self, f: NodeId, g: NodeId, h: NodeId) -> Result<NodeId> {
        if f == NodeId::TRUE || g == h {
            return Ok(g);
        }
        if f == NodeId::FALSE {
            return Ok(h);
        }
        if g == NodeId::TRUE && h == NodeId::FALSE {
            return Ok(f);
        }
        if let Some(&r) = self.ite_cache.get(&(f, g, h)) {
            return Ok(r);
        }
        let v = self.var_of(f).min(self.var_of(g)).min(self.var_of(h));
        let (f0, f1) = self.cofactors(f, v);
        let (g0, g1) = self.cofactors(g, v);
        let (h0, h1) = self.cofactors(h, v);
        let low = self.ite(f0, g0, h0)?;
        let high = self.ite(f1, g1, h1)?;
        let r = self.mk(v, low, high)?;
        if self.ite_cache.len() >= CACHE_LIMIT {
            self.ite_cache.clear();
        }
        self.ite_cache.insert((f, g, h), r);
        Ok(r)
    }

    pub fn not(&mut self, f: NodeId) -> Result<NodeId> {
        self.ite(f, NodeId::FALSE, NodeId::TRUE)
    }

    pub fn and(&mut self, f: NodeId, g: NodeId) -> Result<NodeId> {
        self.ite(f, g, NodeId::FALSE)
    }

    pub fn or(&mut self, f: NodeId, g: NodeId) -> Result<NodeId> {
        self.ite(f, NodeId::TRUE, g)
    }

    pub fn xor(&mut self, f: NodeId, g: NodeId) -> Result<NodeId> {
        let ng = self.not(g)?;
        self.ite(f, ng, g)
    }

    pub fn iff(&mut self, f: NodeId, g: NodeId) -> Result<NodeId> {
        let ng = self.not(g)?;
        self.ite(f, g, ng)
    }

    pub fn implies(&mut self, f: NodeId, g: NodeId) -> Result<NodeId> {
        self.ite(f, g, NodeId::TRUE)
    }

    pub fn and_all(&mut self, fs: impl IntoIterator<Item = NodeId>) -> Result<NodeId> {
        let mut acc = NodeId::TRUE;
        for f in fs {
            acc = self.and(acc, f)?;
        }
        Ok(acc)
    }

    pub fn or_all(&mut self, fs: impl IntoIterator<Item = NodeId>) -> Result<NodeId> {
        let mut acc = NodeId::FALSE;
        for f in fs {
            acc = self.or(acc, f)?;
        }
        Ok(acc)
    }

    /// `f` with `var` fixed to `value`.
    pub fn restrict(&mut self, f: NodeId, var: Var, value: bool) -> Result<NodeId> {
        let mut memo = HashMap::new();
        self.restrict_rec(f, &|v| (v == var).then_some(value), &mut memo)
    }

    /// `f` with several variables fixed at once.
    pub fn restrict_with(&mut self, f: NodeId, fixed: &dyn Fn(Var) -> Option<bool>) -> Result<NodeId> {
        let mut memo = HashMap::new();
        self.restrict_rec(f, fixed, &mut memo)
    }

    fn restrict_rec(
        &mut self,
        f: NodeId,
        fixed: &dyn Fn(Var) -> Option<bool>,
        memo: &mut HashMap<NodeId, NodeId>,
    ) -> Result<NodeId> {
        if f.is_terminal() {
            return Ok(f);
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let n = self.nodes[f.index()];
        let r = match fixed(n.var) {
            Some(true) => self.restrict_rec(n.high, fixed, memo)?,
            Some(false) => self.restrict_rec(n.low, fixed, memo)?,
            None => {
                let low = self.restrict_rec(n.low, fixed, memo)?;
                let high = self.restrict_rec(n.high, fixed, memo)?;
                self.mk(n.var, low, high)?
            }
        };
        memo.insert(f, r);
        Ok(r)
    }

    /// `f[var := g]`.
    pub fn compose(&mut self, f: NodeId, var: Var, g: NodeId) -> Result<NodeId> {
        let hi = self.restrict(f, var, true)?;
        let lo = self.restrict(f, var, false)?;
        self.ite(g, hi, lo)
    }

    /// Simultaneous substitution: every variable `v` with `subst(v) = Some(g)`
    /// is replaced by `g`.
    pub fn vector_compose(&mut self, f: NodeId, subst: &dyn Fn(Var) -> Option<NodeId>) -> Result<NodeId> {
        let mut memo = HashMap::new();
        self.vcompose_rec(f, subst, &mut memo)
    }

    fn vcompose_rec(
        &mut self,
        f: NodeId,
        subst: &dyn Fn(Var) -> Option<NodeId>,
        memo: &mut HashMap<NodeId, NodeId>,
    ) -> Result<NodeId> {
        if f.is_terminal() {
            return Ok(f);
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let n = self.nodes[f.index()];
        let low = self.vcompose_rec(n.low, subst, memo)?;
        let high = self.vcompose_rec(n.high, subst, memo)?;
        let cond = match subst(n.var) {
            Some(g) => g,
            None => self.var(n.var)?,
        };
        let r = self.ite(cond, high, low)?;
        memo.insert(f, r);
        Ok(r)
    }

    /// Existential quantification of every variable selected by `quantify`.
    pub fn exists(&mut self, f: NodeId, quantify: &dyn Fn(Var) -> bool) -> Result<NodeId> {
        let mut memo = HashMap::new();
        self.exists_rec(f, quantify, &mut memo)
    }

    fn exists_rec(&mut self, f: NodeId, q: &dyn Fn(Var) -> bool, memo: &mut HashMap<NodeId, NodeId>) -> Result<NodeId> {
        if f.is_terminal() {
            return Ok(f);
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let n = self.nodes[f.index()];
        let low = self.exists_rec(n.low, q, memo)?;
        let r = if q(n.var) {
            if low == NodeId::TRUE {
                NodeId::TRUE
            } else {
                let high = self.exists_rec(n.high, q, memo)?;
                self.or(low, high)?
            }
        } else {
            let high = self.exists_rec(n.high, q, memo)?;
            self.mk(n.var, low, high)?
        };
        memo.insert(f, r);
        Ok(r)
    }

    /// Renames variables by a strictly increasing map, so the shape of the
    /// diagram is kept.
    pub fn rename_monotone(&mut self, f: NodeId, map: &dyn Fn(Var) -> Var) -> Result<NodeId> {
        let mut memo = HashMap::new();
        self.rename_rec(f, map, &mut memo)
    }

    fn rename_rec(&mut self, f: NodeId, map: &dyn Fn(Var) -> Var, memo: &mut HashMap<NodeId, NodeId>) -> Result<NodeId> {
        if f.is_terminal() {
            return Ok(f);
        }
        if let Some(&r) = memo.get(&f) {
            return Ok(r);
        }
        let n = self.nodes[f.index()];
        let low = self.rename_rec(n.low, map, memo)?;
        let high = self.rename_rec(n.high, map, memo)?;
        let r = self.mk(map(n.var), low, high)?;
        memo.insert(f, r);
        Ok(r)
    }

    pub fn eval(&self, f: NodeId, assignment: &dyn Fn(Var) -> bool) -> bool {
        let mut cur = f;
        while !cur.is_terminal() {
            let n = self.nodes[cur.index()];
            cur = if assignment(n.var) { n.high } else { n.low };
        }
        cur == NodeId::TRUE
    }

    /// Variables `f` depends on, ascending.
    pub fn support(&self, f: NodeId) -> Vec<Var> {
        let mut vars = Vec::new();
        self.for_each_node(&[f], |_, var, _, _| vars.push(var));
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Visits every nonterminal node reachable from `roots` once, in DFS
    /// preorder (low before high).
    pub fn for_each_node(&self, roots: &[NodeId], mut visit: impl FnMut(NodeId, Var, NodeId, NodeId)) {
        let mut seen = hashbrown::HashSet::new();
        let mut stack: Vec<NodeId> = roots.iter().rev().copied().collect();
        while let Some(id) = stack.pop() {
            if id.is_terminal() || !seen.insert(id) {
                continue;
            }
            let n = self.nodes[id.index()];
            visit(id, n.var, n.low, n.high);
            stack.push(n.high);
            stack.push(n.low);
        }
    }

    /// Nonterminal nodes reachable from `roots`, shared nodes counted once.
    pub fn node_count(&self, roots: &[NodeId]) -> usize {
        let mut count = 0;
        self.for_each_node(roots, |_, _, _, _| count += 1);
        count
    }

    /// Satisfying assignments of `f` over `vars` (ascending). `f` must not
    /// depend on other variables.
    pub fn all_sat(&self, f: NodeId, vars: &[Var]) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        let mut cur = vec![false; vars.len()];
        self.sat_rec(f, vars, 0, &mut cur, &mut out);
        out
    }

    fn sat_rec(&self, f: NodeId, vars: &[Var], i: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if f == NodeId::FALSE {
            return;
        }
        if i == vars.len() {
            debug_assert!(f == NodeId::TRUE, "function depends on variables outside the list");
            out.push(cur.clone());
            return;
        }
        let (lo, hi) = self.cofactors(f, vars[i]);
        cur[i] = false;
        self.sat_rec(lo, vars, i + 1, cur, out);
        cur[i] = true;
        self.sat_rec(hi, vars, i + 1, cur, out);
    }

    /// Verifies ordering, reduction and uniqueness of the whole store.
    pub fn check_invariants(&self) -> bool {
        let mut seen = hashbrown::HashSet::new();
        for (i, n) in self.nodes.iter().enumerate().skip(2) {
            if n.low == n.high || n.var >= self.var_of(n.low) || n.var >= self.var_of(n.high) {
                return false;
            }
            if n.low.index() >= i || n.high.index() >= i || !seen.insert(*n) {
                return false;
            }
            if self.unique.get(n) != Some(&NodeId(i as u32)) {
                return false;
            }
        }
        self.unique.len() == self.nodes.len() - 2
    }

    /// Copies the nodes reachable from `roots` into a fresh store, updating
    /// `roots` in place.
    pub fn collect_garbage(&mut self, roots: &mut [NodeId]) {
        let mut fresh = Bdd::new(self.max_nodes);
        let mut map: HashMap<NodeId, NodeId> = HashMap::new();
        map.insert(NodeId::FALSE, NodeId::FALSE);
        map.insert(NodeId::TRUE, NodeId::TRUE);
        // node ids are topologically ordered (children before parents)
        let mut live = vec![false; self.nodes.len()];
        for r in roots.iter() {
            live[r.index()] = true;
        }
        for i in (2..self.nodes.len()).rev() {
            if live[i] {
                let n = self.nodes[i];
                live[n.low.index()] = true;
                live[n.high.index()] = true;
            }
        }
        for i in 2..self.nodes.len() {
            if live[i] {
                let n = self.nodes[i];
                let id = fresh.mk(n.var, map[&n.low], map[&n.high]).expect("fresh store holds a subset");
                map.insert(NodeId(i as u32), id);
            }
        }
        for r in roots.iter_mut() {
            *r = map[r];
        }
        *self = fresh;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_identities() {
        let mut b = Bdd::default();
        let v = b.var(0).unwrap();
        let nv = b.not(v).unwrap();
        assert_eq!(b.and(v, nv).unwrap(), NodeId::FALSE);
        assert_eq!(b.ite(v, NodeId::TRUE, NodeId::FALSE).unwrap(), v);
        let p = b.var(3).unwrap();
        assert_eq!(b.compose(v, 0, p).unwrap(), p);
        assert!(b.check_invariants());
    }

    #[test]
    fn quantification_and_restriction() {
        let mut b = Bdd::default();
        let x = b.var(0).unwrap();
        let y = b.var(1).unwrap();
        let f = b.and(x, y).unwrap();
        assert_eq!(b.exists(f, &|v| v == 0).unwrap(), y);
        assert_eq!(b.restrict(f, 1, false).unwrap(), NodeId::FALSE);
        assert_eq!(b.restrict(f, 1, true).unwrap(), x);
        let g = b.xor(x, y).unwrap();
        assert_eq!(b.all_sat(g, &[0, 1]), vec![vec![false, true], vec![true, false]]);
        assert_eq!(b.support(g), vec![0, 1]);
    }

    #[test]
    fn vector_compose_is_simultaneous() {
        let mut b = Bdd::default();
        let x = b.var(0).unwrap();
        let y = b.var(1).unwrap();
        let nx = b.not(x).unwrap();
        let f = b.and(x, nx).unwrap();
        assert_eq!(f, NodeId::FALSE);
        // swap x and y in x ∧ ¬y
        let ny = b.not(y).unwrap();
        let g = b.and(x, ny).unwrap();
        let swapped = b.vector_compose(g, &|v| match v {
            0 => Some(y),
            1 => Some(x),
            _ => None,
        })
        .unwrap();
        let want = b.and(y, nx).unwrap();
        assert_eq!(swapped, want);
    }

    #[test]
    fn rename_and_gc() {
        let mut b = Bdd::default();
        let x = b.var(0).unwrap();
        let y = b.var(1).unwrap();
        let f = b.or(x, y).unwrap();
        let g = b.rename_monotone(f, &|v| v + 5).unwrap();
        assert_eq!(b.support(g), vec![5, 6]);
        let _junk = b.xor(x, y).unwrap();
        let mut roots = [g];
        b.collect_garbage(&mut roots);
        assert_eq!(b.len(), 2 + 2);
        assert!(b.eval(roots[0], &|v| v == 6));
        assert!(b.check_invariants());
    }

    #[test]
    fn node_cap() {
        let mut b = Bdd::new(4);
        let x = b.var(0).unwrap();
        let y = b.var(1).unwrap();
        assert!(matches!(b.and(x, y), Err(Error::BudgetExceeded { .. })));
    }
}
