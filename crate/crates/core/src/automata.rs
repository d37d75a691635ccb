//! Explicit automata over letters `2^P`.
//!
//! The empty word is outside every language in this crate. A DFA may still
//! carry an accepting initial state; [`Dfa::accepts`] ignores it and
//! [`Dfa::minimize`] treats the acceptance of the empty word as free, picking
//! whichever choice gives fewer states (the rejecting one on a tie).

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::formula::Alphabet;
use crate::limits::Limits;
use crate::semantics::{letters_in_order, Letter, Trace, MAX_ATOMS};

pub type State = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    alphabet: Alphabet,
    initial: State,
    /// `delta[s * letters + letter]`
    delta: Vec<State>,
    accepting: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa {
    alphabet: Alphabet,
    initial: Vec<State>,
    /// `delta[s * letters + letter]`, sorted and duplicate-free
    delta: Vec<Vec<State>>,
    accepting: Vec<bool>,
}

fn letters_of(alphabet: &Alphabet) -> Result<usize> {
    if alphabet.len() > MAX_ATOMS.min(20) {
        return Err(Error::AlphabetTooLarge(alphabet.len()));
    }
    Ok(alphabet.letter_count())
}

impl Dfa {
    /// Builds a DFA from a dense transition table.
    pub fn new(alphabet: Alphabet, initial: State, delta: Vec<State>, accepting: Vec<bool>) -> Result<Dfa> {
        let letters = letters_of(&alphabet)?;
        let states = accepting.len();
        assert!(states > 0 && delta.len() == states * letters, "transition table is not total");
        assert!((initial as usize) < states && delta.iter().all(|&t| (t as usize) < states));
        Ok(Dfa { alphabet, initial, delta, accepting })
    }

    /// One-state automaton accepting everything or nothing.
    pub fn trivial(alphabet: Alphabet, accept: bool) -> Result<Dfa> {
        let letters = letters_of(&alphabet)?;
        Dfa::new(alphabet, 0, vec![0; letters], vec![accept])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn num_letters(&self) -> usize {
        self.alphabet.letter_count()
    }

    pub fn initial(&self) -> State {
        self.initial
    }

    pub fn is_accepting(&self, s: State) -> bool {
        self.accepting[s as usize]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = State> + '_ {
        self.accepting.iter().enumerate().filter(|(_, a)| **a).map(|(s, _)| s as State)
    }

    pub fn next(&self, s: State, letter: Letter) -> State {
        self.delta[s as usize * self.num_letters() + letter as usize]
    }

    /// Number of distinct `(source, target)` pairs.
    pub fn num_edges(&self) -> usize {
        let mut pairs: Vec<(State, State)> = (0..self.num_states() as State)
            .flat_map(|s| (0..self.num_letters() as Letter).map(move |l| (s, l)))
            .map(|(s, l)| (s, self.next(s, l)))
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        pairs.len()
    }

    pub fn run(&self, letters: &[Letter]) -> State {
        letters.iter().fold(self.initial, |s, &l| self.next(s, l))
    }

    /// Membership; the empty trace is always rejected.
    pub fn accepts(&self, trace: &Trace) -> bool {
        !trace.is_empty() && self.is_accepting(self.run(&trace.letters))
    }

    /// Renumbers reachable states breadth-first from the initial state, taking
    /// letters in lexicographic order; unreachable states are dropped.
    pub fn canonical(&self) -> Dfa {
        let letters = self.num_letters();
        let order = letters_in_order(self.alphabet.len());
        let mut id = vec![u32::MAX; self.num_states()];
        let mut queue = VecDeque::new();
        let mut seq = Vec::new();
        id[self.initial as usize] = 0;
        queue.push_back(self.initial);
        while let Some(s) = queue.pop_front() {
            seq.push(s);
            for &l in &order {
                let t = self.next(s, l);
                if id[t as usize] == u32::MAX {
                    id[t as usize] = (seq.len() + queue.len()) as u32;
                    queue.push_back(t);
                }
            }
        }
        let mut delta = vec![0; seq.len() * letters];
        let mut accepting = vec![false; seq.len()];
        for (new, &old) in seq.iter().enumerate() {
            accepting[new] = self.accepting[old as usize];
            for l in 0..letters {
                delta[new * letters + l] = id[self.next(old, l as Letter) as usize];
            }
        }
        Dfa { alphabet: self.alphabet.clone(), initial: 0, delta, accepting }
    }

    /// Copy whose initial state is fresh (never re-entered) and accepts the
    /// empty word iff `accept_empty`.
    pub fn with_fresh_initial(&self, accept_empty: bool) -> Dfa {
        let letters = self.num_letters();
        let n = self.num_states();
        let mut delta = self.delta.clone();
        let start = self.initial as usize * letters;
        delta.extend_from_within(start..start + letters);
        let mut accepting = self.accepting.clone();
        accepting.push(accept_empty);
        Dfa { alphabet: self.alphabet.clone(), initial: n as State, delta, accepting }
    }

    /// Hopcroft partition refinement, exact language (empty word included).
    fn hopcroft(&self) -> Dfa {
        let d = self.canonical();
        let n = d.num_states();
        let letters = d.num_letters();
        // inverse transitions per letter
        let mut inv: Vec<Vec<State>> = vec![Vec::new(); n * letters];
        for s in 0..n {
            for l in 0..letters {
                let t = d.delta[s * letters + l] as usize;
                inv[t * letters + l].push(s as State);
            }
        }
        let mut block_of = vec![0usize; n];
        let mut blocks: Vec<Vec<State>> = Vec::new();
        let acc: Vec<State> = (0..n as State).filter(|&s| d.accepting[s as usize]).collect();
        let rej: Vec<State> = (0..n as State).filter(|&s| !d.accepting[s as usize]).collect();
        for part in [acc, rej] {
            if !part.is_empty() {
                for &s in &part {
                    block_of[s as usize] = blocks.len();
                }
                blocks.push(part);
            }
        }
        let mut work: Vec<usize> = (0..blocks.len()).collect();
        let mut marked = vec![false; n];
        while let Some(a) = work.pop() {
            let splitter = blocks[a].clone();
            for l in 0..letters {
                let mut pre: Vec<State> = Vec::new();
                for &t in &splitter {
                    for &s in &inv[t as usize * letters + l] {
                        if !marked[s as usize] {
                            marked[s as usize] = true;
                            pre.push(s);
                        }
                    }
                }
                let mut touched: Vec<usize> = pre.iter().map(|&s| block_of[s as usize]).collect();
                touched.sort_unstable();
                touched.dedup();
                for b in touched {
                    let (inside, outside): (Vec<State>, Vec<State>) =
                        blocks[b].iter().partition(|&&s| marked[s as usize]);
                    if outside.is_empty() {
                        continue;
                    }
                    let new = blocks.len();
                    let (keep, moved) = if inside.len() <= outside.len() { (outside, inside) } else { (inside, outside) };
                    for &s in &moved {
                        block_of[s as usize] = new;
                    }
                    blocks[b] = keep;
                    blocks.push(moved);
                    // `moved` is the smaller half, which suffices whether or not `b`
                    // is still waiting
                    work.push(new);
                }
                for &s in &pre {
                    marked[s as usize] = false;
                }
            }
        }
        let k = blocks.len();
        let mut delta = vec![0; k * letters];
        let mut accepting = vec![false; k];
        for (b, members) in blocks.iter().enumerate() {
            let rep = members[0] as usize;
            accepting[b] = d.accepting[rep];
            for l in 0..letters {
                delta[b * letters + l] = block_of[d.delta[rep * letters + l] as usize] as State;
            }
        }
        let out = Dfa { alphabet: d.alphabet.clone(), initial: block_of[d.initial as usize] as State, delta, accepting };
        out.canonical()
    }

    /// Canonical minimal DFA for the non-empty words of the language.
    pub fn minimize(&self) -> Dfa {
        pick_smaller(
            self.with_fresh_initial(false).hopcroft(),
            self.with_fresh_initial(true).hopcroft(),
        )
    }

    pub fn reverse(&self) -> Nfa {
        let letters = self.num_letters();
        let n = self.num_states();
        let mut delta = vec![Vec::new(); n * letters];
        for s in 0..n {
            for l in 0..letters {
                let t = self.delta[s * letters + l] as usize;
                delta[t * letters + l].push(s as State);
            }
        }
        for row in &mut delta {
            row.sort_unstable();
            row.dedup();
        }
        let mut accepting = vec![false; n];
        accepting[self.initial as usize] = true;
        Nfa { alphabet: self.alphabet.clone(), initial: self.accepting_states().collect(), delta, accepting }
    }

    pub fn complement(&self) -> Dfa {
        let mut d = self.clone();
        d.accepting.iter_mut().for_each(|a| *a = !*a);
        d
    }

    /// No non-empty word is accepted.
    pub fn is_empty(&self) -> bool {
        let letters = self.num_letters();
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<State> = (0..letters).map(|l| self.next(self.initial, l as Letter)).collect();
        while let Some(s) = stack.pop() {
            if core::mem::replace(&mut seen[s as usize], true) {
                continue;
            }
            if self.is_accepting(s) {
                return false;
            }
            stack.extend((0..letters).map(|l| self.next(s, l as Letter)));
        }
        true
    }

    /// Every non-empty word is accepted.
    pub fn is_universal(&self) -> bool {
        self.complement().is_empty()
    }

    /// Language equality on non-empty words, by product reachability.
    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let letters = self.num_letters();
        let mut seen = hashbrown::HashSet::new();
        let mut stack: Vec<(State, State)> = (0..letters as Letter)
            .map(|l| (self.next(self.initial, l), other.next(other.initial, l)))
            .collect();
        while let Some((a, b)) = stack.pop() {
            if !seen.insert((a, b)) {
                continue;
            }
            if self.is_accepting(a) != other.is_accepting(b) {
                return Ok(false);
            }
            stack.extend((0..letters as Letter).map(|l| (self.next(a, l), other.next(b, l))));
        }
        Ok(true)
    }

    /// Equality of the canonical minimal automata.
    pub fn isomorphic(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        Ok(self.minimize() == other.minimize())
    }

    /// Accepted traces of length `1..=max_len`, lexicographically sorted.
    pub fn bounded_language(&self, max_len: usize) -> Vec<Trace> {
        let mut out = Vec::new();
        let order = letters_in_order(self.alphabet.len());
        let mut word = Vec::new();
        self.enumerate(self.initial, &order, max_len, &mut word, &mut out);
        out
    }

    fn enumerate(&self, s: State, order: &[Letter], left: usize, word: &mut Vec<Letter>, out: &mut Vec<Trace>) {
        if !word.is_empty() && self.is_accepting(s) {
            out.push(Trace::new(word.clone()));
        }
        if left == 0 {
            return;
        }
        for &l in order {
            word.push(l);
            self.enumerate(self.next(s, l), order, left - 1, word, out);
            word.pop();
        }
    }

    /// Same automaton over a larger alphabet; new atoms are ignored.
    pub fn extend_alphabet(&self, alphabet: &Alphabet) -> Result<Dfa> {
        let letters = letters_of(alphabet)?;
        let mut map = Vec::with_capacity(self.alphabet.len());
        for name in self.alphabet.names() {
            map.push(alphabet.index_of(name).ok_or(Error::AlphabetMismatch)?);
        }
        let project = |l: usize| -> Letter {
            map.iter().enumerate().fold(0, |acc, (i, &j)| acc | (((l >> j) & 1) as Letter) << i)
        };
        let n = self.num_states();
        let mut delta = vec![0; n * letters];
        for s in 0..n {
            for l in 0..letters {
                delta[s * letters + l] = self.next(s as State, project(l));
            }
        }
        Dfa::new(alphabet.clone(), self.initial, delta, self.accepting.clone())
    }
}

fn pick_smaller(rejecting: Dfa, accepting: Dfa) -> Dfa {
    if accepting.num_states() < rejecting.num_states() {
        accepting
    } else {
        rejecting
    }
}

impl Nfa {
    pub fn new(alphabet: Alphabet, initial: Vec<State>, delta: Vec<Vec<State>>, accepting: Vec<bool>) -> Result<Nfa> {
        let letters = letters_of(&alphabet)?;
        assert_eq!(delta.len(), accepting.len() * letters, "transition table shape");
        Ok(Nfa { alphabet, initial, delta, accepting })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn successors(&self, s: State, letter: Letter) -> &[State] {
        &self.delta[s as usize * self.alphabet.letter_count() + letter as usize]
    }

    pub fn accepts(&self, trace: &Trace) -> bool {
        if trace.is_empty() {
            return false;
        }
        let mut cur = self.initial.clone();
        for &l in &trace.letters {
            let mut next: Vec<State> = cur.iter().flat_map(|&s| self.successors(s, l).iter().copied()).collect();
            next.sort_unstable();
            next.dedup();
            cur = next;
        }
        cur.iter().any(|&s| self.accepting[s as usize])
    }

    /// Subset construction over reachable subsets.
    pub fn determinize(&self, limits: &Limits<'_>) -> Result<Dfa> {
        let letters = self.alphabet.letter_count();
        let mut start = self.initial.clone();
        start.sort_unstable();
        start.dedup();
        let mut ids: HashMap<Vec<State>, State> = HashMap::new();
        let mut subsets = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            limits.check()?;
            for l in 0..letters {
                let mut next: Vec<State> = subsets[i].iter().flat_map(|&s| self.successors(s, l as Letter).iter().copied()).collect();
                next.sort_unstable();
                next.dedup();
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len() as State;
                        limits.check_states(subsets.len() + 1)?;
                        ids.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                delta.push(id);
            }
            i += 1;
        }
        let accepting = subsets.iter().map(|set| set.iter().any(|&s| self.accepting[s as usize])).collect();
        Dfa::new(self.alphabet.clone(), 0, delta, accepting)
    }
}

/// Reverse-determinize twice; an independent route to the minimal DFA used
/// to cross-check [`Dfa::minimize`].
pub fn brzozowski(d: &Dfa, limits: &Limits<'_>) -> Result<Dfa> {
    let exact = |d: &Dfa| -> Result<Dfa> {
        let once = d.reverse().determinize(limits)?;
        Ok(once.reverse().determinize(limits)?.canonical())
    };
    Ok(pick_smaller(exact(&d.with_fresh_initial(false))?, exact(&d.with_fresh_initial(true))?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha() -> Alphabet {
        Alphabet::from_strs(["a"])
    }

    /// F a: state 0 waiting, 1 seen.
    fn eventually_a() -> Dfa {
        Dfa::new(alpha(), 0, vec![0, 1, 1, 1], vec![false, true]).unwrap()
    }

    #[test]
    fn minimize_is_stable_on_minimal_input() {
        let d = eventually_a();
        assert_eq!(d.minimize(), d.canonical());
        assert_eq!(d.minimize().num_states(), 2);
    }

    #[test]
    fn minimize_merges_duplicates() {
        // two copies of the accepting sink
        let d = Dfa::new(alpha(), 0, vec![0, 1, 2, 2, 1, 1], vec![false, true, true]).unwrap();
        assert_eq!(d.minimize(), eventually_a().canonical());
    }

    #[test]
    fn empty_nfa_determinizes_to_rejecting_state() {
        let n = Nfa::new(alpha(), vec![], vec![vec![]; 2], vec![true]).unwrap();
        let d = n.determinize(&Limits::default()).unwrap();
        assert_eq!(d.num_states(), 1);
        assert!(d.is_empty());
    }

    #[test]
    fn reverse_of_eventually() {
        let d = eventually_a();
        let r = d.reverse().determinize(&Limits::default()).unwrap().minimize();
        // the reversal of "some a" is "some a"
        assert!(r.equivalent(&d).unwrap());
        assert_eq!(r.num_states(), 2);
    }

    #[test]
    fn brzozowski_agrees() {
        let d = Dfa::new(alpha(), 0, vec![0, 1, 2, 2, 1, 1], vec![false, true, true]).unwrap();
        assert_eq!(brzozowski(&d, &Limits::default()).unwrap(), d.minimize());
    }

    #[test]
    fn empty_word_is_never_accepted() {
        let d = Dfa::trivial(alpha(), true).unwrap();
        assert!(!d.accepts(&Trace::default()));
        assert!(d.accepts(&Trace::new(vec![0])));
        assert!(d.is_universal());
    }

    #[test]
    fn alphabet_mismatch() {
        let d = eventually_a();
        let e = Dfa::trivial(Alphabet::from_strs(["b"]), true).unwrap();
        assert_eq!(d.equivalent(&e), Err(Error::AlphabetMismatch));
    }
}
