//! Translation of LTL over finite traces into minimal deterministic automata.
//!
//! The crate carries every route between a formula and its automaton:
//!
//! * a direct route through past-time LTLf and a symbolic DFA ([`symbolic`]),
//! * first-order and second-order logical encodings ([`logic`]) compiled by a
//!   small monadic second-order compiler ([`compile`]),
//! * a compact second-order encoding read off the BDDs of a symbolic DFA
//!   ([`compact`]).
//!
//! All of it is `no_std` with `alloc`; IO, file formats and the command line
//! live in the companion `ltlf-tools` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod automata;
pub mod bdd;
pub mod compact;
pub mod compile;
pub mod error;
pub mod formula;
pub mod limits;
pub mod logic;
pub mod parse;
pub mod pipeline;
pub mod semantics;
pub mod symbolic;

pub use automata::{Dfa, Nfa};
pub use error::{Error, Result};
pub use formula::{Alphabet, Closure, Ltlf, Pltlf};
pub use limits::Limits;
pub use semantics::{Letter, Trace};
