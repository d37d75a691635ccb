//! First-order and monadic second-order encodings of LTLf and their
//! finite-model evaluators.

pub mod eval;
pub mod fol;
pub mod mso;
pub mod sentence;

use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::formula::{Alphabet, Name};
use crate::semantics::Trace;

pub use eval::{eval_sentence_bruteforce, eval_sentence_witness, eval_with_extents};
pub use fol::{encode_fol, encode_fol_past, eval_fol, Fol, Term};
pub use mso::{encode_mso, Constraint, EncodingConfig, NormalForm, VarForm};
pub use sentence::{Clause, Expr, Family, Guard, MonadicSentence, PExpr, PredDecl, PredId, PredRole, SetTerm};

/// The interpretation `I_ρ`: positions `0..=last` with one extent per atom,
/// plus optional extents for auxiliary predicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonadicStructure {
    len: usize,
    extents: HashMap<Name, Vec<bool>>,
}

impl MonadicStructure {
    pub fn from_trace(trace: &Trace, alphabet: &Alphabet) -> MonadicStructure {
        let extents = alphabet
            .names()
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), (0..trace.len()).map(|x| trace.holds(x, i)).collect()))
            .collect();
        MonadicStructure { len: trace.len(), extents }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn last(&self) -> Option<usize> {
        self.len.checked_sub(1)
    }

    pub fn extent(&self, name: &str) -> Option<&[bool]> {
        self.extents.get(name).map(|v| v.as_slice())
    }

    /// Adds or replaces an extent; `extent.len()` must equal the domain size.
    pub fn set_extent(&mut self, name: Name, extent: Vec<bool>) {
        assert_eq!(extent.len(), self.len, "extent outside the domain");
        self.extents.insert(name, extent);
    }
}
