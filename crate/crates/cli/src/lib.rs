//! File formats, corpora and the cross-validation harness behind the `ltlf`
//! binary.

pub mod bench;
pub mod check;
pub mod config;
pub mod corpus;
pub mod formats;
pub mod mona;
