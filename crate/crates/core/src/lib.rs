//! Rediscovery, certification and exact enumeration of linear grammars for
//! zero-sum words over `{+a, -b}` that avoid the factor `+a [-a] -b`.

pub mod discovery;
pub mod gfsolve;
pub mod prover;
pub mod wordcore;

pub use wordcore::{AlphabetSpec, Corpus, Word, WordError};
