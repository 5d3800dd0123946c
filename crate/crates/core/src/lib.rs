pub mod automaton;
pub mod cli;
pub mod error;
pub mod graph;
pub mod minimization;
pub mod monoid;
pub mod oracle;
pub mod probability;
pub mod random;
pub mod zero_one;

pub use automaton::{Alphabet, Dfa, PartialDfa, ProductMode, StateId, SymbolId, Word};
pub use error::{Error, Result};
