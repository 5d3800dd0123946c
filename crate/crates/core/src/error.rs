use crate::automaton::StateId;

/// Errors produced by automaton construction, parsing and the analyses.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("alphabet contains duplicate symbol '{0}'")]
    DuplicateSymbol(char),

    #[error("symbol {0:?} is not a printable, non-whitespace character")]
    InvalidSymbol(char),

    #[error("symbol '{0}' is not part of the alphabet")]
    UnknownSymbol(char),

    #[error("symbol id {id} is outside an alphabet of size {size}")]
    SymbolOutOfRange { id: usize, size: usize },

    #[error("an automaton needs at least one state")]
    NoStates,

    #[error("state {state} is outside the valid range 0..{count}")]
    InvalidState { state: StateId, count: usize },

    #[error("transition table has {actual} cells, expected {expected}")]
    TableSize { expected: usize, actual: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("incomplete transition table: no transition from '{state}' on '{symbol}' (add @partial to complete automatically)")]
    Incomplete { state: String, symbol: char },

    #[error("regex error at offset {offset}: {message}")]
    Regex { offset: usize, message: String },

    #[error("automata are defined over different alphabets")]
    AlphabetMismatch,

    #[error("automaton is not accessible: some state is unreachable from the initial state")]
    NotAccessible,

    #[error("automaton is not minimal: two distinct states have the same future")]
    NotMinimal,

    #[error("partition is not a congruence of the automaton: {0}")]
    NotCongruence(String),

    #[error("transition monoid exceeds the element cap of {cap} (discovered {discovered} elements so far)")]
    MonoidCapExceeded { cap: usize, discovered: usize },

    #[error("enumeration of {words} words exceeds the guard of {guard}")]
    EnumerationGuard { words: u128, guard: u64 },

    #[error("series has {len} entries, shorter than the window of {window}")]
    SeriesTooShort { len: usize, window: usize },

    #[error("window must be at least 1")]
    EmptyWindow,

    #[error("state set must not be empty")]
    EmptyStateSet,

    #[error("subset construction limited to {max} states, automaton has {states}")]
    TooManyStates { states: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
