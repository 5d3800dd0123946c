//! Complete deterministic automata over a small, ordered alphabet.
//!
//! States are dense integers `0..n`; the transition function is a flat
//! row-major table with one row per state and one column per symbol. Every
//! [`Dfa`] value is complete by construction. Partial tables live in
//! [`PartialDfa`] until [`PartialDfa::complete`] adds a dead state.

mod ops;
mod regex;
mod text;

use std::borrow::Cow;
use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

pub use ops::{complement, is_isomorphic, left_quotient, product, right_quotient, ProductMode};
pub use regex::compile_regex;
pub use text::{format_dfa, parse_dfa};

/// Index of a state in a transition table.
pub type StateId = usize;

/// Index of a symbol in an [`Alphabet`].
pub type SymbolId = usize;

/// Ordered set of distinct printable symbols.
#[derive(Clone)]
pub struct Alphabet {
    symbols: Vec<char>,
    index: HashMap<char, SymbolId>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(symbols: I) -> Result<Self> {
        let mut list = Vec::new();
        let mut index = HashMap::new();
        for symbol in symbols {
            if symbol.is_whitespace() || symbol.is_control() {
                return Err(Error::InvalidSymbol(symbol));
            }
            if index.insert(symbol, list.len()).is_some() {
                return Err(Error::DuplicateSymbol(symbol));
            }
            list.push(symbol);
        }
        if list.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(Self {
            symbols: list,
            index,
        })
    }

    /// Symbols in declared order.
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; kept for the `len`/`is_empty` convention.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, symbol: char) -> Result<SymbolId> {
        self.index
            .get(&symbol)
            .copied()
            .ok_or(Error::UnknownSymbol(symbol))
    }

    pub fn symbol(&self, id: SymbolId) -> char {
        self.symbols[id]
    }

    /// Parses a word written as a plain string of symbols. `""` and `"ε"`
    /// denote the empty word (unless `ε` is itself a symbol).
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text == "ε" && !self.index.contains_key(&'ε') {
            return Ok(Word::empty());
        }
        text.chars()
            .map(|c| self.index_of(c))
            .collect::<Result<Vec<_>>>()
            .map(Word::from)
    }

    /// Renders a word as a string; the empty word renders as `""`.
    pub fn render(&self, word: &Word) -> String {
        word.symbols().iter().map(|&s| self.symbols[s]).collect()
    }

    pub fn check_word(&self, word: &Word) -> Result<()> {
        match word.symbols().iter().find(|&&s| s >= self.len()) {
            Some(&id) => Err(Error::SymbolOutOfRange {
                id,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}

/// A finite sequence of symbol ids. The empty sequence is ε.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<SymbolId>);

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn symbols(&self) -> &[SymbolId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, symbol: SymbolId) {
        self.0.push(symbol);
    }

    pub fn extend_from(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    /// `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend_from(other);
        out
    }
}

impl From<Vec<SymbolId>> for Word {
    fn from(symbols: Vec<SymbolId>) -> Self {
        Self(symbols)
    }
}

impl FromIterator<SymbolId> for Word {
    fn from_iter<T: IntoIterator<Item = SymbolId>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Complete deterministic finite automaton ⟨Q, A, ·, q₀, F⟩.
#[derive(Clone)]
pub struct Dfa {
    alphabet: Alphabet,
    transitions: Vec<StateId>,
    initial: StateId,
    finals: Vec<bool>,
    names: Option<Vec<String>>,
    accessible: bool,
}

impl Dfa {
    /// Builds a DFA from a row-major table of `state_count × |alphabet|`
    /// target states.
    pub fn new<F>(
        alphabet: Alphabet,
        state_count: usize,
        transitions: Vec<StateId>,
        initial: StateId,
        finals: F,
    ) -> Result<Self>
    where
        F: IntoIterator<Item = StateId>,
    {
        if state_count == 0 {
            return Err(Error::NoStates);
        }
        let expected = state_count * alphabet.len();
        if transitions.len() != expected {
            return Err(Error::TableSize {
                expected,
                actual: transitions.len(),
            });
        }
        let check = |state: StateId| {
            if state < state_count {
                Ok(state)
            } else {
                Err(Error::InvalidState {
                    state,
                    count: state_count,
                })
            }
        };
        for &target in &transitions {
            check(target)?;
        }
        check(initial)?;
        let mut final_flags = vec![false; state_count];
        for f in finals {
            final_flags[check(f)?] = true;
        }
        Ok(Self::from_parts(alphabet, transitions, initial, final_flags))
    }

    /// Builds a DFA from one row of targets per state.
    pub fn from_rows<F>(
        alphabet: Alphabet,
        rows: &[Vec<StateId>],
        initial: StateId,
        finals: F,
    ) -> Result<Self>
    where
        F: IntoIterator<Item = StateId>,
    {
        let k = alphabet.len();
        if let Some(row) = rows.iter().find(|r| r.len() != k) {
            return Err(Error::TableSize {
                expected: k,
                actual: row.len(),
            });
        }
        let table = rows.iter().flatten().copied().collect();
        Self::new(alphabet, rows.len(), table, initial, finals)
    }

    /// Table already validated by the caller.
    pub(crate) fn from_parts(
        alphabet: Alphabet,
        transitions: Vec<StateId>,
        initial: StateId,
        finals: Vec<bool>,
    ) -> Self {
        let mut dfa = Self {
            alphabet,
            transitions,
            initial,
            finals,
            names: None,
            accessible: false,
        };
        dfa.accessible = dfa.reachable().iter().all(|&r| r);
        dfa
    }

    /// Attaches display names, one per state.
    pub fn with_state_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.state_count() {
            return Err(Error::TableSize {
                expected: self.state_count(),
                actual: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn without_state_names(mut self) -> Self {
        self.names = None;
        self
    }

    /// Universal single-state automaton recognizing `A*`.
    pub fn universal(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Self::from_parts(alphabet, vec![0; k], 0, vec![true])
    }

    /// Single-state automaton recognizing the empty language.
    pub fn empty_language(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        Self::from_parts(alphabet, vec![0; k], 0, vec![false])
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state]
    }

    pub fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(q, &f)| f.then_some(q))
    }

    pub fn is_accessible(&self) -> bool {
        self.accessible
    }

    /// Errors with [`Error::NotAccessible`] unless every state is reachable.
    pub fn require_accessible(&self) -> Result<()> {
        if self.accessible {
            Ok(())
        } else {
            Err(Error::NotAccessible)
        }
    }

    /// `q · a`.
    #[inline]
    pub fn next(&self, state: StateId, symbol: SymbolId) -> StateId {
        self.transitions[state * self.alphabet.len() + symbol]
    }

    /// Successors of `state` in alphabet order.
    #[inline]
    pub fn row(&self, state: StateId) -> &[StateId] {
        let k = self.alphabet.len();
        &self.transitions[state * k..(state + 1) * k]
    }

    pub(crate) fn table(&self) -> &[StateId] {
        &self.transitions
    }

    /// Extended transition `q · w`. The word must be over this alphabet.
    pub fn run_from(&self, state: StateId, word: &Word) -> StateId {
        word.symbols()
            .iter()
            .fold(state, |q, &a| self.next(q, a))
    }

    pub fn accepts(&self, word: &Word) -> Result<bool> {
        self.alphabet.check_word(word)?;
        Ok(self.finals[self.run_from(self.initial, word)])
    }

    pub fn accepts_str(&self, text: &str) -> Result<bool> {
        let word = self.alphabet.parse_word(text)?;
        self.accepts(&word)
    }

    pub fn state_name(&self, state: StateId) -> Cow<'_, str> {
        match &self.names {
            Some(names) => Cow::Borrowed(&names[state]),
            None => Cow::Owned(format!("q{state}")),
        }
    }

    pub fn state_names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// States reachable from the initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial] = true;
        while let Some(q) = queue.pop_front() {
            for &r in self.row(q) {
                if !seen[r] {
                    seen[r] = true;
                    queue.push_back(r);
                }
            }
        }
        seen
    }

    /// Drops states unreachable from the initial state, keeping the relative
    /// order of the survivors.
    pub fn trim_accessible(&self) -> Dfa {
        if self.accessible {
            return self.clone();
        }
        let reachable = self.reachable();
        let mut renumber = vec![usize::MAX; self.state_count()];
        let mut next_id = 0;
        for (q, &keep) in reachable.iter().enumerate() {
            if keep {
                renumber[q] = next_id;
                next_id += 1;
            }
        }
        let mut table = Vec::with_capacity(next_id * self.alphabet.len());
        let mut finals = Vec::with_capacity(next_id);
        let mut names = self.names.as_ref().map(|_| Vec::with_capacity(next_id));
        for q in (0..self.state_count()).filter(|&q| reachable[q]) {
            table.extend(self.row(q).iter().map(|&r| renumber[r]));
            finals.push(self.finals[q]);
            if let (Some(out), Some(src)) = (names.as_mut(), self.names.as_ref()) {
                out.push(src[q].clone());
            }
        }
        let mut out = Self::from_parts(
            self.alphabet.clone(),
            table,
            renumber[self.initial],
            finals,
        );
        out.names = names;
        out
    }

    /// Same machine with a different final set.
    pub(crate) fn with_finals(&self, finals: Vec<bool>) -> Dfa {
        debug_assert_eq!(finals.len(), self.state_count());
        Dfa {
            finals,
            ..self.clone()
        }
    }

    /// Same machine with a different initial state, trimmed to what that
    /// state reaches.
    pub(crate) fn with_initial(&self, initial: StateId) -> Dfa {
        let mut out = Self::from_parts(
            self.alphabet.clone(),
            self.transitions.clone(),
            initial,
            self.finals.clone(),
        );
        out.names = self.names.clone();
        out.trim_accessible()
    }
}

impl fmt::Debug for Dfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dfa")
            .field("alphabet", &self.alphabet)
            .field("states", &self.state_count())
            .field("transitions", &self.transitions)
            .field("initial", &self.initial)
            .field("finals", &self.finals().collect::<Vec<_>>())
            .finish()
    }
}

/// Deterministic automaton whose transition table may have holes.
#[derive(Clone, Debug)]
pub struct PartialDfa {
    alphabet: Alphabet,
    transitions: Vec<Option<StateId>>,
    initial: StateId,
    finals: Vec<bool>,
    names: Option<Vec<String>>,
}

impl PartialDfa {
    pub fn new<F>(
        alphabet: Alphabet,
        state_count: usize,
        initial: StateId,
        finals: F,
    ) -> Result<Self>
    where
        F: IntoIterator<Item = StateId>,
    {
        if state_count == 0 {
            return Err(Error::NoStates);
        }
        if initial >= state_count {
            return Err(Error::InvalidState {
                state: initial,
                count: state_count,
            });
        }
        let mut flags = vec![false; state_count];
        for f in finals {
            if f >= state_count {
                return Err(Error::InvalidState {
                    state: f,
                    count: state_count,
                });
            }
            flags[f] = true;
        }
        Ok(Self {
            transitions: vec![None; state_count * alphabet.len()],
            alphabet,
            initial,
            finals: flags,
            names: None,
        })
    }

    pub fn with_state_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.finals.len() {
            return Err(Error::TableSize {
                expected: self.finals.len(),
                actual: names.len(),
            });
        }
        self.names = Some(names);
        Ok(self)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn get(&self, state: StateId, symbol: SymbolId) -> Option<StateId> {
        self.transitions[state * self.alphabet.len() + symbol]
    }

    /// Sets `state · symbol = target`, returning the previous target.
    pub fn set(
        &mut self,
        state: StateId,
        symbol: SymbolId,
        target: StateId,
    ) -> Result<Option<StateId>> {
        let n = self.state_count();
        for s in [state, target] {
            if s >= n {
                return Err(Error::InvalidState { state: s, count: n });
            }
        }
        if symbol >= self.alphabet.len() {
            return Err(Error::SymbolOutOfRange {
                id: symbol,
                size: self.alphabet.len(),
            });
        }
        let cell = &mut self.transitions[state * self.alphabet.len() + symbol];
        Ok(cell.replace(target))
    }

    /// First missing `(state, symbol)` cell in row-major order.
    pub fn first_missing(&self) -> Option<(StateId, SymbolId)> {
        let k = self.alphabet.len();
        self.transitions
            .iter()
            .position(Option::is_none)
            .map(|i| (i / k, i % k))
    }

    pub fn accepts(&self, word: &Word) -> Result<bool> {
        self.alphabet.check_word(word)?;
        let mut q = self.initial;
        for &a in word.symbols() {
            match self.get(q, a) {
                Some(r) => q = r,
                None => return Ok(false),
            }
        }
        Ok(self.finals[q])
    }

    /// Fills every missing cell with one fresh non-final dead state. A table
    /// without holes is returned unchanged.
    pub fn complete(&self) -> Dfa {
        let n = self.state_count();
        let has_holes = self.transitions.iter().any(Option::is_none);
        let dead = n;
        let mut table: Vec<StateId> = self
            .transitions
            .iter()
            .map(|t| t.unwrap_or(dead))
            .collect();
        let mut finals = self.finals.clone();
        let mut names = self.names.clone();
        if has_holes {
            table.extend(std::iter::repeat_n(dead, self.alphabet.len()));
            finals.push(false);
            if let Some(names) = names.as_mut() {
                let mut candidate = String::from("dead");
                let mut suffix = 1;
                while names.contains(&candidate) {
                    candidate = format!("dead_{suffix}");
                    suffix += 1;
                }
                names.push(candidate);
            }
        }
        let mut dfa = Dfa::from_parts(self.alphabet.clone(), table, self.initial, finals);
        dfa.names = names;
        dfa
    }
}

impl From<&Dfa> for PartialDfa {
    fn from(dfa: &Dfa) -> Self {
        Self {
            alphabet: dfa.alphabet.clone(),
            transitions: dfa.transitions.iter().map(|&t| Some(t)).collect(),
            initial: dfa.initial,
            finals: dfa.finals.clone(),
            names: dfa.names.clone(),
        }
    }
}

/// Free-function form of [`PartialDfa::complete`].
pub fn complete(partial: &PartialDfa) -> Dfa {
    partial.complete()
}

/// Free-function form of [`Dfa::trim_accessible`].
pub fn trim_accessible(dfa: &Dfa) -> Dfa {
    dfa.trim_accessible()
}
