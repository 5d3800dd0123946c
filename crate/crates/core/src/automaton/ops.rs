//! Language operations: complement, products, quotients, concatenation and
//! structural comparison.

use std::collections::{HashMap, VecDeque};

use super::{Alphabet, Dfa, StateId, Word};
use crate::error::{Error, Result};

/// Boolean combination used to choose final states of a product automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductMode {
    Union,
    Intersection,
    /// `L(left) \ L(right)`.
    Difference,
    SymmetricDifference,
}

impl ProductMode {
    pub fn combine(self, left: bool, right: bool) -> bool {
        match self {
            ProductMode::Union => left || right,
            ProductMode::Intersection => left && right,
            ProductMode::Difference => left && !right,
            ProductMode::SymmetricDifference => left != right,
        }
    }
}

impl Dfa {
    /// Automaton for `A* \ L`.
    pub fn complement(&self) -> Dfa {
        self.with_finals(self.finals.iter().map(|f| !f).collect())
    }

    /// Product automaton on the pairs reachable from `(q₀, q₀')`.
    pub fn product(&self, other: &Dfa, mode: ProductMode) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        ids.insert(pairs[0], 0);
        let mut table = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for a in 0..k {
                let target = (self.next(p, a), other.next(q, a));
                let id = *ids.entry(target).or_insert_with(|| {
                    pairs.push(target);
                    pairs.len() - 1
                });
                table.push(id);
            }
            i += 1;
        }
        let finals = pairs
            .iter()
            .map(|&(p, q)| mode.combine(self.finals[p], other.finals[q]))
            .collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), table, 0, finals))
    }

    /// Automaton for `u⁻¹L = { v | uv ∈ L }`: the initial state moves to
    /// `q₀ · u` and unreachable states are dropped.
    pub fn left_quotient(&self, u: &Word) -> Result<Dfa> {
        self.alphabet.check_word(u)?;
        Ok(self.with_initial(self.run_from(self.initial, u)))
    }

    /// Automaton for `Lu⁻¹ = { v | vu ∈ L }`: finals become `{ q | q · u ∈ F }`.
    pub fn right_quotient(&self, u: &Word) -> Result<Dfa> {
        self.alphabet.check_word(u)?;
        let finals = (0..self.state_count())
            .map(|q| self.finals[self.run_from(q, u)])
            .collect();
        Ok(self.with_finals(finals))
    }

    /// True when no final state is reachable.
    pub fn is_empty_language(&self) -> bool {
        self.reachable()
            .iter()
            .zip(&self.finals)
            .all(|(&r, &f)| !(r && f))
    }

    /// Language equality via emptiness of the symmetric difference.
    pub fn language_equals(&self, other: &Dfa) -> Result<bool> {
        Ok(self
            .product(other, ProductMode::SymmetricDifference)?
            .is_empty_language())
    }

    /// Whether a state bijection preserves the initial state, the finals and
    /// every transition. Both machines must be accessible; the bijection is
    /// found by a parallel breadth-first search in alphabet order.
    pub fn is_isomorphic(&self, other: &Dfa) -> Result<bool> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        self.require_accessible()?;
        other.require_accessible()?;
        if self.state_count() != other.state_count() {
            return Ok(false);
        }
        let n = self.state_count();
        let mut forward = vec![usize::MAX; n];
        let mut backward = vec![usize::MAX; n];
        forward[self.initial] = other.initial;
        backward[other.initial] = self.initial;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(p) = queue.pop_front() {
            let q = forward[p];
            if self.finals[p] != other.finals[q] {
                return Ok(false);
            }
            for (&ps, &qs) in self.row(p).iter().zip(other.row(q)) {
                match (forward[ps], backward[qs]) {
                    (usize::MAX, usize::MAX) => {
                        forward[ps] = qs;
                        backward[qs] = ps;
                        queue.push_back(ps);
                    }
                    (f, b) if f == qs && b == ps => {}
                    _ => return Ok(false),
                }
            }
        }
        Ok(true)
    }

    /// Automaton for the concatenation `L(self) · L(other)`, built over pairs
    /// `(q, S)` of a state of `self` and the set of `other` states currently
    /// tracked.
    pub fn concat(&self, other: &Dfa) -> Result<Dfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let k = self.alphabet.len();
        let seed = |q: StateId, mut set: Vec<StateId>| {
            if self.finals[q] {
                set.push(other.initial);
            }
            set.sort_unstable();
            set.dedup();
            (q, set)
        };
        let start = seed(self.initial, Vec::new());
        let mut ids: HashMap<(StateId, Vec<StateId>), StateId> = HashMap::new();
        ids.insert(start.clone(), 0);
        let mut states = vec![start];
        let mut table = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let (q, set) = states[i].clone();
            for a in 0..k {
                let moved = set.iter().map(|&s| other.next(s, a)).collect();
                let target = seed(self.next(q, a), moved);
                let id = match ids.get(&target) {
                    Some(&id) => id,
                    None => {
                        ids.insert(target.clone(), states.len());
                        states.push(target);
                        states.len() - 1
                    }
                };
                table.push(id);
            }
            i += 1;
        }
        let finals = states
            .iter()
            .map(|(_, set)| set.iter().any(|&s| other.finals[s]))
            .collect();
        Ok(Dfa::from_parts(self.alphabet.clone(), table, 0, finals))
    }

    /// Automaton for the singleton language `{ w }`.
    pub fn from_word(alphabet: Alphabet, word: &Word) -> Result<Dfa> {
        alphabet.check_word(word)?;
        let k = alphabet.len();
        let len = word.len();
        let dead = len + 1;
        let mut table = Vec::with_capacity((len + 2) * k);
        for (i, &expected) in word.symbols().iter().enumerate() {
            table.extend((0..k).map(|a| if a == expected { i + 1 } else { dead }));
        }
        table.extend(std::iter::repeat_n(dead, 2 * k));
        let mut finals = vec![false; len + 2];
        finals[len] = true;
        Ok(Dfa::from_parts(alphabet, table, 0, finals))
    }

    /// Automaton for `Aᵏ`, the words of length exactly `k`.
    pub fn exact_length(alphabet: Alphabet, length: usize) -> Dfa {
        let k = alphabet.len();
        let dead = length + 1;
        let mut table = Vec::with_capacity((length + 2) * k);
        for i in 0..length {
            table.extend(std::iter::repeat_n(i + 1, k));
        }
        table.extend(std::iter::repeat_n(dead, 2 * k));
        let mut finals = vec![false; length + 2];
        finals[length] = true;
        Dfa::from_parts(alphabet, table, 0, finals)
    }
}

pub fn complement(dfa: &Dfa) -> Dfa {
    dfa.complement()
}

pub fn product(left: &Dfa, right: &Dfa, mode: ProductMode) -> Result<Dfa> {
    left.product(right, mode)
}

pub fn left_quotient(dfa: &Dfa, u: &Word) -> Result<Dfa> {
    dfa.left_quotient(u)
}

pub fn right_quotient(dfa: &Dfa, u: &Word) -> Result<Dfa> {
    dfa.right_quotient(u)
}

pub fn is_isomorphic(left: &Dfa, right: &Dfa) -> Result<bool> {
    left.is_isomorphic(right)
}
