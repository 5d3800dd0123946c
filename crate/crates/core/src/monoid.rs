//! Transition monoids, syntactic monoids and their zero elements.

use std::collections::HashMap;

use crate::automaton::{Alphabet, Dfa, StateId, SymbolId, Word};
use crate::error::{Error, Result};
use crate::minimization::hopcroft_minimize;

/// Default bound on the number of monoid elements explored.
pub const DEFAULT_MONOID_CAP: usize = 1_000_000;

/// A map `Q → Q`, stored as its image array.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transformation(Vec<StateId>);

impl Transformation {
    pub fn identity(state_count: usize) -> Self {
        Self((0..state_count).collect())
    }

    /// The action `q ↦ q · a` of one symbol.
    pub fn of_symbol(dfa: &Dfa, symbol: SymbolId) -> Self {
        Self((0..dfa.state_count()).map(|q| dfa.next(q, symbol)).collect())
    }

    /// The action `q ↦ q · w` of a word.
    pub fn of_word(dfa: &Dfa, word: &Word) -> Self {
        Self((0..dfa.state_count()).map(|q| dfa.run_from(q, word)).collect())
    }

    pub fn images(&self) -> &[StateId] {
        &self.0
    }

    pub fn apply(&self, state: StateId) -> StateId {
        self.0[state]
    }

    /// `self` followed by `other`, matching `φ(uv) = φ(u)φ(v)` for the right
    /// action `q · uv = (q · u) · v`.
    pub fn then(&self, other: &Transformation) -> Transformation {
        Self(self.0.iter().map(|&q| other.0[q]).collect())
    }

    /// The common image when this is a constant map.
    pub fn constant_value(&self) -> Option<StateId> {
        let first = *self.0.first()?;
        self.0.iter().all(|&q| q == first).then_some(first)
    }
}

/// The transformation monoid generated by the symbol actions of an
/// automaton, with a shortest witness word per element.
#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    alphabet: Alphabet,
    state_count: usize,
    elements: Vec<Transformation>,
    witnesses: Vec<Word>,
    index: HashMap<Transformation, usize>,
    generators: Vec<usize>,
}

impl TransitionMonoid {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    /// Number of elements.
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &Transformation {
        &self.elements[index]
    }

    /// Shortlex-least word realizing the element.
    pub fn witness(&self, index: usize) -> &Word {
        &self.witnesses[index]
    }

    /// The identity is discovered first.
    pub fn identity_index(&self) -> usize {
        0
    }

    pub fn generator(&self, symbol: SymbolId) -> usize {
        self.generators[symbol]
    }

    pub fn index_of(&self, t: &Transformation) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Index of `element(left) · element(right)`.
    pub fn multiply(&self, left: usize, right: usize) -> usize {
        let product = self.elements[left].then(&self.elements[right]);
        self.index[&product]
    }

    /// Full multiplication table, `table[i][j] = multiply(i, j)`.
    pub fn compose_table(&self) -> Vec<Vec<usize>> {
        (0..self.order())
            .map(|i| (0..self.order()).map(|j| self.multiply(i, j)).collect())
            .collect()
    }

    /// `φ(w)`, the composition of the generator actions along `w`.
    pub fn evaluate(&self, word: &Word) -> Result<Transformation> {
        self.alphabet.check_word(word)?;
        Ok(word
            .symbols()
            .iter()
            .fold(Transformation::identity(self.state_count), |t, &a| {
                t.then(&self.elements[self.generators[a]])
            }))
    }
}

/// Breadth-first closure from the identity under right multiplication by
/// the generators, in alphabet order; fails once more than `cap` elements
/// are found.
pub fn transition_monoid(dfa: &Dfa, cap: usize) -> Result<TransitionMonoid> {
    let n = dfa.state_count();
    let k = dfa.alphabet().len();
    let actions: Vec<Transformation> = (0..k).map(|a| Transformation::of_symbol(dfa, a)).collect();

    let identity = Transformation::identity(n);
    let mut index = HashMap::new();
    index.insert(identity.clone(), 0);
    let mut elements = vec![identity];
    let mut witnesses = vec![Word::empty()];
    let mut i = 0;
    while i < elements.len() {
        for (a, action) in actions.iter().enumerate() {
            let next = elements[i].then(action);
            if index.contains_key(&next) {
                continue;
            }
            if elements.len() == cap {
                return Err(Error::MonoidCapExceeded {
                    cap,
                    discovered: elements.len(),
                });
            }
            let mut word = witnesses[i].clone();
            word.push(a);
            index.insert(next.clone(), elements.len());
            elements.push(next);
            witnesses.push(word);
        }
        i += 1;
    }
    let generators = actions.iter().map(|t| index[t]).collect();
    Ok(TransitionMonoid {
        alphabet: dfa.alphabet().clone(),
        state_count: n,
        elements,
        witnesses,
        index,
        generators,
    })
}

/// Transition monoid of the minimal automaton.
pub fn syntactic_monoid(dfa: &Dfa, cap: usize) -> Result<TransitionMonoid> {
    transition_monoid(&hopcroft_minimize(dfa)?, cap)
}

pub fn evaluate(monoid: &TransitionMonoid, word: &Word) -> Result<Transformation> {
    monoid.evaluate(word)
}

/// The zero element `z` (with `zm = mz = z` for all `m`) and its witness.
///
/// Checking the generators is enough since they generate the monoid.
pub fn find_zero(monoid: &TransitionMonoid) -> Option<(usize, Word)> {
    let generators: Vec<&Transformation> = monoid
        .generators
        .iter()
        .map(|&g| &monoid.elements[g])
        .collect();
    monoid
        .elements
        .iter()
        .position(|z| {
            generators
                .iter()
                .all(|g| &z.then(g) == z && &g.then(z) == z)
        })
        .map(|i| (i, monoid.witnesses[i].clone()))
}
