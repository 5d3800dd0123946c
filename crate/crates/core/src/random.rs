//! Random automata for property tests and benchmarks.
//!
//! Callers own the generator, so runs are reproducible from a seed.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automaton::{Alphabet, Dfa, StateId, Word};
use crate::graph::scc_decompose;

fn random_table<R: Rng + ?Sized>(rng: &mut R, states: usize, k: usize) -> Vec<StateId> {
    (0..states * k).map(|_| rng.gen_range(0..states)).collect()
}

fn random_finals<R: Rng + ?Sized>(rng: &mut R, states: usize) -> Vec<bool> {
    (0..states).map(|_| rng.gen_bool(0.5)).collect()
}

fn build(alphabet: &Alphabet, table: Vec<StateId>, finals: Vec<bool>) -> Dfa {
    Dfa::from_parts(alphabet.clone(), table, 0, finals).trim_accessible()
}

/// Uniform transition table on `states` states, fair-coin finals, trimmed
/// to the part reachable from state 0.
pub fn random_dfa<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: &Alphabet) -> Dfa {
    assert!(states > 0, "at least one state");
    let table = random_table(rng, states, alphabet.len());
    let finals = random_finals(rng, states);
    build(alphabet, table, finals)
}

/// Gives every sink-component state the same finality.
fn unify_sink_finality<R: Rng + ?Sized>(rng: &mut R, dfa: &Dfa) -> Dfa {
    let value = rng.gen_bool(0.5);
    let mut finals = dfa.final_flags().to_vec();
    for &q in scc_decompose(dfa).sink_components().concat().iter() {
        finals[q] = value;
    }
    dfa.with_finals(finals)
}

/// A random machine whose language is zero-one: every sink-component
/// state shares one finality.
pub fn random_zero_one<R: Rng + ?Sized>(rng: &mut R, states: usize, alphabet: &Alphabet) -> Dfa {
    let d = random_dfa(rng, states, alphabet);
    unify_sink_finality(rng, &d)
}

/// A random machine with up to `max_states` states drawn from a mix of
/// shapes, so that zero-one and other languages both occur often: uniform
/// tables, tables with absorbing states planted away from the initial
/// state, and the latter with one finality shared by all sink components.
pub fn random_dfa_mixed<R: Rng + ?Sized>(rng: &mut R, max_states: usize, alphabet: &Alphabet) -> Dfa {
    assert!(max_states > 0, "at least one state");
    let n = rng.gen_range(max_states.min(4)..=max_states);
    let k = alphabet.len();
    let mut table = random_table(rng, n, k);
    let finals = random_finals(rng, n);
    let flavor = rng.gen_range(0..10);
    if flavor >= 4 && n > 1 {
        for _ in 0..rng.gen_range(1..=2.min(n - 1)) {
            let q = rng.gen_range(1..n);
            table[q * k..(q + 1) * k].fill(q);
        }
    }
    let d = build(alphabet, table, finals);
    if flavor >= 7 {
        unify_sink_finality(rng, &d)
    } else {
        d
    }
}

/// States with a path to `target`, by backward search.
fn reaches(table: &[StateId], k: usize, target: StateId) -> Vec<bool> {
    let n = table.len() / k;
    let mut preds = vec![Vec::new(); n];
    for (i, &r) in table.iter().enumerate() {
        preds[r].push(i / k);
    }
    let mut seen = vec![false; n];
    seen[target] = true;
    let mut queue = VecDeque::from([target]);
    while let Some(q) = queue.pop_front() {
        for &p in &preds[q] {
            if !seen[p] {
                seen[p] = true;
                queue.push_back(p);
            }
        }
    }
    seen
}

/// A zero automaton: state `states − 1` is made absorbing, then random
/// transitions of states that cannot reach it are redirected into states
/// that can, until every state reaches it. The result is trimmed, so it may
/// have fewer than `states` states.
pub fn random_zero_automaton<R: Rng + ?Sized>(
    rng: &mut R,
    states: usize,
    alphabet: &Alphabet,
) -> Dfa {
    assert!(states > 0, "at least one state");
    let k = alphabet.len();
    let sink = states - 1;
    let mut table = random_table(rng, states, k);
    table[sink * k..].fill(sink);
    loop {
        let good = reaches(&table, k, sink);
        let bad: Vec<StateId> = (0..states).filter(|&q| !good[q]).collect();
        let Some(&q) = bad.choose(rng) else { break };
        let into: Vec<StateId> = (0..states).filter(|&r| good[r]).collect();
        let a = rng.gen_range(0..k);
        table[q * k + a] = *into.choose(rng).expect("the sink reaches itself");
    }
    let finals = random_finals(rng, states);
    build(alphabet, table, finals)
}

/// A uniform word with length in `0..=max_len`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, max_len: usize) -> Word {
    let len = rng.gen_range(0..=max_len);
    random_word_of_length(rng, alphabet, len)
}

pub fn random_word_of_length<R: Rng + ?Sized>(rng: &mut R, alphabet: &Alphabet, len: usize) -> Word {
    (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect()
}
