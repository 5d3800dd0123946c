//! Zero-one decisions.
//!
//! A regular language has asymptotic probability 0 or 1 exactly when its
//! minimal automaton is a zero automaton: a single strongly connected sink
//! component, reduced to one absorbing state. The same holds, without
//! minimizing, for any complete accessible recognizer whose sink components
//! are all final or all non-final (a quasi-zero automaton). That second test
//! is a single Tarjan pass, so it runs in O(n·|A|).

use std::collections::VecDeque;

use serde_json::{json, Value};

use crate::automaton::{Alphabet, Dfa, StateId, Word};
use crate::error::Result;
use crate::graph::{scc_decompose, SccDecomposition};
use crate::minimization::hopcroft_minimize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Decision {
    /// μ(L) = 0.
    Zero,
    /// μ(L) = 1.
    One,
    NotZeroOne,
}

impl Decision {
    pub fn is_zero_one(self) -> bool {
        self != Decision::NotZeroOne
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Zero => "zero",
            Decision::One => "one",
            Decision::NotZeroOne => "not_zero_one",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Quasi-zero test on the given automaton.
    QuasiZeroDirect,
    /// Minimize, then test for a zero automaton.
    MinimizeThenZero,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::QuasiZeroDirect => "quasi_zero_direct",
            Route::MinimizeThenZero => "minimize_then_zero",
        }
    }
}

/// Decision with its structural certificate.
///
/// `sink_components` refer to the automaton the route inspected: the input
/// for [`Route::QuasiZeroDirect`], its minimization for
/// [`Route::MinimizeThenZero`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroOneVerdict {
    pub decision: Decision,
    pub sink_components: Vec<Vec<StateId>>,
    pub all_sinks_final: bool,
    pub all_sinks_nonfinal: bool,
    pub route: Route,
    pub sync_word: Option<Word>,
}

impl ZeroOneVerdict {
    fn from_sinks(dfa: &Dfa, scc: &SccDecomposition, route: Route) -> Self {
        let sink_components: Vec<Vec<StateId>> =
            scc.sink_components().into_iter().map(<[_]>::to_vec).collect();
        let mut all_final = true;
        let mut all_nonfinal = true;
        for &q in sink_components.iter().flatten() {
            if dfa.is_final(q) {
                all_nonfinal = false;
            } else {
                all_final = false;
            }
        }
        let decision = match (all_final, all_nonfinal) {
            (true, _) => Decision::One,
            (_, true) => Decision::Zero,
            _ => Decision::NotZeroOne,
        };
        Self {
            decision,
            sink_components,
            all_sinks_final: all_final,
            all_sinks_nonfinal: all_nonfinal,
            route,
            sync_word: None,
        }
    }

    /// `{"decision", "sink_components", "route", "sync_word"}`.
    pub fn to_json(&self, alphabet: &Alphabet) -> Value {
        json!({
            "decision": self.decision.as_str(),
            "sink_components": self.sink_components,
            "route": self.route.as_str(),
            "sync_word": self.sync_word.as_ref().map(|w| alphabet.render(w)),
        })
    }
}

/// The unique sink state when `Sink(A) = {{p}}`.
fn unique_sink_state(scc: &SccDecomposition) -> Option<StateId> {
    match scc.sink_components().as_slice() {
        [single] if single.len() == 1 => Some(single[0]),
        _ => None,
    }
}

/// Unique strongly connected sink component, and it is trivial.
pub fn is_zero_automaton(dfa: &Dfa) -> Result<bool> {
    dfa.require_accessible()?;
    Ok(unique_sink_state(&scc_decompose(dfa)).is_some())
}

/// All sink-component states final, or none of them.
pub fn is_quasi_zero(dfa: &Dfa) -> Result<bool> {
    Ok(classify_zero_one(dfa)?.decision.is_zero_one())
}

/// Linear-time classification through the quasi-zero test.
pub fn classify_zero_one(dfa: &Dfa) -> Result<ZeroOneVerdict> {
    dfa.require_accessible()?;
    let scc = scc_decompose(dfa);
    Ok(ZeroOneVerdict::from_sinks(dfa, &scc, Route::QuasiZeroDirect))
}

/// Classification through minimization: zero-one iff the minimal automaton
/// is zero, with μ = 1 iff its sink state is final. The verdict carries a
/// synchronizing word of the minimal automaton when there is one.
pub fn classify_via_minimization(dfa: &Dfa) -> Result<ZeroOneVerdict> {
    let minimal = hopcroft_minimize(dfa)?;
    let scc = scc_decompose(&minimal);
    let mut verdict = ZeroOneVerdict::from_sinks(&minimal, &scc, Route::MinimizeThenZero);
    match unique_sink_state(&scc) {
        Some(_) => {
            verdict.sync_word = synchronizing_word(&minimal)?.map(|c| c.word);
        }
        None => verdict.decision = Decision::NotZeroOne,
    }
    Ok(verdict)
}

/// A word sending every state to `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncCertificate {
    pub word: Word,
    pub target: StateId,
    /// Result of applying `word` from every state.
    pub per_state_check: bool,
}

impl SyncCertificate {
    pub fn verify(&self, dfa: &Dfa) -> bool {
        (0..dfa.state_count()).all(|q| dfa.run_from(q, &self.word) == self.target)
    }
}

/// For each state, the first symbol of the shortlex-least shortest word
/// leading to `sink`, found by a backward breadth-first search.
fn paths_to(dfa: &Dfa, sink: StateId) -> Vec<Option<usize>> {
    let n = dfa.state_count();
    let k = dfa.alphabet().len();
    let mut offsets = vec![0usize; n + 1];
    for &r in dfa.table() {
        offsets[r + 1] += 1;
    }
    for i in 1..=n {
        offsets[i] += offsets[i - 1];
    }
    let mut preds = vec![0; n * k];
    let mut fill = offsets.clone();
    for q in 0..n {
        for &r in dfa.row(q) {
            preds[fill[r]] = q;
            fill[r] += 1;
        }
    }
    let mut dist = vec![usize::MAX; n];
    dist[sink] = 0;
    let mut queue = VecDeque::from([sink]);
    while let Some(r) = queue.pop_front() {
        for &p in &preds[offsets[r]..offsets[r + 1]] {
            if dist[p] == usize::MAX {
                dist[p] = dist[r] + 1;
                queue.push_back(p);
            }
        }
    }
    (0..n)
        .map(|q| {
            if q == sink || dist[q] == usize::MAX {
                return None;
            }
            (0..k).find(|&a| dist[dfa.next(q, a)] + 1 == dist[q])
        })
        .collect()
}

/// Synchronizing word of a zero automaton, or `None` when the automaton is
/// not zero.
///
/// States are taken in index order with the sink `p` last. Each step appends
/// `u_r`, the shortest word (least in alphabet order) from `r` to `p`, where
/// `r` is the image of the next state under the word built so far. Each
/// segment has at most n − 1 symbols.
pub fn synchronizing_word(dfa: &Dfa) -> Result<Option<SyncCertificate>> {
    dfa.require_accessible()?;
    let Some(sink) = unique_sink_state(&scc_decompose(dfa)) else {
        return Ok(None);
    };
    let first_step = paths_to(dfa, sink);
    let mut word = Word::empty();
    for q in (0..dfa.state_count()).filter(|&q| q != sink) {
        let mut r = dfa.run_from(q, &word);
        while r != sink {
            let a = first_step[r].expect("every state reaches the sink");
            word.push(a);
            r = dfa.next(r, a);
        }
    }
    let mut certificate = SyncCertificate {
        word,
        target: sink,
        per_state_check: false,
    };
    certificate.per_state_check = certificate.verify(dfa);
    Ok(Some(certificate))
}
