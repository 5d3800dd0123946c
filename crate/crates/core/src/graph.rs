//! Strongly connected components of the transition graph.

use crate::automaton::{Dfa, StateId};

/// Tarjan decomposition. Components are listed in reverse topological
/// order: every edge leaving component `i` lands in some component `j < i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    component_of: Vec<usize>,
    components: Vec<Vec<StateId>>,
    is_sink: Vec<bool>,
}

impl SccDecomposition {
    pub fn component_of(&self, state: StateId) -> usize {
        self.component_of[state]
    }

    pub fn components(&self) -> &[Vec<StateId>] {
        &self.components
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn is_sink(&self, component: usize) -> bool {
        self.is_sink[component]
    }

    pub fn is_trivial(&self, component: usize) -> bool {
        self.components[component].len() == 1
    }

    /// Components with no outgoing transition, in decomposition order.
    pub fn sink_components(&self) -> Vec<&[StateId]> {
        self.components
            .iter()
            .zip(&self.is_sink)
            .filter(|(_, &sink)| sink)
            .map(|(c, _)| c.as_slice())
            .collect()
    }
}

/// Iterative Tarjan over the `|A|`-regular transition digraph.
pub fn scc_decompose(dfa: &Dfa) -> SccDecomposition {
    const UNVISITED: usize = usize::MAX;
    let n = dfa.state_count();
    let k = dfa.alphabet().len();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<StateId> = Vec::new();
    // (state, next symbol to explore)
    let mut calls: Vec<(StateId, usize)> = Vec::new();
    let mut component_of = vec![UNVISITED; n];
    let mut components: Vec<Vec<StateId>> = Vec::new();
    let mut counter = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        index[root] = counter;
        lowlink[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        calls.push((root, 0));

        while let Some(top) = calls.last_mut() {
            let v = top.0;
            if top.1 < k {
                let w = dfa.next(v, top.1);
                top.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = counter;
                    lowlink[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    calls.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let id = components.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("root is on the stack");
                    on_stack[w] = false;
                    component_of[w] = id;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                components.push(members);
            }
        }
    }

    let is_sink = components
        .iter()
        .enumerate()
        .map(|(id, members)| {
            members
                .iter()
                .all(|&q| dfa.row(q).iter().all(|&r| component_of[r] == id))
        })
        .collect();
    SccDecomposition {
        component_of,
        components,
        is_sink,
    }
}

/// `Sink(A)` as owned state sets.
pub fn sink_components(scc: &SccDecomposition) -> Vec<Vec<StateId>> {
    scc.sink_components().into_iter().map(<[_]>::to_vec).collect()
}
