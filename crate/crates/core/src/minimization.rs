//! Hopcroft minimization, the naive Nerode refinement used as its oracle,
//! quotient automata and the minimality check.

use std::collections::HashMap;

use crate::automaton::{Dfa, StateId};
use crate::error::{Error, Result};

/// Partition of the states of an automaton into classes.
///
/// Classes are numbered by their smallest member, so class 0 contains state 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StatePartition {
    class_of: Vec<usize>,
    classes: Vec<Vec<StateId>>,
}

impl StatePartition {
    /// Normalizes arbitrary class labels; the labels only need to be equal
    /// for states in the same class.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        let mut class_of = Vec::with_capacity(labels.len());
        let mut classes: Vec<Vec<StateId>> = Vec::new();
        for (q, label) in labels.iter().enumerate() {
            let id = *renumber.entry(*label).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            class_of.push(id);
            classes[id].push(q);
        }
        Self { class_of, classes }
    }

    /// The partition into singletons.
    pub fn identity(state_count: usize) -> Self {
        Self {
            class_of: (0..state_count).collect(),
            classes: (0..state_count).map(|q| vec![q]).collect(),
        }
    }

    pub fn class_of(&self, state: StateId) -> usize {
        self.class_of[state]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[Vec<StateId>] {
        &self.classes
    }

    pub fn state_count(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_identity(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }

    /// Checks that finals are saturated and successors of a class stay in
    /// one class.
    pub fn check_congruence(&self, dfa: &Dfa) -> Result<()> {
        if self.state_count() != dfa.state_count() {
            return Err(Error::NotCongruence(format!(
                "partition covers {} states, automaton has {}",
                self.state_count(),
                dfa.state_count()
            )));
        }
        for (c, members) in self.classes.iter().enumerate() {
            let rep = members[0];
            for &q in &members[1..] {
                if dfa.is_final(q) != dfa.is_final(rep) {
                    return Err(Error::NotCongruence(format!(
                        "class {c} mixes final and non-final states"
                    )));
                }
                for a in 0..dfa.alphabet().len() {
                    if self.class_of[dfa.next(q, a)] != self.class_of[dfa.next(rep, a)] {
                        return Err(Error::NotCongruence(format!(
                            "class {c} is split by symbol '{}'",
                            dfa.alphabet().symbol(a)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Coarsest congruence refining {F, Q∖F}, by repeated splitting on
/// successor classes until nothing changes. Quadratic; used as an oracle.
pub fn nerode_partition_naive(dfa: &Dfa) -> StatePartition {
    let n = dfa.state_count();
    let mut labels: Vec<usize> = (0..n).map(|q| dfa.is_final(q) as usize).collect();
    let mut count = StatePartition::from_labels(&labels).class_count();
    loop {
        let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
        let next: Vec<usize> = (0..n)
            .map(|q| {
                let mut sig = Vec::with_capacity(dfa.alphabet().len() + 1);
                sig.push(labels[q]);
                sig.extend(dfa.row(q).iter().map(|&r| labels[r]));
                let fresh = signatures.len();
                *signatures.entry(sig).or_insert(fresh)
            })
            .collect();
        labels = next;
        if signatures.len() == count {
            break;
        }
        count = signatures.len();
    }
    StatePartition::from_labels(&labels)
}

/// Refinable partition over `0..n` with per-class marking.
struct Refinement {
    elements: Vec<StateId>,
    position: Vec<usize>,
    class_of: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    marked: Vec<usize>,
}

impl Refinement {
    fn new(n: usize, initial_class: impl Fn(StateId) -> usize, class_count: usize) -> Self {
        let mut sizes = vec![0; class_count];
        for q in 0..n {
            sizes[initial_class(q)] += 1;
        }
        let mut start = Vec::with_capacity(class_count);
        let mut acc = 0;
        for &s in &sizes {
            start.push(acc);
            acc += s;
        }
        let end: Vec<usize> = start.iter().zip(&sizes).map(|(s, z)| s + z).collect();
        let mut fill = start.clone();
        let mut elements = vec![0; n];
        let mut position = vec![0; n];
        let mut class_of = vec![0; n];
        for q in 0..n {
            let c = initial_class(q);
            elements[fill[c]] = q;
            position[q] = fill[c];
            class_of[q] = c;
            fill[c] += 1;
        }
        Self {
            elements,
            position,
            class_of,
            start,
            end,
            marked: vec![0; class_count],
        }
    }

    fn size(&self, class: usize) -> usize {
        self.end[class] - self.start[class]
    }

    fn members(&self, class: usize) -> &[StateId] {
        &self.elements[self.start[class]..self.end[class]]
    }

    /// Moves `q` into the marked prefix of its class. Returns true when this
    /// is the first mark in that class.
    fn mark(&mut self, q: StateId) -> bool {
        let c = self.class_of[q];
        let i = self.position[q];
        let j = self.start[c] + self.marked[c];
        if i < j {
            return false;
        }
        let other = self.elements[j];
        self.elements.swap(i, j);
        self.position[q] = j;
        self.position[other] = i;
        self.marked[c] += 1;
        self.marked[c] == 1
    }

    /// Splits the marked prefix off `class` into a new class, if it is a
    /// proper subset. Returns the new class id.
    fn split(&mut self, class: usize) -> Option<usize> {
        let marked = std::mem::take(&mut self.marked[class]);
        if marked == self.size(class) {
            return None;
        }
        let new = self.start.len();
        let boundary = self.start[class] + marked;
        self.start.push(self.start[class]);
        self.end.push(boundary);
        self.marked.push(0);
        self.start[class] = boundary;
        for i in self.start[new]..self.end[new] {
            self.class_of[self.elements[i]] = new;
        }
        Some(new)
    }
}

/// Nerode partition computed by Hopcroft's algorithm in O(n·|A|·log n).
pub fn hopcroft_partition(dfa: &Dfa) -> StatePartition {
    let n = dfa.state_count();
    let k = dfa.alphabet().len();

    // predecessors grouped by (symbol, target), CSR layout
    let mut offsets = vec![0usize; k * n + 1];
    for q in 0..n {
        for (a, &r) in dfa.row(q).iter().enumerate() {
            offsets[a * n + r + 1] += 1;
        }
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut preds = vec![0; n * k];
    let mut fill = offsets.clone();
    for q in 0..n {
        for (a, &r) in dfa.row(q).iter().enumerate() {
            preds[fill[a * n + r]] = q;
            fill[a * n + r] += 1;
        }
    }

    let final_count = dfa.final_flags().iter().filter(|&&f| f).count();
    let mut partition = if final_count == 0 || final_count == n {
        Refinement::new(n, |_| 0, 1)
    } else {
        Refinement::new(n, |q| dfa.is_final(q) as usize, 2)
    };

    let mut in_worklist = vec![false; partition.start.len()];
    let mut worklist = Vec::new();
    if partition.start.len() == 2 {
        let smaller = if partition.size(0) <= partition.size(1) { 0 } else { 1 };
        worklist.push(smaller);
        in_worklist[smaller] = true;
    }

    let mut splitter = Vec::new();
    let mut touched = Vec::new();
    while let Some(class) = worklist.pop() {
        in_worklist[class] = false;
        splitter.clear();
        splitter.extend_from_slice(partition.members(class));
        for a in 0..k {
            for &target in &splitter {
                let base = a * n + target;
                for &p in &preds[offsets[base]..offsets[base + 1]] {
                    if partition.mark(p) {
                        touched.push(partition.class_of[p]);
                    }
                }
            }
            for c in touched.drain(..) {
                if let Some(new) = partition.split(c) {
                    in_worklist.push(false);
                    if in_worklist[c] {
                        worklist.push(new);
                        in_worklist[new] = true;
                    } else {
                        let smaller = if partition.size(new) <= partition.size(c) { new } else { c };
                        worklist.push(smaller);
                        in_worklist[smaller] = true;
                    }
                }
            }
        }
    }
    StatePartition::from_labels(&partition.class_of)
}

/// `A/∼`: one state per class, `[p] · a = [p · a]`.
pub fn quotient_automaton(dfa: &Dfa, partition: &StatePartition) -> Result<Dfa> {
    partition.check_congruence(dfa)?;
    let k = dfa.alphabet().len();
    let mut table = Vec::with_capacity(partition.class_count() * k);
    let mut finals = Vec::with_capacity(partition.class_count());
    for members in partition.classes() {
        let rep = members[0];
        table.extend(dfa.row(rep).iter().map(|&r| partition.class_of(r)));
        finals.push(dfa.is_final(rep));
    }
    let out = Dfa::from_parts(
        dfa.alphabet().clone(),
        table,
        partition.class_of(dfa.initial()),
        finals,
    );
    match dfa.state_names() {
        Some(names) => out.with_state_names(
            partition
                .classes()
                .iter()
                .map(|members| names[members[0]].clone())
                .collect(),
        ),
        None => Ok(out),
    }
}

/// The minimal automaton of an accessible DFA.
pub fn hopcroft_minimize(dfa: &Dfa) -> Result<Dfa> {
    dfa.require_accessible()?;
    quotient_automaton(dfa, &hopcroft_partition(dfa))
}

/// Trims unreachable states, then minimizes.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let trimmed = dfa.trim_accessible();
    quotient_automaton(&trimmed, &hopcroft_partition(&trimmed))
        .expect("Hopcroft output is a congruence")
}

/// Condition (M): distinct states have distinct futures.
pub fn check_minimality_condition_m(dfa: &Dfa) -> Result<bool> {
    dfa.require_accessible()?;
    Ok(nerode_partition_naive(dfa).is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{compile_regex, Alphabet, ProductMode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    fn random_dfa(rng: &mut ChaCha8Rng, n: usize) -> Dfa {
        let table = (0..2 * n).map(|_| rng.gen_range(0..n)).collect();
        let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        Dfa::new(ab(), n, table, 0, finals).unwrap().trim_accessible()
    }

    #[test]
    fn all_final_is_one_class() {
        let d = Dfa::from_rows(ab(), &[vec![1, 2], vec![2, 0], vec![0, 1]], 0, [0, 1, 2]).unwrap();
        assert_eq!(nerode_partition_naive(&d).class_count(), 1);
        assert_eq!(hopcroft_minimize(&d).unwrap().state_count(), 1);
    }

    #[test]
    fn even_length_has_two_classes() {
        let d = compile_regex("(..)*", &ab()).unwrap();
        assert_eq!(nerode_partition_naive(&d).class_count(), 2);
        assert_eq!(hopcroft_minimize(&d).unwrap().state_count(), 2);
    }

    #[test]
    fn duplicated_state_collapses() {
        // aA* where the accepting sink is split into two copies
        let d = Dfa::from_rows(
            ab(),
            &[vec![1, 3], vec![2, 1], vec![1, 2], vec![3, 3]],
            0,
            [1, 2],
        )
        .unwrap();
        let m = hopcroft_minimize(&d).unwrap();
        assert_eq!(m.state_count(), 3);
        assert!(m.language_equals(&d).unwrap());
        assert!(!check_minimality_condition_m(&d).unwrap());
        assert!(check_minimality_condition_m(&m).unwrap());
    }

    #[test]
    fn single_state_is_minimal() {
        assert!(check_minimality_condition_m(&Dfa::universal(ab())).unwrap());
    }

    #[test]
    fn minimal_input_is_reproduced() {
        let d = Dfa::from_rows(ab(), &[vec![1, 2], vec![1, 1], vec![2, 2]], 0, [1]).unwrap();
        assert!(hopcroft_minimize(&d).unwrap().is_isomorphic(&d).unwrap());
    }

    #[test]
    fn rejects_inaccessible_input() {
        let d = Dfa::from_rows(ab(), &[vec![0, 0], vec![1, 1]], 0, [1]).unwrap();
        assert_eq!(hopcroft_minimize(&d).unwrap_err(), Error::NotAccessible);
        assert_eq!(check_minimality_condition_m(&d).unwrap_err(), Error::NotAccessible);
        assert_eq!(minimize(&d).state_count(), 1);
    }

    #[test]
    fn quotient_rejects_non_congruence() {
        let d = compile_regex("a.*", &ab()).unwrap();
        let lumped = StatePartition::from_labels(&vec![0; d.state_count()]);
        assert!(matches!(
            quotient_automaton(&d, &lumped),
            Err(Error::NotCongruence(_))
        ));
    }

    #[test]
    fn identity_partition_quotient_is_isomorphic() {
        let d = compile_regex(".*ab.*", &ab()).unwrap();
        let q = quotient_automaton(&d, &StatePartition::identity(d.state_count())).unwrap();
        assert!(q.is_isomorphic(&d).unwrap());
    }

    #[test]
    fn hopcroft_agrees_with_naive_refinement() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(1..=10);
            let d = random_dfa(&mut rng, n);
            let naive = nerode_partition_naive(&d);
            assert_eq!(hopcroft_partition(&d), naive);
            let fast = hopcroft_minimize(&d).unwrap();
            let slow = quotient_automaton(&d, &naive).unwrap();
            assert!(fast.is_isomorphic(&slow).unwrap());
            assert!(fast.state_count() <= d.state_count());
            assert!(check_minimality_condition_m(&fast).unwrap());
            assert!(d
                .product(&fast, ProductMode::SymmetricDifference)
                .unwrap()
                .is_empty_language());
        }
    }

    #[test]
    fn naive_partition_is_a_saturating_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let n = rng.gen_range(1..=8);
            let d = random_dfa(&mut rng, n);
            let p = nerode_partition_naive(&d);
            p.check_congruence(&d).unwrap();
            let covered: usize = p.classes().iter().map(Vec::len).sum();
            assert_eq!(covered, d.state_count());
        }
    }
}
