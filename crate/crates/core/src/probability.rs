//! Counting series `γ_n`, exact probabilities `μ_n = γ_n / |A|^n`, an
//! empirical limit classifier, and the `Past`/`Fut` constructions.
//!
//! All arithmetic is exact. Floats only appear in rendered output.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::automaton::{Dfa, ProductMode, StateId};
use crate::error::{Error, Result};
use crate::minimization::check_minimality_condition_m;
use crate::monoid::{transition_monoid, TransitionMonoid, DEFAULT_MONOID_CAP};

/// Largest state count accepted by [`fut_automaton`].
pub const FUT_MAX_STATES: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesEntry {
    pub n: usize,
    pub gamma: BigUint,
    pub mu: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbabilitySeries {
    pub alphabet_size: usize,
    pub entries: Vec<SeriesEntry>,
}

impl ProbabilitySeries {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn gamma(&self, n: usize) -> &BigUint {
        &self.entries[n].gamma
    }

    pub fn mu(&self, n: usize) -> &BigRational {
        &self.entries[n].mu
    }

    /// `n,gamma,mu_num,mu_den,mu_float` with one row per length.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,gamma,mu_num,mu_den,mu_float\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                e.n,
                e.gamma,
                e.mu.numer(),
                e.mu.denom(),
                rational_to_f64(&e.mu)
            ));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "n": e.n,
                    "gamma": e.gamma.to_string(),
                    "mu_num": e.mu.numer().to_string(),
                    "mu_den": e.mu.denom().to_string(),
                    "mu_float": rational_to_f64(&e.mu),
                })
            })
            .collect();
        json!({ "alphabet_size": self.alphabet_size, "series": rows })
    }
}

/// Nearest float, for display only.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `γ_0 … γ_{n_max}` by pushing the distribution of path counts forward one
/// letter at a time.
pub fn counting_series(dfa: &Dfa, n_max: usize) -> ProbabilitySeries {
    let n = dfa.state_count();
    let k = dfa.alphabet().len();
    let mut counts = vec![BigUint::zero(); n];
    counts[dfa.initial()] = BigUint::one();
    let mut total = BigUint::one();
    let mut entries = Vec::with_capacity(n_max + 1);
    for length in 0..=n_max {
        let gamma: BigUint = dfa.finals().map(|q| &counts[q]).sum();
        let mu = BigRational::new(BigInt::from(gamma.clone()), BigInt::from(total.clone()));
        entries.push(SeriesEntry {
            n: length,
            gamma,
            mu,
        });
        if length == n_max {
            break;
        }
        let mut next = vec![BigUint::zero(); n];
        for (p, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &q in dfa.row(p) {
                next[q] += c;
            }
        }
        counts = next;
        total *= k;
    }
    ProbabilitySeries {
        alphabet_size: k,
        entries,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LimitClass {
    ConvergesToZero,
    ConvergesToOne,
    /// The tail stays in `[low, high]`, a band of width at most ε away
    /// from 0 and 1.
    ConvergesToOther { low: BigRational, high: BigRational },
    NoConvergenceDetected,
}

impl LimitClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            LimitClass::ConvergesToZero => "converges_to_zero",
            LimitClass::ConvergesToOne => "converges_to_one",
            LimitClass::ConvergesToOther { .. } => "converges_to_other",
            LimitClass::NoConvergenceDetected => "no_convergence_detected",
        }
    }
}

/// Statistics of the inspected tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailEvidence {
    pub first_n: usize,
    pub last_n: usize,
    pub min: BigRational,
    pub max: BigRational,
    pub last: BigRational,
}

/// Heuristic reading of a finite prefix of `μ_n`. It is a test oracle, not
/// a limit computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitEstimate {
    pub classification: LimitClass,
    pub window: usize,
    pub epsilon: BigRational,
    pub evidence: TailEvidence,
}

impl LimitEstimate {
    pub fn to_json(&self) -> Value {
        let r = |x: &BigRational| x.to_string();
        let mut out = json!({
            "heuristic": true,
            "classification": self.classification.as_str(),
            "window": self.window,
            "epsilon": r(&self.epsilon),
            "tail": {
                "first_n": self.evidence.first_n,
                "last_n": self.evidence.last_n,
                "min": r(&self.evidence.min),
                "max": r(&self.evidence.max),
                "last": r(&self.evidence.last),
            },
        });
        if let LimitClass::ConvergesToOther { low, high } = &self.classification {
            out["band"] = json!([r(low), r(high)]);
        }
        out
    }
}

/// Default knobs for [`estimate_limit`], scaled by the state count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitConfig {
    pub n_max: usize,
    pub epsilon: BigRational,
    pub window: usize,
}

impl LimitConfig {
    /// ε = 1/64, window = 2n, n_max = max(64, 8n).
    pub fn for_state_count(states: usize) -> Self {
        Self {
            n_max: (8 * states).max(64),
            epsilon: BigRational::new(BigInt::one(), BigInt::from(64)),
            window: (2 * states).max(1),
        }
    }
}

/// Classifies the last `window` values of the series.
pub fn estimate_limit(
    series: &ProbabilitySeries,
    epsilon: &BigRational,
    window: usize,
) -> Result<LimitEstimate> {
    if window == 0 {
        return Err(Error::EmptyWindow);
    }
    if series.len() < window {
        return Err(Error::SeriesTooShort {
            len: series.len(),
            window,
        });
    }
    let tail = &series.entries[series.len() - window..];
    let mut min = &tail[0].mu;
    let mut max = &tail[0].mu;
    for e in tail {
        min = min.min(&e.mu);
        max = max.max(&e.mu);
    }
    let one = BigRational::one();
    let classification = if *min >= &one - epsilon {
        LimitClass::ConvergesToOne
    } else if max <= epsilon {
        LimitClass::ConvergesToZero
    } else if max - min <= *epsilon && *min > BigRational::zero() && *max < one {
        LimitClass::ConvergesToOther {
            low: min.clone(),
            high: max.clone(),
        }
    } else {
        LimitClass::NoConvergenceDetected
    };
    Ok(LimitEstimate {
        classification,
        window,
        epsilon: epsilon.clone(),
        evidence: TailEvidence {
            first_n: tail[0].n,
            last_n: tail[window - 1].n,
            min: min.clone(),
            max: max.clone(),
            last: tail[window - 1].mu.clone(),
        },
    })
}

fn check_states(dfa: &Dfa, states: &[StateId]) -> Result<()> {
    match states.iter().find(|&&q| q >= dfa.state_count()) {
        Some(&state) => Err(Error::InvalidState {
            state,
            count: dfa.state_count(),
        }),
        None => Ok(()),
    }
}

/// `Past(P) = { w | q₀ · w ∈ P }`: the same machine with final set `P`.
pub fn past_automaton(dfa: &Dfa, states: &[StateId]) -> Result<Dfa> {
    check_states(dfa, states)?;
    let mut finals = vec![false; dfa.state_count()];
    for &q in states {
        finals[q] = true;
    }
    Ok(dfa.with_finals(finals))
}

/// `Fut(P) = { w | ∃p ∈ P, p · w ∈ F }` by subset construction from `P`.
pub fn fut_automaton(dfa: &Dfa, states: &[StateId]) -> Result<Dfa> {
    if states.is_empty() {
        return Err(Error::EmptyStateSet);
    }
    check_states(dfa, states)?;
    let n = dfa.state_count();
    if n > FUT_MAX_STATES {
        return Err(Error::TooManyStates {
            states: n,
            max: FUT_MAX_STATES,
        });
    }
    let k = dfa.alphabet().len();
    let final_mask: u32 = dfa.finals().fold(0, |m, q| m | 1 << q);
    let start: u32 = states.iter().fold(0, |m, &q| m | 1 << q);
    let mut ids = HashMap::from([(start, 0)]);
    let mut subsets = vec![start];
    let mut table = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        let set = subsets[i];
        for a in 0..k {
            let mut image = 0u32;
            let mut rest = set;
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                image |= 1 << dfa.next(q, a);
            }
            let id = *ids.entry(image).or_insert_with(|| {
                subsets.push(image);
                subsets.len() - 1
            });
            table.push(id);
        }
        i += 1;
    }
    let finals = subsets.iter().map(|&s| s & final_mask != 0).collect();
    Ok(Dfa::from_parts(dfa.alphabet().clone(), table, 0, finals))
}

/// For each monoid element `e`, the bit `q · e ∈ F`, per state `q`.
fn final_signatures(dfa: &Dfa, monoid: &TransitionMonoid) -> Vec<Vec<bool>> {
    (0..dfa.state_count())
        .map(|q| {
            monoid
                .elements()
                .iter()
                .map(|e| dfa.is_final(e.apply(q)))
                .collect()
        })
        .collect()
}

/// Checks that every `Past(q)` of a minimal automaton is the Boolean
/// combination of right quotients `L w⁻¹`, one `w` per monoid element:
/// `p` satisfies exactly the same conditions `p · w ∈ F` as `q` only when
/// `p = q`.
pub fn verify_past_boolean_combination(dfa: &Dfa) -> Result<bool> {
    verify_past_boolean_combination_with_cap(dfa, DEFAULT_MONOID_CAP)
}

pub fn verify_past_boolean_combination_with_cap(dfa: &Dfa, cap: usize) -> Result<bool> {
    if !check_minimality_condition_m(dfa)? {
        return Err(Error::NotMinimal);
    }
    let monoid = transition_monoid(dfa, cap)?;
    let signatures = final_signatures(dfa, &monoid);
    Ok((0..dfa.state_count()).all(|q| {
        (0..dfa.state_count()).all(|p| (signatures[p] == signatures[q]) == (p == q))
    }))
}

/// The language-level right-hand side for `Past(q)`:
/// `⋂_{q·w∈F} L w⁻¹ ∩ ⋂_{q·w∉F} (A* ∖ L w⁻¹)` over one witness `w` per monoid
/// element. For a minimal automaton it recognizes exactly `Past(q)`.
pub fn past_as_boolean_combination(dfa: &Dfa, state: StateId, cap: usize) -> Result<Dfa> {
    check_states(dfa, &[state])?;
    dfa.require_accessible()?;
    let monoid = transition_monoid(dfa, cap)?;
    let mut acc = Dfa::universal(dfa.alphabet().clone());
    for (i, e) in monoid.elements().iter().enumerate() {
        let quotient = dfa.right_quotient(monoid.witness(i))?;
        let mode = if dfa.is_final(e.apply(state)) {
            ProductMode::Intersection
        } else {
            ProductMode::Difference
        };
        acc = acc.product(&quotient, mode)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{compile_regex, Alphabet, Word};
    use crate::graph::scc_decompose;
    use crate::minimization::hopcroft_minimize;
    use crate::oracle::brute_force_count;
    use crate::zero_one::classify_zero_one;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn random_dfa(rng: &mut ChaCha8Rng, n: usize) -> Dfa {
        let table = (0..2 * n).map(|_| rng.gen_range(0..n)).collect();
        let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        Dfa::new(ab(), n, table, 0, finals).unwrap().trim_accessible()
    }

    fn random_word(rng: &mut ChaCha8Rng, len: usize) -> Word {
        (0..len).map(|_| rng.gen_range(0..2)).collect()
    }

    fn gammas(dfa: &Dfa, n_max: usize) -> Vec<BigUint> {
        counting_series(dfa, n_max)
            .entries
            .into_iter()
            .map(|e| e.gamma)
            .collect()
    }

    #[test]
    fn universal_language_counts_every_word() {
        let s = counting_series(&Dfa::universal(ab()), 10);
        for n in 0..=10 {
            assert_eq!(*s.gamma(n), BigUint::from(1u32) << n);
            assert!(s.mu(n).is_one());
        }
    }

    #[test]
    fn example_series() {
        let even = compile_regex("(..)*", &ab()).unwrap();
        let starts_a = compile_regex("a.*", &ab()).unwrap();
        let s = counting_series(&even, 20);
        for n in 0..=20 {
            let expected = if n % 2 == 0 { 1 } else { 0 };
            assert_eq!(*s.mu(n), ratio(expected, 1));
        }
        let s = counting_series(&starts_a, 20);
        assert!(s.mu(0).is_zero());
        assert!((1..=20).all(|n| *s.mu(n) == ratio(1, 2)));
        let s = counting_series(&Dfa::empty_language(ab()), 5);
        assert!(s.entries.iter().all(|e| e.gamma.is_zero()));
    }

    #[test]
    fn csv_rendering() {
        let s = counting_series(&compile_regex("a.*", &ab()).unwrap(), 2);
        assert_eq!(
            s.to_csv(),
            "n,gamma,mu_num,mu_den,mu_float\n0,0,0,1,0\n1,1,1,2,0.5\n2,2,1,2,0.5\n"
        );
        assert_eq!(s.to_json()["series"][2]["mu_den"], "2");
    }

    #[test]
    fn matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..30 {
            let n = rng.gen_range(1..=6);
            let d = random_dfa(&mut rng, n);
            let report = brute_force_count(&d, 10).unwrap();
            assert!(report.mismatches.is_empty());
        }
    }

    #[test]
    fn limit_estimates_for_the_examples() {
        let sigma = ab();
        let eps = ratio(1, 100);
        let starts_a = counting_series(&compile_regex("a.*", &sigma).unwrap(), 16);
        match estimate_limit(&starts_a, &eps, 8).unwrap().classification {
            LimitClass::ConvergesToOther { low, high } => {
                assert_eq!(low, ratio(1, 2));
                assert_eq!(high, ratio(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        let even = counting_series(&compile_regex("(..)*", &sigma).unwrap(), 16);
        assert_eq!(
            estimate_limit(&even, &eps, 8).unwrap().classification,
            LimitClass::NoConvergenceDetected
        );
        let d = compile_regex(".*ab.*", &sigma).unwrap();
        let config = LimitConfig::for_state_count(d.state_count());
        let factor = counting_series(&d, 64);
        let estimate = estimate_limit(&factor, &config.epsilon, config.window).unwrap();
        assert_eq!(estimate.classification, LimitClass::ConvergesToOne);
        assert_eq!(estimate.evidence.last_n, 64);
        let empty = counting_series(&Dfa::empty_language(sigma), 8);
        assert_eq!(
            estimate_limit(&empty, &eps, 4).unwrap().classification,
            LimitClass::ConvergesToZero
        );
    }

    #[test]
    fn limit_estimate_errors() {
        let s = counting_series(&Dfa::universal(ab()), 3);
        assert_eq!(
            estimate_limit(&s, &ratio(1, 64), 5).unwrap_err(),
            Error::SeriesTooShort { len: 4, window: 5 }
        );
        assert_eq!(estimate_limit(&s, &ratio(1, 64), 0).unwrap_err(), Error::EmptyWindow);
    }

    #[test]
    fn limit_defaults() {
        let c = LimitConfig::for_state_count(3);
        assert_eq!((c.n_max, c.window), (64, 6));
        assert_eq!(c.epsilon, ratio(1, 64));
        assert_eq!(LimitConfig::for_state_count(10).n_max, 80);
    }

    #[test]
    fn shift_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let d = random_dfa(&mut rng, 5);
            let k = rng.gen_range(0..=3);
            let shifted = Dfa::exact_length(ab(), k).concat(&d).unwrap();
            let base = counting_series(&d, 10);
            let s = counting_series(&shifted, 10 + k);
            for n in 0..=10 {
                assert_eq!(s.mu(n + k), base.mu(n));
            }
        }
    }

    #[test]
    fn factor_shift_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let d = random_dfa(&mut rng, 5);
            let k = rng.gen_range(0..=3);
            let w = Dfa::from_word(ab(), &random_word(&mut rng, k)).unwrap();
            let base = gammas(&d, 12);
            let left = gammas(&w.concat(&d).unwrap(), 12);
            let right = gammas(&d.concat(&w).unwrap(), 12);
            for n in k..=12 {
                assert_eq!(left[n], base[n - k]);
                assert_eq!(right[n], base[n - k]);
            }
            assert!(left[..k].iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn complement_and_disjoint_union() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let d = random_dfa(&mut rng, 5);
            let e = random_dfa(&mut rng, 4);
            let base = gammas(&d, 10);
            let comp = gammas(&d.complement(), 10);
            for n in 0..=10 {
                assert_eq!(&base[n] + &comp[n], BigUint::from(1u32) << n);
            }
            // e ∖ d is disjoint from d
            let rest = e.product(&d, ProductMode::Difference).unwrap();
            let union = d.product(&rest, ProductMode::Union).unwrap();
            let disjoint = gammas(&rest, 10);
            let total = gammas(&union, 10);
            for n in 0..=10 {
                assert_eq!(total[n], &base[n] + &disjoint[n]);
            }
        }
    }

    #[test]
    fn past_of_reached_sink_component_is_eventually_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..30 {
            let d = random_dfa(&mut rng, 6);
            let scc = scc_decompose(&d);
            for sink in scc.sink_components() {
                // shortest word into the component
                let target = sink[0];
                let mut dist = vec![usize::MAX; d.state_count()];
                dist[d.initial()] = 0;
                let mut queue = std::collections::VecDeque::from([d.initial()]);
                while let Some(q) = queue.pop_front() {
                    for &r in d.row(q) {
                        if dist[r] == usize::MAX {
                            dist[r] = dist[q] + 1;
                            queue.push_back(r);
                        }
                    }
                }
                let reach = sink.iter().map(|&q| dist[q]).min().unwrap();
                assert!(dist[target] != usize::MAX);
                let past = gammas(&past_automaton(&d, sink).unwrap(), 12);
                for (n, g) in past.iter().enumerate().skip(reach) {
                    assert!(*g >= BigUint::from(1u32) << (n - reach));
                }
            }
        }
    }

    #[test]
    fn past_of_zero_one_sinks_tends_to_one() {
        let d = compile_regex(".*ab.*", &ab()).unwrap();
        assert!(classify_zero_one(&d).unwrap().decision.is_zero_one());
        let sinks: Vec<StateId> = scc_decompose(&d)
            .sink_components()
            .concat();
        let s = counting_series(&past_automaton(&d, &sinks).unwrap(), 64);
        let est = estimate_limit(&s, &ratio(1, 64), 8).unwrap();
        assert_eq!(est.classification, LimitClass::ConvergesToOne);
    }

    #[test]
    fn past_trivial_cases() {
        let d = compile_regex("a(ba)*", &ab()).unwrap();
        let finals: Vec<StateId> = d.finals().collect();
        assert!(past_automaton(&d, &finals).unwrap().language_equals(&d).unwrap());
        let all: Vec<StateId> = (0..d.state_count()).collect();
        assert!(past_automaton(&d, &all)
            .unwrap()
            .language_equals(&Dfa::universal(ab()))
            .unwrap());
        assert!(matches!(
            past_automaton(&d, &[99]),
            Err(Error::InvalidState { state: 99, .. })
        ));
    }

    #[test]
    fn fut_cases() {
        let d = compile_regex("a(ba)*", &ab()).unwrap();
        let fut = fut_automaton(&d, &[d.initial()]).unwrap();
        assert!(fut.is_accessible());
        assert!(fut.language_equals(&d).unwrap());
        assert_eq!(fut_automaton(&d, &[]).unwrap_err(), Error::EmptyStateSet);
        // absorbing final sink
        let z = Dfa::from_rows(ab(), &[vec![1, 0], vec![1, 1]], 0, [1]).unwrap();
        assert!(fut_automaton(&z, &[1])
            .unwrap()
            .language_equals(&Dfa::universal(ab()))
            .unwrap());
        let big = Dfa::exact_length(ab(), 25);
        assert_eq!(
            fut_automaton(&big, &[0]).unwrap_err(),
            Error::TooManyStates { states: 27, max: 20 }
        );
    }

    #[test]
    fn fut_union_and_minimal_distinctness() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..40 {
            let d = hopcroft_minimize(&random_dfa(&mut rng, 6)).unwrap();
            let futs: Vec<Dfa> = (0..d.state_count())
                .map(|q| fut_automaton(&d, &[q]).unwrap())
                .collect();
            for p in 0..d.state_count() {
                for q in 0..d.state_count() {
                    assert_eq!(futs[p].language_equals(&futs[q]).unwrap(), p == q);
                }
            }
            if d.state_count() >= 2 {
                let pair = fut_automaton(&d, &[0, 1]).unwrap();
                let union = futs[0].product(&futs[1], ProductMode::Union).unwrap();
                assert!(pair.language_equals(&union).unwrap());
            }
        }
    }

    #[test]
    fn past_is_a_boolean_combination_of_right_quotients() {
        let sigma = ab();
        for pattern in ["a.*", "(..)*", ".*ab.*", "(a|bb)*a"] {
            let d = hopcroft_minimize(&compile_regex(pattern, &sigma).unwrap()).unwrap();
            assert!(verify_past_boolean_combination(&d).unwrap(), "{pattern}");
        }
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..40 {
            let d = hopcroft_minimize(&random_dfa(&mut rng, 5)).unwrap();
            assert!(verify_past_boolean_combination(&d).unwrap());
            for q in 0..d.state_count() {
                let combined = past_as_boolean_combination(&d, q, DEFAULT_MONOID_CAP).unwrap();
                let past = past_automaton(&d, &[q]).unwrap();
                assert!(combined.language_equals(&past).unwrap());
            }
        }
    }

    #[test]
    fn non_minimal_input_is_rejected() {
        let d = Dfa::from_rows(ab(), &[vec![1, 1], vec![0, 0]], 0, [0, 1]).unwrap();
        assert_eq!(verify_past_boolean_combination(&d).unwrap_err(), Error::NotMinimal);
    }
}
