//! Brute-force oracles and the cross-check of the independent zero-one
//! tests.

use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::automaton::{Dfa, Word};
use crate::error::{Error, Result};
use crate::minimization::hopcroft_minimize;
use crate::monoid::{find_zero, transition_monoid, DEFAULT_MONOID_CAP};
use crate::probability::{counting_series, estimate_limit, LimitClass, LimitConfig, LimitEstimate};
use crate::zero_one::{classify_zero_one, is_zero_automaton, Decision, ZeroOneVerdict};

/// Total number of words a single enumeration may visit.
pub const ENUMERATION_GUARD: u64 = 10_000_000;

/// Longest length enumerated by [`cross_check`].
pub const CROSS_CHECK_ENUMERATION_MAX: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountMismatch {
    pub n: usize,
    /// From the counting series.
    pub expected: BigUint,
    /// From enumeration.
    pub actual: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    pub n_max: usize,
    pub counts: Vec<u64>,
    pub mismatches: Vec<CountMismatch>,
}

/// `Σ_{n ≤ n_max} |A|^n`, saturating.
fn total_words(alphabet_size: usize, n_max: usize) -> u128 {
    let k = alphabet_size as u128;
    let mut total: u128 = 0;
    let mut layer: u128 = 1;
    for _ in 0..=n_max {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(k);
    }
    total
}

/// Largest `n ≤ cap` whose full enumeration fits the guard.
pub fn max_enumerable_length(alphabet_size: usize, cap: usize) -> usize {
    (0..=cap)
        .rev()
        .find(|&n| total_words(alphabet_size, n) <= ENUMERATION_GUARD as u128)
        .unwrap_or(0)
}

/// Runs every word of length `0..=n_max` through the automaton in odometer
/// order and compares the counts with [`counting_series`].
pub fn brute_force_count(dfa: &Dfa, n_max: usize) -> Result<EnumerationReport> {
    let k = dfa.alphabet().len();
    let words = total_words(k, n_max);
    if words > ENUMERATION_GUARD as u128 {
        return Err(Error::EnumerationGuard {
            words,
            guard: ENUMERATION_GUARD,
        });
    }
    let mut counts = Vec::with_capacity(n_max + 1);
    for length in 0..=n_max {
        let mut digits = vec![0; length];
        // states[i] is the state after reading digits[..i]
        let mut states = vec![dfa.initial(); length + 1];
        for i in 0..length {
            states[i + 1] = dfa.next(states[i], 0);
        }
        let mut accepted = 0u64;
        loop {
            if dfa.is_final(states[length]) {
                accepted += 1;
            }
            let Some(pos) = (0..length).rev().find(|&i| digits[i] + 1 < k) else {
                break;
            };
            digits[pos] += 1;
            for d in &mut digits[pos + 1..] {
                *d = 0;
            }
            for i in pos..length {
                states[i + 1] = dfa.next(states[i], digits[i]);
            }
        }
        counts.push(accepted);
    }
    let series = counting_series(dfa, n_max);
    let mismatches = counts
        .iter()
        .enumerate()
        .filter(|&(n, &c)| *series.gamma(n) != BigUint::from(c))
        .map(|(n, &c)| CountMismatch {
            n,
            expected: series.gamma(n).clone(),
            actual: c,
        })
        .collect();
    Ok(EnumerationReport {
        n_max,
        counts,
        mismatches,
    })
}

/// How the empirical limit reading relates to the structural verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesConsistency {
    /// The tail classification matches the verdict.
    Consistent,
    /// The tail is not yet decisive, e.g. slow convergence.
    Inconclusive,
    /// The tail sits at the extreme opposite to the verdict.
    Contradicting,
}

impl SeriesConsistency {
    pub fn as_str(self) -> &'static str {
        match self {
            SeriesConsistency::Consistent => "consistent",
            SeriesConsistency::Inconclusive => "inconclusive",
            SeriesConsistency::Contradicting => "contradicting",
        }
    }
}

fn series_consistency(decision: Decision, class: &LimitClass) -> SeriesConsistency {
    use LimitClass::*;
    match (decision, class) {
        (Decision::One, ConvergesToOne) | (Decision::Zero, ConvergesToZero) => {
            SeriesConsistency::Consistent
        }
        (Decision::NotZeroOne, ConvergesToOther { .. } | NoConvergenceDetected) => {
            SeriesConsistency::Consistent
        }
        (Decision::One, ConvergesToZero) | (Decision::Zero, ConvergesToOne) => {
            SeriesConsistency::Contradicting
        }
        _ => SeriesConsistency::Inconclusive,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckConfig {
    pub limit: LimitConfig,
    pub monoid_cap: usize,
}

impl CrossCheckConfig {
    pub fn for_dfa(dfa: &Dfa) -> Self {
        Self {
            limit: LimitConfig::for_state_count(dfa.state_count()),
            monoid_cap: DEFAULT_MONOID_CAP,
        }
    }
}

/// Results of the independent tests on one automaton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossCheckReport {
    /// The minimal automaton is a zero automaton.
    pub minimal_is_zero: bool,
    /// The syntactic monoid has a zero; carries its witness.
    pub monoid_zero: Option<Word>,
    pub monoid_order: usize,
    pub limit: LimitEstimate,
    /// The input is quasi-zero.
    pub quasi_zero: bool,
    pub verdict: ZeroOneVerdict,
    pub series_consistency: SeriesConsistency,
    pub enumeration: EnumerationReport,
}

impl CrossCheckReport {
    /// The three exact tests agree.
    pub fn structural_agreement(&self) -> bool {
        self.minimal_is_zero == self.monoid_zero.is_some() && self.minimal_is_zero == self.quasi_zero
    }

    /// Structural agreement and no enumeration mismatch. The limit reading
    /// is advisory and does not count.
    pub fn passed(&self) -> bool {
        self.structural_agreement() && self.enumeration.mismatches.is_empty()
    }

    pub fn to_json(&self, dfa: &Dfa) -> Value {
        let alphabet = dfa.alphabet();
        json!({
            "minimal_is_zero": self.minimal_is_zero,
            "monoid_has_zero": self.monoid_zero.is_some(),
            "monoid_zero_witness": self.monoid_zero.as_ref().map(|w| alphabet.render(w)),
            "monoid_order": self.monoid_order,
            "limit_estimate": self.limit.to_json(),
            "quasi_zero": self.quasi_zero,
            "structural_agreement": self.structural_agreement(),
            "series_consistency": self.series_consistency.as_str(),
            "enumeration": {
                "n_max": self.enumeration.n_max,
                "counts": self.enumeration.counts,
                "mismatches": self.enumeration.mismatches.len(),
            },
            "verdict": self.verdict.to_json(alphabet),
        })
    }
}

/// Free-function form of [`CrossCheckReport::structural_agreement`].
pub fn structural_agreement(report: &CrossCheckReport) -> bool {
    report.structural_agreement()
}

/// Runs the minimal-automaton test, the monoid zero search, the limit
/// estimate, the quasi-zero test and a bounded enumeration.
pub fn cross_check(dfa: &Dfa, config: &CrossCheckConfig) -> Result<CrossCheckReport> {
    dfa.require_accessible()?;
    let minimal = hopcroft_minimize(dfa)?;
    let minimal_is_zero = is_zero_automaton(&minimal)?;
    let monoid = transition_monoid(&minimal, config.monoid_cap)?;
    let monoid_zero = find_zero(&monoid).map(|(_, w)| w);
    let series = counting_series(dfa, config.limit.n_max);
    let limit = estimate_limit(&series, &config.limit.epsilon, config.limit.window)?;
    let verdict = classify_zero_one(dfa)?;
    let quasi_zero = verdict.decision.is_zero_one();
    let series_consistency = series_consistency(verdict.decision, &limit.classification);
    let n = max_enumerable_length(dfa.alphabet().len(), CROSS_CHECK_ENUMERATION_MAX);
    let enumeration = brute_force_count(dfa, n.min(config.limit.n_max))?;
    Ok(CrossCheckReport {
        minimal_is_zero,
        monoid_zero,
        monoid_order: monoid.order(),
        limit,
        quasi_zero,
        verdict,
        series_consistency,
        enumeration,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{compile_regex, Alphabet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ab() -> Alphabet {
        Alphabet::new(['a', 'b']).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(
            brute_force_count(&Dfa::universal(ab()), 3).unwrap().counts,
            vec![1, 2, 4, 8]
        );
        let even = compile_regex("(..)*", &ab()).unwrap();
        let report = brute_force_count(&even, 4).unwrap();
        assert_eq!(report.counts, vec![1, 0, 4, 0, 16]);
        assert!(report.mismatches.is_empty());
    }

    #[test]
    fn unary_and_ternary_alphabets() {
        let unary = Alphabet::new(['a']).unwrap();
        let d = compile_regex("aa*", &unary).unwrap();
        assert_eq!(brute_force_count(&d, 4).unwrap().counts, vec![0, 1, 1, 1, 1]);
        let abc = Alphabet::new(['a', 'b', 'c']).unwrap();
        let d = compile_regex(".*c", &abc).unwrap();
        assert_eq!(brute_force_count(&d, 3).unwrap().counts, vec![0, 1, 3, 9]);
    }

    #[test]
    fn guard() {
        // 2^24 − 1 words up to length 23
        assert!(matches!(
            brute_force_count(&Dfa::universal(ab()), 23),
            Err(Error::EnumerationGuard { guard: ENUMERATION_GUARD, .. })
        ));
        assert_eq!(max_enumerable_length(2, 12), 12);
        assert_eq!(max_enumerable_length(2, 30), 22);
        assert_eq!(max_enumerable_length(10, 12), 6);
    }

    #[test]
    fn random_machines_match_the_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let n = 5;
            let table = (0..2 * n).map(|_| rng.gen_range(0..n)).collect();
            let finals: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
            let d = Dfa::new(ab(), n, table, 0, finals).unwrap();
            assert!(brute_force_count(&d, 10).unwrap().mismatches.is_empty());
        }
    }

    #[test]
    fn cross_check_examples() {
        let d = compile_regex(".*ab.*", &ab()).unwrap();
        let r = cross_check(&d, &CrossCheckConfig::for_dfa(&d)).unwrap();
        assert!(r.minimal_is_zero && r.monoid_zero.is_some() && r.quasi_zero);
        assert_eq!(r.limit.classification, LimitClass::ConvergesToOne);
        assert_eq!(r.series_consistency, SeriesConsistency::Consistent);
        assert!(r.passed());
        assert_eq!(r.enumeration.n_max, 12);

        let d = compile_regex("a.*", &ab()).unwrap();
        let r = cross_check(&d, &CrossCheckConfig::for_dfa(&d)).unwrap();
        assert!(!r.minimal_is_zero && r.monoid_zero.is_none() && !r.quasi_zero);
        assert!(matches!(r.limit.classification, LimitClass::ConvergesToOther { .. }));
        assert!(structural_agreement(&r));
        assert_eq!(r.to_json(&d)["verdict"]["decision"], "not_zero_one");
    }

    #[test]
    fn exact_tests_agree_on_random_machines() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..500 {
            let d = crate::random::random_dfa_mixed(&mut rng, 6, &ab());
            let mut config = CrossCheckConfig::for_dfa(&d);
            config.limit.n_max = config.limit.n_max.min(64);
            let r = cross_check(&d, &config).unwrap();
            assert!(r.passed(), "{}", crate::automaton::format_dfa(&d));
            assert_ne!(r.series_consistency, SeriesConsistency::Contradicting);
        }
    }

    #[test]
    fn consistency_table() {
        use SeriesConsistency::*;
        assert_eq!(series_consistency(Decision::One, &LimitClass::ConvergesToZero), Contradicting);
        assert_eq!(
            series_consistency(Decision::One, &LimitClass::NoConvergenceDetected),
            Inconclusive
        );
        assert_eq!(
            series_consistency(Decision::NotZeroOne, &LimitClass::ConvergesToOne),
            Inconclusive
        );
    }
}
