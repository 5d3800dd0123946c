//! Acceptance criteria. Runs as a plain binary (no libtest harness) and
//! prints one PASS/FAIL line per criterion; exits nonzero if any fails.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use zolaw::automaton::{compile_regex, format_dfa, Alphabet, Dfa, ProductMode};
use zolaw::cli::{run, EXIT_NEGATIVE, EXIT_OK};
use zolaw::error::Error;
use zolaw::minimization::{
    check_minimality_condition_m, hopcroft_minimize, nerode_partition_naive, quotient_automaton,
};
use zolaw::monoid::{find_zero, syntactic_monoid, DEFAULT_MONOID_CAP};
use zolaw::oracle::brute_force_count;
use zolaw::probability::{counting_series, verify_past_boolean_combination_with_cap};
use zolaw::random::{
    random_dfa, random_dfa_mixed, random_word, random_word_of_length, random_zero_automaton,
    random_zero_one,
};
use zolaw::zero_one::{
    classify_via_minimization, classify_zero_one, is_quasi_zero, is_zero_automaton,
    synchronizing_word, Decision,
};

type Outcome = Result<String, String>;
type Expected = fn(usize) -> BigRational;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ab() -> Alphabet {
    Alphabet::new(['a', 'b']).unwrap()
}

fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("zolaw").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

/// The 500 instances shared by the equivalence and path-agreement suites.
fn equivalence_instances() -> Vec<Dfa> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    (0..500).map(|_| random_dfa_mixed(&mut rng, 8, &ab())).collect()
}

fn example_series() -> Outcome {
    let cases: [(&str, Expected); 4] = [
        (".*", |_| BigRational::one()),
        ("", |_| BigRational::zero()),
        ("a.*", |n| if n == 0 { BigRational::zero() } else { ratio(1, 2) }),
        ("(..)*", |n| if n % 2 == 0 { BigRational::one() } else { BigRational::zero() }),
    ];
    for (pattern, expected) in cases {
        // the empty language has no regex here, so it comes from a file
        let (code, csv) = if pattern.is_empty() {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            let path = dir.path().join("empty.dfa");
            std::fs::write(&path, format_dfa(&Dfa::empty_language(ab()))).unwrap();
            cli(&["series", "--n-max", "64", path.to_str().unwrap()])
        } else {
            cli(&["series", "--n-max", "64", "--regex", pattern, "--alphabet", "ab"])
        };
        ensure(code == EXIT_OK, || format!("series failed for {pattern:?}"))?;
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        ensure(rows.len() == 65, || format!("{} rows for {pattern:?}", rows.len()))?;
        for (n, row) in rows.iter().enumerate() {
            let cols: Vec<&str> = row.split(',').collect();
            let mu = BigRational::new(cols[2].parse().unwrap(), cols[3].parse().unwrap());
            let gamma: BigUint = cols[1].parse().unwrap();
            ensure(mu == expected(n), || format!("{pattern:?}: mu_{n} = {mu}"))?;
            ensure(
                BigRational::new(gamma.into(), BigInt::from(2).pow(n as u32)) == mu,
                || format!("{pattern:?}: gamma_{n} inconsistent"),
            )?;
        }
    }
    Ok("A*, empty, aA*, (AA)* exact for n <= 64".into())
}

fn theorem_equivalence() -> Outcome {
    let instances = equivalence_instances();
    let mut zero_one = 0;
    for (i, d) in instances.iter().enumerate() {
        let minimal = hopcroft_minimize(d).map_err(|e| e.to_string())?;
        let c1 = is_zero_automaton(&minimal).map_err(|e| e.to_string())?;
        let m = syntactic_monoid(d, DEFAULT_MONOID_CAP).map_err(|e| format!("instance {i}: {e}"))?;
        let c2 = find_zero(&m).is_some();
        let c4 = is_quasi_zero(d).map_err(|e| e.to_string())?;
        ensure(c1 == c2 && c2 == c4, || {
            format!("instance {i}: minimal zero {c1}, monoid zero {c2}, quasi-zero {c4}\n{}", format_dfa(d))
        })?;
        zero_one += usize::from(c1);
    }
    Ok(format!("500 instances agree ({zero_one} zero-one, {} not)", 500 - zero_one))
}

fn path_agreement() -> Outcome {
    let instances = equivalence_instances();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for (i, d) in instances.iter().enumerate() {
        let direct = classify_zero_one(d).map_err(|e| e.to_string())?;
        let minimized = classify_via_minimization(d).map_err(|e| e.to_string())?;
        ensure(direct.decision == minimized.decision, || {
            format!("instance {i}: {:?} vs {:?}", direct.decision, minimized.decision)
        })?;
        let path = dir.path().join(format!("m{i}.dfa"));
        std::fs::write(&path, format_dfa(d)).map_err(|e| e.to_string())?;
        let file = path.to_str().unwrap();
        let (code, out) = cli(&["is-zero-one", file]);
        let (code_min, out_min) = cli(&["is-zero-one", "--via-minimization", file]);
        let expected_code = if direct.decision.is_zero_one() {
            EXIT_OK
        } else {
            EXIT_NEGATIVE
        };
        ensure(code == expected_code && code_min == code && out == out_min, || {
            format!("instance {i}: cli {code} {out:?} vs {code_min} {out_min:?}")
        })?;
    }
    Ok("500 instances, library and CLI routes agree".into())
}

fn borges_decay() -> Outcome {
    let d = compile_regex(".*ab.*", &ab()).map_err(|e| e.to_string())?;
    let series = counting_series(&d, 65);
    let one = BigRational::one();
    let tail: Vec<BigRational> = series.entries.iter().map(|e| &one - &e.mu).collect();
    for (n, t) in tail.iter().enumerate() {
        // words avoiding ab are b^i a^j, so n + 1 of them
        let closed = BigRational::new(BigInt::from(n + 1), BigInt::from(2).pow(n as u32));
        ensure(*t == closed, || format!("1 - mu_{n} = {t}"))?;
    }
    for n in 4..64 {
        ensure(tail[n + 1] < tail[n], || format!("not decreasing at n = {n}"))?;
    }
    // the ratio (n + 2) / (2n + 2) is largest at the first n
    let bound = ratio(9, 17);
    let conservative = ratio(99, 100);
    let mut worst = BigRational::zero();
    for n in 16..=64 {
        let r = &tail[n + 1] / &tail[n];
        ensure(r <= bound && r <= conservative, || format!("ratio at n = {n} is {r}"))?;
        worst = worst.max(r);
    }
    ensure(worst == bound, || format!("largest ratio {worst}"))?;
    Ok(format!("1 - mu_n = (n+1)/2^n; max ratio for n >= 16 is {worst} (<= 0.99)"))
}

fn closure_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let sigma = ab();
    let verdict = |d: &Dfa| classify_zero_one(d).map(|v| v.decision).map_err(|e| e.to_string());
    for i in 0..100 {
        let n1 = rng.gen_range(1..=6);
        let n2 = rng.gen_range(1..=6);
        let d1 = random_zero_one(&mut rng, n1, &sigma);
        let d2 = random_zero_one(&mut rng, n2, &sigma);
        let v1 = verdict(&d1)?;
        ensure(v1.is_zero_one() && verdict(&d2)?.is_zero_one(), || format!("trial {i}: generator"))?;
        let swapped = match v1 {
            Decision::Zero => Decision::One,
            Decision::One => Decision::Zero,
            Decision::NotZeroOne => unreachable!(),
        };
        ensure(verdict(&d1.complement())? == swapped, || format!("trial {i}: complement"))?;
        for mode in [ProductMode::Union, ProductMode::Intersection] {
            let p = d1.product(&d2, mode).map_err(|e| e.to_string())?;
            ensure(verdict(&p)?.is_zero_one(), || format!("trial {i}: {mode:?}"))?;
        }
        let u = random_word(&mut rng, &sigma, 4);
        let left = d1.left_quotient(&u).map_err(|e| e.to_string())?;
        let right = d1.right_quotient(&u).map_err(|e| e.to_string())?;
        ensure(verdict(&left)?.is_zero_one(), || format!("trial {i}: left quotient"))?;
        ensure(verdict(&right)?.is_zero_one(), || format!("trial {i}: right quotient"))?;
    }
    Ok("100 trials: complement swaps, products and quotients stay zero-one".into())
}

fn factor_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let sigma = ab();
    for i in 0..50 {
        let n = rng.gen_range(1..=6);
        let d = random_dfa(&mut rng, n, &sigma);
        let k = rng.gen_range(0..=3);
        let w = random_word_of_length(&mut rng, &sigma, k);
        let word_machine = Dfa::from_word(sigma.clone(), &w).map_err(|e| e.to_string())?;
        let wl = word_machine.concat(&d).map_err(|e| e.to_string())?;
        let lw = d.concat(&word_machine).map_err(|e| e.to_string())?;
        let base = counting_series(&d, 12);
        let left = counting_series(&wl, 12);
        let right = counting_series(&lw, 12);
        for n in k..=12 {
            ensure(
                left.gamma(n) == base.gamma(n - k) && right.gamma(n) == base.gamma(n - k),
                || format!("trial {i}, |w| = {k}, n = {n}"),
            )?;
        }
    }
    Ok("50 machines, gamma_n(wL) = gamma_n(Lw) = gamma_{n-k}(L) for k <= n <= 12".into())
}

fn sync_certificates() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let sigma = ab();
    let mut longest = 0;
    for i in 0..100 {
        let states = rng.gen_range(2..=12);
        let d = random_zero_automaton(&mut rng, states, &sigma);
        let n = d.state_count();
        let cert = synchronizing_word(&d)
            .map_err(|e| e.to_string())?
            .ok_or_else(|| format!("trial {i}: no certificate"))?;
        let sink = cert.target;
        ensure(d.row(sink).iter().all(|&r| r == sink), || format!("trial {i}: target not a sink"))?;
        for q in 0..n {
            ensure(d.run_from(q, &cert.word) == sink, || format!("trial {i}: state {q} missed"))?;
        }
        ensure(cert.per_state_check, || format!("trial {i}: certificate flag"))?;
        ensure(cert.word.len() <= n * (n - 1), || {
            format!("trial {i}: length {} > n(n-1) = {}", cert.word.len(), n * (n - 1))
        })?;
        longest = longest.max(cert.word.len());
    }
    Ok(format!("100 zero automata certified, longest word {longest}"))
}

fn past_combination() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let sigma = ab();
    let mut checked = 0;
    let mut skipped = 0;
    while checked < 100 {
        let d = hopcroft_minimize(&random_dfa_mixed(&mut rng, 8, &sigma)).map_err(|e| e.to_string())?;
        match verify_past_boolean_combination_with_cap(&d, DEFAULT_MONOID_CAP) {
            Ok(true) => checked += 1,
            Ok(false) => return Err(format!("identity fails on\n{}", format_dfa(&d))),
            Err(Error::MonoidCapExceeded { .. }) => skipped += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(format!("100 minimal machines verified ({skipped} over the monoid cap)"))
}

fn oracle_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    let sigma = ab();
    for i in 0..50 {
        let n = rng.gen_range(1..=8);
        let d = random_dfa(&mut rng, n, &sigma);
        let report = brute_force_count(&d, 10).map_err(|e| e.to_string())?;
        ensure(report.mismatches.is_empty(), || format!("trial {i}: {:?}", report.mismatches))?;
    }
    Ok("50 machines, enumeration equals counting series for n <= 10".into())
}

fn minimization_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let sigma = ab();
    for i in 0..200 {
        let n = rng.gen_range(1..=12);
        let d = random_dfa(&mut rng, n, &sigma);
        let fast = hopcroft_minimize(&d).map_err(|e| e.to_string())?;
        let naive = quotient_automaton(&d, &nerode_partition_naive(&d)).map_err(|e| e.to_string())?;
        ensure(fast.is_isomorphic(&naive).map_err(|e| e.to_string())?, || {
            format!("trial {i}: not isomorphic\n{}", format_dfa(&d))
        })?;
        ensure(check_minimality_condition_m(&fast).map_err(|e| e.to_string())?, || {
            format!("trial {i}: condition (M) fails")
        })?;
    }
    Ok("200 machines, Hopcroft isomorphic to naive refinement, (M) holds".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 example series", example_series, Duration::from_secs(1)),
        ("2 zero-test equivalence", theorem_equivalence, Duration::from_secs(30)),
        ("3 linear and minimizing paths", path_agreement, Duration::from_secs(30)),
        ("4 geometric decay", borges_decay, Duration::from_secs(1)),
        ("5 closure", closure_suite, Duration::from_secs(30)),
        ("6 factor counts", factor_counts, Duration::from_secs(10)),
        ("7 synchronizing words", sync_certificates, Duration::from_secs(5)),
        ("8 past as boolean combination", past_combination, Duration::from_secs(30)),
        ("9 enumeration oracle", oracle_agreement, Duration::from_secs(30)),
        ("10 minimization", minimization_correctness, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|detail| {
            if elapsed <= budget {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{elapsed:.2?}]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} [{elapsed:.2?}]: {detail}");
            }
        }
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
