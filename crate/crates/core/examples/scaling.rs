//! Timing of the linear zero-one test on random machines from 10^3 to 10^6
//! states. Run with `cargo run --release --example scaling`.
//!
//! The report is informational: each size is timed once after a warm-up and
//! the time per transition should stay roughly flat as the size grows.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zolaw::random::random_dfa;
use zolaw::zero_one::{classify_zero_one, classify_via_minimization};
use zolaw::Alphabet;

fn main() {
    let sigma = Alphabet::new(['a', 'b']).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let with_minimization = std::env::args().any(|a| a == "--with-minimization");
    println!("{:>9} {:>12} {:>14} {:>10}  decision", "states", "quasi-zero", "ns/transition", "minimize");
    for exp in 3..=6 {
        let n = 10usize.pow(exp);
        let d = random_dfa(&mut rng, n, &sigma);
        classify_zero_one(&d).unwrap();
        let start = Instant::now();
        let verdict = classify_zero_one(&d).unwrap();
        let elapsed = start.elapsed();
        let per = elapsed.as_nanos() as f64 / (d.state_count() * sigma.len()) as f64;
        let minimize = if with_minimization {
            let start = Instant::now();
            let via = classify_via_minimization(&d).unwrap();
            assert_eq!(via.decision, verdict.decision);
            format!("{:.2?}", start.elapsed())
        } else {
            "-".to_string()
        };
        println!(
            "{:>9} {:>12.2?} {:>14.1} {:>10}  {}",
            d.state_count(),
            elapsed,
            per,
            minimize,
            verdict.decision.as_str()
        );
    }
}
