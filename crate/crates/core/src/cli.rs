//! Command-line front end.
//!
//! Exit codes: `is-zero-one` returns 0 for a zero-one language and 1
//! otherwise; `check` returns 1 when the exact tests disagree or the
//! enumeration contradicts the counting series. Usage, input and analysis
//! errors return 2.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::automaton::{compile_regex, format_dfa, parse_dfa, Alphabet, Dfa, StateId};
use crate::error::Error;
use crate::graph::scc_decompose;
use crate::minimization::hopcroft_minimize;
use crate::monoid::{find_zero, syntactic_monoid, DEFAULT_MONOID_CAP};
use crate::oracle::{cross_check, CrossCheckConfig};
use crate::probability::{counting_series, rational_to_f64, LimitClass, LimitConfig};
use crate::zero_one::{
    classify_via_minimization, classify_zero_one, synchronizing_word, Decision, ZeroOneVerdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "zolaw",
    version,
    about = "Zero-one law analysis for regular languages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Strongly connected components, sink components and the verdict
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        route: RouteArgs,
    },
    /// Print the minimal automaton
    Minimize {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decide whether the language is zero-one (exit 0) or not (exit 1)
    IsZeroOne {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        route: RouteArgs,
    },
    /// Synchronizing word of a zero automaton, or "none"
    SyncWord {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Minimize before searching
        #[arg(long)]
        via_minimization: bool,
    },
    /// Syntactic monoid order, zero element and its witness
    Monoid {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, default_value_t = DEFAULT_MONOID_CAP)]
        monoid_cap: usize,
        /// Emit every element as JSON
        #[arg(long)]
        dump: bool,
    },
    /// Exact counting and probability series (CSV by default)
    Series {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Longest word length [default: max(64, 8 × states)]
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Run every test and report their agreement
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long)]
        n_max: Option<usize>,
        /// Tolerance for the limit estimate, as p/q or a decimal [default: 1/64]
        #[arg(long, value_parser = parse_epsilon)]
        epsilon: Option<BigRational>,
        /// Tail length inspected by the limit estimate [default: 2 × states]
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_MONOID_CAP)]
        monoid_cap: usize,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Automaton file, or "-" for standard input
    #[arg(conflicts_with = "regex", required_unless_present = "regex")]
    file: Option<PathBuf>,
    /// Regular expression over --alphabet
    #[arg(long, requires = "alphabet")]
    regex: Option<String>,
    /// Symbols of the alphabet, e.g. "ab"
    #[arg(long, requires = "regex")]
    alphabet: Option<String>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Same as --format json
    #[arg(long, conflicts_with = "format")]
    json: bool,
}

impl OutputArgs {
    fn resolve(&self, default: Format) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format.unwrap_or(default)
        }
    }
}

#[derive(Args, Debug)]
struct RouteArgs {
    /// Also minimize and test for a zero automaton; both routes must agree
    #[arg(long)]
    via_minimization: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

/// Accepts `p/q` or a decimal such as `0.015`; the value must lie in (0, 1).
fn parse_epsilon(text: &str) -> Result<BigRational, String> {
    let value = parse_rational(text.trim()).ok_or_else(|| format!("not a rational: {text}"))?;
    if value <= BigRational::zero() || value >= BigRational::one() {
        return Err(format!("{text} is not strictly between 0 and 1"));
    }
    Ok(value)
}

fn parse_rational(text: &str) -> Option<BigRational> {
    if let Some((p, q)) = text.split_once('/') {
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p.trim().parse().ok()?, q));
    }
    let (whole, frac) = text.split_once('.').unwrap_or((text, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let whole: BigInt = if whole.is_empty() {
        BigInt::zero()
    } else {
        whole.parse().ok()?
    };
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let frac: BigInt = if frac.is_empty() {
        BigInt::zero()
    } else {
        frac.parse().ok()?
    };
    Some(BigRational::new(whole * &scale + frac, scale))
}

/// Failure reported on the error stream with exit code 2.
struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(format!("write failed: {e}"))
    }
}

type CliResult = Result<i32, Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let target: &mut dyn Write = if code == EXIT_OK { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure(message)) => {
            let _ = writeln!(err, "error: {message}");
            EXIT_ERROR
        }
    }
}

fn load(input: &InputArgs, err: &mut dyn Write) -> Result<Dfa, Failure> {
    let dfa = match (&input.file, &input.regex, &input.alphabet) {
        (Some(path), _, _) => {
            let text = if path.as_os_str() == "-" {
                std::io::read_to_string(std::io::stdin())
                    .map_err(|e| Failure(format!("cannot read standard input: {e}")))?
            } else {
                std::fs::read_to_string(path)
                    .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?
            };
            parse_dfa(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?
        }
        (None, Some(pattern), Some(symbols)) => {
            let alphabet = Alphabet::new(symbols.chars())?;
            compile_regex(pattern, &alphabet)?
        }
        _ => return Err(Failure("no input: give a file or --regex with --alphabet".into())),
    };
    if dfa.is_accessible() {
        return Ok(dfa);
    }
    let trimmed = dfa.trim_accessible();
    writeln!(
        err,
        "note: removed {} unreachable state(s)",
        dfa.state_count() - trimmed.state_count()
    )?;
    Ok(trimmed)
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Analyze {
            input,
            output,
            route,
        } => {
            let dfa = load(&input, err)?;
            analyze(&dfa, output.resolve(Format::Text), route.via_minimization, out)
        }
        Command::Minimize { input, output } => {
            let dfa = load(&input, err)?;
            let minimal = hopcroft_minimize(&dfa)?;
            match output.resolve(Format::Text) {
                Format::Json => print_json(
                    out,
                    &json!({
                        "states": minimal.state_count(),
                        "input_states": dfa.state_count(),
                        "dfa": format_dfa(&minimal),
                    }),
                )?,
                _ => write!(out, "{}", format_dfa(&minimal))?,
            }
            Ok(EXIT_OK)
        }
        Command::IsZeroOne {
            input,
            output,
            route,
        } => {
            let dfa = load(&input, err)?;
            let verdict = decide(&dfa, route.via_minimization)?;
            match output.resolve(Format::Text) {
                Format::Json => print_json(out, &verdict.to_json(dfa.alphabet()))?,
                _ => writeln!(out, "{}", decision_text(verdict.decision))?,
            }
            Ok(if verdict.decision.is_zero_one() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::SyncWord {
            input,
            output,
            via_minimization,
        } => {
            let mut dfa = load(&input, err)?;
            if via_minimization {
                dfa = hopcroft_minimize(&dfa)?;
            }
            sync_word(&dfa, output.resolve(Format::Text), out)
        }
        Command::Monoid {
            input,
            output,
            monoid_cap,
            dump,
        } => {
            let dfa = load(&input, err)?;
            monoid(&dfa, output.resolve(Format::Text), monoid_cap, dump, out)
        }
        Command::Series {
            input,
            output,
            n_max,
        } => {
            let dfa = load(&input, err)?;
            let n_max = n_max.unwrap_or(LimitConfig::for_state_count(dfa.state_count()).n_max);
            let series = counting_series(&dfa, n_max);
            match output.resolve(Format::Csv) {
                Format::Csv => write!(out, "{}", series.to_csv())?,
                Format::Json => print_json(out, &series.to_json())?,
                Format::Text => {
                    writeln!(out, "{:>4}  {:>24}  {:>24}  mu (approx.)", "n", "gamma", "mu")?;
                    for e in &series.entries {
                        writeln!(
                            out,
                            "{:>4}  {:>24}  {:>24}  {}",
                            e.n,
                            e.gamma,
                            e.mu,
                            rational_to_f64(&e.mu)
                        )?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Command::Check {
            input,
            output,
            n_max,
            epsilon,
            window,
            monoid_cap,
        } => {
            let dfa = load(&input, err)?;
            let mut config = CrossCheckConfig::for_dfa(&dfa);
            config.monoid_cap = monoid_cap;
            if let Some(n) = n_max {
                config.limit.n_max = n;
            }
            if let Some(e) = epsilon {
                config.limit.epsilon = e;
            }
            if let Some(w) = window {
                config.limit.window = w;
            }
            check(&dfa, &config, output.resolve(Format::Text), out)
        }
    }
}

fn print_json(out: &mut dyn Write, value: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("JSON values serialize"))
}

fn decision_text(decision: Decision) -> &'static str {
    match decision {
        Decision::Zero => "zero",
        Decision::One => "one",
        Decision::NotZeroOne => "not zero-one",
    }
}

fn decide(dfa: &Dfa, via_minimization: bool) -> Result<ZeroOneVerdict, Failure> {
    let direct = classify_zero_one(dfa)?;
    if !via_minimization {
        return Ok(direct);
    }
    let minimized = classify_via_minimization(dfa)?;
    if minimized.decision != direct.decision {
        return Err(Failure(format!(
            "routes disagree: quasi-zero test says {}, minimal automaton says {}",
            direct.decision.as_str(),
            minimized.decision.as_str()
        )));
    }
    Ok(minimized)
}

fn state_set(dfa: &Dfa, states: &[StateId]) -> String {
    let names: Vec<_> = states.iter().map(|&q| dfa.state_name(q)).collect();
    format!("{{{}}}", names.join(", "))
}

fn named_sets(dfa: &Dfa, sets: &[Vec<StateId>]) -> Value {
    sets.iter()
        .map(|c| c.iter().map(|&q| dfa.state_name(q).into_owned()).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn analyze(dfa: &Dfa, format: Format, via_minimization: bool, out: &mut dyn Write) -> CliResult {
    let scc = scc_decompose(dfa);
    let verdict = decide(dfa, via_minimization)?;
    let sinks: Vec<Vec<StateId>> = scc.sink_components().into_iter().map(<[_]>::to_vec).collect();
    if format == Format::Json {
        print_json(
            out,
            &json!({
                "states": dfa.state_count(),
                "alphabet": dfa.alphabet().symbols().iter().collect::<String>(),
                "components": named_sets(dfa, scc.components()),
                "sink_components": named_sets(dfa, &sinks),
                "verdict": verdict.to_json(dfa.alphabet()),
            }),
        )?;
        return Ok(EXIT_OK);
    }
    let alphabet: String = dfa.alphabet().symbols().iter().collect();
    writeln!(out, "states: {}", dfa.state_count())?;
    writeln!(out, "alphabet: {alphabet}")?;
    writeln!(out, "components: {}", scc.component_count())?;
    for c in scc.components() {
        writeln!(out, "  {}", state_set(dfa, c))?;
    }
    writeln!(out, "sink components: {}", sinks.len())?;
    for c in &sinks {
        let finality = if c.iter().all(|&q| dfa.is_final(q)) {
            "final"
        } else if c.iter().all(|&q| !dfa.is_final(q)) {
            "non-final"
        } else {
            "mixed"
        };
        writeln!(out, "  {} {finality}", state_set(dfa, c))?;
    }
    writeln!(out, "decision: {}", decision_text(verdict.decision))?;
    writeln!(out, "route: {}", verdict.route.as_str())?;
    if let Some(w) = &verdict.sync_word {
        writeln!(out, "sync word of minimal automaton: {}", show_word(dfa.alphabet(), w))?;
    }
    Ok(EXIT_OK)
}

fn show_word(alphabet: &Alphabet, word: &crate::automaton::Word) -> String {
    if word.is_empty() {
        "ε".to_string()
    } else {
        alphabet.render(word)
    }
}

fn sync_word(dfa: &Dfa, format: Format, out: &mut dyn Write) -> CliResult {
    let certificate = synchronizing_word(dfa)?;
    if format == Format::Json {
        let value = match &certificate {
            Some(c) => json!({
                "word": dfa.alphabet().render(&c.word),
                "length": c.word.len(),
                "target": dfa.state_name(c.target),
                "verified": c.per_state_check,
            }),
            None => json!({ "word": null }),
        };
        print_json(out, &value)?;
        return Ok(EXIT_OK);
    }
    match certificate {
        Some(c) => {
            writeln!(out, "{}", show_word(dfa.alphabet(), &c.word))?;
            writeln!(out, "length: {}", c.word.len())?;
            writeln!(out, "target: {}", dfa.state_name(c.target))?;
            writeln!(out, "verified from every state: {}", yes_no(c.per_state_check))?;
        }
        None => writeln!(out, "none")?,
    }
    Ok(EXIT_OK)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn monoid(dfa: &Dfa, format: Format, cap: usize, dump: bool, out: &mut dyn Write) -> CliResult {
    let m = syntactic_monoid(dfa, cap)?;
    let zero = find_zero(&m);
    let alphabet = dfa.alphabet();
    if dump || format == Format::Json {
        let mut value = json!({
            "order": m.order(),
            "states": m.state_count(),
            "zero": zero.as_ref().map(|(i, _)| i),
            "w0": zero.as_ref().map(|(_, w)| alphabet.render(w)),
        });
        if dump {
            value["elements"] = m
                .elements()
                .iter()
                .enumerate()
                .map(|(i, e)| json!({ "images": e.images(), "witness": alphabet.render(m.witness(i)) }))
                .collect::<Vec<_>>()
                .into();
        }
        print_json(out, &value)?;
        return Ok(EXIT_OK);
    }
    writeln!(out, "order: {}", m.order())?;
    match zero {
        Some((_, w)) => {
            writeln!(out, "zero: yes")?;
            writeln!(out, "w0: {}", show_word(alphabet, &w))?;
        }
        None => writeln!(out, "zero: no")?,
    }
    Ok(EXIT_OK)
}

fn check(dfa: &Dfa, config: &CrossCheckConfig, format: Format, out: &mut dyn Write) -> CliResult {
    let report = cross_check(dfa, config)?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    };
    if format == Format::Json {
        let mut value = report.to_json(dfa);
        value["passed"] = report.passed().into();
        print_json(out, &value)?;
        return Ok(code);
    }
    let alphabet = dfa.alphabet();
    writeln!(out, "minimal automaton is zero: {}", yes_no(report.minimal_is_zero))?;
    match &report.monoid_zero {
        Some(w) => writeln!(
            out,
            "syntactic monoid has a zero: yes (order {}, w0 = {})",
            report.monoid_order,
            show_word(alphabet, w)
        )?,
        None => writeln!(
            out,
            "syntactic monoid has a zero: no (order {})",
            report.monoid_order
        )?,
    }
    writeln!(out, "quasi-zero: {}", yes_no(report.quasi_zero))?;
    let limit = &report.limit;
    let band = match &limit.classification {
        LimitClass::ConvergesToOther { low, high } => format!(" in [{low}, {high}]"),
        _ => String::new(),
    };
    writeln!(
        out,
        "limit estimate (heuristic): {}{band} over n = {}..{}, epsilon = {}",
        limit.classification.as_str(),
        limit.evidence.first_n,
        limit.evidence.last_n,
        limit.epsilon
    )?;
    writeln!(out, "series consistency: {}", report.series_consistency.as_str())?;
    writeln!(
        out,
        "enumeration up to n = {}: {} mismatch(es)",
        report.enumeration.n_max,
        report.enumeration.mismatches.len()
    )?;
    writeln!(out, "exact tests agree: {}", yes_no(report.structural_agreement()))?;
    writeln!(out, "decision: {}", decision_text(report.verdict.decision))?;
    Ok(code)
}
