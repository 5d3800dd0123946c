//! Line-based text format for automata.
//!
//! ```text
//! @partial            # optional: missing transitions go to a dead state
//! alphabet: a b
//! states: q0 q1 q2
//! initial: q0
//! finals: q2
//! q0 a q1
//! ```
//!
//! One transition per line, `<state> <symbol> <state>`; `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Alphabet, Dfa, PartialDfa};
use crate::error::{Error, Result};

struct Header<T> {
    value: T,
    line: usize,
}

struct RawTransition<'a> {
    line: usize,
    from: &'a str,
    symbol: &'a str,
    to: &'a str,
}

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn set_once<T>(slot: &mut Option<Header<T>>, value: T, line: usize, key: &str) -> Result<()> {
    if let Some(previous) = slot {
        return Err(syntax(
            line,
            format!("duplicate '{key}:' header (first given on line {})", previous.line),
        ));
    }
    *slot = Some(Header { value, line });
    Ok(())
}

const HEADERS: [&str; 4] = ["alphabet", "states", "initial", "finals"];

pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut partial = false;
    let mut alphabet: Option<Header<Vec<&str>>> = None;
    let mut states: Option<Header<Vec<&str>>> = None;
    let mut initial: Option<Header<&str>> = None;
    let mut finals: Option<Header<Vec<&str>>> = None;
    let mut transitions = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(directive) = content.strip_prefix('@') {
            match directive {
                "partial" => partial = true,
                other => return Err(syntax(line, format!("unknown directive '@{other}'"))),
            }
            continue;
        }
        let header = content
            .split_once(':')
            .filter(|(key, _)| HEADERS.contains(&key.trim()));
        if let Some((key, rest)) = header {
            let values: Vec<&str> = rest.split_whitespace().collect();
            match key.trim() {
                "alphabet" => set_once(&mut alphabet, values, line, "alphabet")?,
                "states" => set_once(&mut states, values, line, "states")?,
                "finals" => set_once(&mut finals, values, line, "finals")?,
                "initial" => match values.as_slice() {
                    [single] => set_once(&mut initial, *single, line, "initial")?,
                    _ => return Err(syntax(line, "'initial:' takes exactly one state")),
                },
                _ => unreachable!("filtered above"),
            }
            continue;
        }
        match content.split_whitespace().collect::<Vec<_>>().as_slice() {
            [from, symbol, to] => transitions.push(RawTransition {
                line,
                from,
                symbol,
                to,
            }),
            _ => match content.split_once(':') {
                Some((key, _)) => {
                    return Err(syntax(line, format!("unknown header '{}:'", key.trim())))
                }
                None => {
                    return Err(syntax(
                        line,
                        "expected a header or a transition '<state> <symbol> <state>'",
                    ))
                }
            },
        }
    }

    let eof = last_line + 1;
    let alphabet = alphabet.ok_or_else(|| syntax(eof, "missing 'alphabet:' header"))?;
    let states = states.ok_or_else(|| syntax(eof, "missing 'states:' header"))?;
    let initial = initial.ok_or_else(|| syntax(eof, "missing 'initial:' header"))?;

    let mut symbols = Vec::with_capacity(alphabet.value.len());
    for token in &alphabet.value {
        let mut chars = token.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => symbols.push(c),
            _ => {
                return Err(syntax(
                    alphabet.line,
                    format!("symbol '{token}' must be a single character"),
                ))
            }
        }
    }
    let sigma = Alphabet::new(symbols).map_err(|e| syntax(alphabet.line, e.to_string()))?;

    if states.value.is_empty() {
        return Err(syntax(states.line, "at least one state is required"));
    }
    let mut state_ids: HashMap<&str, usize> = HashMap::new();
    for (i, name) in states.value.iter().enumerate() {
        if state_ids.insert(name, i).is_some() {
            return Err(syntax(states.line, format!("duplicate state '{name}'")));
        }
    }
    let lookup = |name: &str, line: usize| {
        state_ids
            .get(name)
            .copied()
            .ok_or_else(|| syntax(line, format!("unknown state '{name}'")))
    };

    let initial_id = lookup(initial.value, initial.line)?;
    let mut final_ids = Vec::new();
    if let Some(finals) = &finals {
        for name in &finals.value {
            final_ids.push(lookup(name, finals.line)?);
        }
    }

    let names: Vec<String> = states.value.iter().map(|s| s.to_string()).collect();
    let mut table = PartialDfa::new(sigma.clone(), names.len(), initial_id, final_ids)?
        .with_state_names(names.clone())?;
    for t in &transitions {
        let from = lookup(t.from, t.line)?;
        let to = lookup(t.to, t.line)?;
        let mut chars = t.symbol.chars();
        let symbol = match (chars.next(), chars.next()) {
            (Some(c), None) => sigma
                .index_of(c)
                .map_err(|_| syntax(t.line, format!("unknown symbol '{c}'")))?,
            _ => {
                return Err(syntax(
                    t.line,
                    format!("symbol '{}' must be a single character", t.symbol),
                ))
            }
        };
        if table.set(from, symbol, to)?.is_some() {
            return Err(syntax(
                t.line,
                format!("duplicate transition for ({}, {})", t.from, t.symbol),
            ));
        }
    }

    if !partial {
        if let Some((state, symbol)) = table.first_missing() {
            return Err(Error::Incomplete {
                state: names[state].clone(),
                symbol: sigma.symbol(symbol),
            });
        }
    }
    Ok(table.complete())
}

/// Serializes headers then transitions sorted by (state, symbol).
pub fn format_dfa(dfa: &Dfa) -> String {
    let sigma = dfa.alphabet();
    let names: Vec<_> = (0..dfa.state_count()).map(|q| dfa.state_name(q)).collect();
    let join = |items: &mut dyn Iterator<Item = String>| items.collect::<Vec<_>>().join(" ");

    let mut out = String::new();
    let _ = writeln!(
        out,
        "alphabet: {}",
        join(&mut sigma.symbols().iter().map(|c| c.to_string()))
    );
    let _ = writeln!(
        out,
        "states: {}",
        join(&mut names.iter().map(|n| n.to_string()))
    );
    let _ = writeln!(out, "initial: {}", names[dfa.initial()]);
    let finals = join(&mut dfa.finals().map(|q| names[q].to_string()));
    if finals.is_empty() {
        out.push_str("finals:\n");
    } else {
        let _ = writeln!(out, "finals: {finals}");
    }
    for q in 0..dfa.state_count() {
        for (a, &r) in dfa.row(q).iter().enumerate() {
            let _ = writeln!(out, "{} {} {}", names[q], sigma.symbol(a), names[r]);
        }
    }
    out
}
