//! Minimal regular-expression compiler.
//!
//! Supported syntax: literals, concatenation, `|`, `*`, parentheses and `.`
//! (any symbol of the alphabet). `\x` escapes a metacharacter. The pattern
//! goes through a Thompson NFA and the subset construction; the result is
//! completed with a dead state and trimmed.

use std::collections::{BTreeSet, HashMap};

use super::{Alphabet, Dfa, PartialDfa, SymbolId};
use crate::error::{Error, Result};

#[derive(Debug)]
enum Ast {
    Empty,
    Symbol(SymbolId),
    Any,
    Concat(Vec<Ast>),
    Alt(Vec<Ast>),
    Star(Box<Ast>),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Regex {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn alternation(&mut self) -> Result<Ast> {
        let mut branches = vec![self.concatenation()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            branches.push(self.concatenation()?);
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            Ast::Alt(branches)
        })
    }

    fn concatenation(&mut self) -> Result<Ast> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            items.push(self.repetition()?);
        }
        Ok(match items.len() {
            0 => Ast::Empty,
            1 => items.pop().unwrap(),
            _ => Ast::Concat(items),
        })
    }

    fn repetition(&mut self) -> Result<Ast> {
        let mut atom = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            atom = Ast::Star(Box::new(atom));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Ast> {
        let c = self.peek().ok_or_else(|| self.error("unexpected end of pattern"))?;
        match c {
            '(' => {
                self.pos += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            '.' => {
                self.pos += 1;
                Ok(Ast::Any)
            }
            '*' => Err(self.error("'*' without an operand")),
            '\\' => {
                self.pos += 1;
                let escaped = self
                    .peek()
                    .ok_or_else(|| self.error("dangling escape"))?;
                self.literal(escaped)
            }
            other => self.literal(other),
        }
    }

    fn literal(&mut self, c: char) -> Result<Ast> {
        let id = self
            .alphabet
            .index_of(c)
            .map_err(|_| self.error(format!("symbol '{c}' is not in the alphabet")))?;
        self.pos += 1;
        Ok(Ast::Symbol(id))
    }
}

#[derive(Clone, Copy)]
enum Label {
    Symbol(SymbolId),
    Any,
}

/// Thompson NFA with ε-edges and labelled edges.
#[derive(Default)]
struct Nfa {
    epsilon: Vec<Vec<usize>>,
    labelled: Vec<Vec<(Label, usize)>>,
}

impl Nfa {
    fn add_state(&mut self) -> usize {
        self.epsilon.push(Vec::new());
        self.labelled.push(Vec::new());
        self.epsilon.len() - 1
    }

    /// Returns the (entry, exit) pair of the fragment for `ast`.
    fn build(&mut self, ast: &Ast) -> (usize, usize) {
        match ast {
            Ast::Empty => {
                let s = self.add_state();
                (s, s)
            }
            Ast::Symbol(a) => self.edge(Label::Symbol(*a)),
            Ast::Any => self.edge(Label::Any),
            Ast::Concat(items) => {
                let (entry, mut exit) = self.build(&items[0]);
                for item in &items[1..] {
                    let (s, e) = self.build(item);
                    self.epsilon[exit].push(s);
                    exit = e;
                }
                (entry, exit)
            }
            Ast::Alt(branches) => {
                let entry = self.add_state();
                let exit = self.add_state();
                for branch in branches {
                    let (s, e) = self.build(branch);
                    self.epsilon[entry].push(s);
                    self.epsilon[e].push(exit);
                }
                (entry, exit)
            }
            Ast::Star(inner) => {
                let hub = self.add_state();
                let (s, e) = self.build(inner);
                self.epsilon[hub].push(s);
                self.epsilon[e].push(hub);
                (hub, hub)
            }
        }
    }

    fn edge(&mut self, label: Label) -> (usize, usize) {
        let s = self.add_state();
        let e = self.add_state();
        self.labelled[s].push((label, e));
        (s, e)
    }

    fn closure(&self, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut set = BTreeSet::new();
        let mut stack: Vec<usize> = seeds.into_iter().collect();
        while let Some(s) = stack.pop() {
            if set.insert(s) {
                stack.extend(self.epsilon[s].iter().copied());
            }
        }
        set
    }
}

/// Compiles `pattern` over `alphabet` to a complete, accessible DFA.
pub fn compile_regex(pattern: &str, alphabet: &Alphabet) -> Result<Dfa> {
    let mut parser = Parser {
        chars: pattern.chars().collect(),
        pos: 0,
        alphabet,
    };
    let ast = parser.alternation()?;
    if parser.pos != parser.chars.len() {
        return Err(parser.error("unbalanced ')'"));
    }

    let mut nfa = Nfa::default();
    let (entry, exit) = nfa.build(&ast);

    let k = alphabet.len();
    let start = nfa.closure([entry]);
    let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    ids.insert(start.clone(), 0);
    let mut subsets = vec![start];
    let mut edges: Vec<(usize, SymbolId, usize)> = Vec::new();
    let mut i = 0;
    while i < subsets.len() {
        for a in 0..k {
            let moved = subsets[i].iter().flat_map(|&s| {
                nfa.labelled[s].iter().filter_map(move |&(label, t)| match label {
                    Label::Symbol(b) if b == a => Some(t),
                    Label::Any => Some(t),
                    Label::Symbol(_) => None,
                })
            });
            let target = nfa.closure(moved.collect::<Vec<_>>());
            if target.is_empty() {
                continue;
            }
            let id = match ids.get(&target) {
                Some(&id) => id,
                None => {
                    ids.insert(target.clone(), subsets.len());
                    subsets.push(target);
                    subsets.len() - 1
                }
            };
            edges.push((i, a, id));
        }
        i += 1;
    }

    let finals = (0..subsets.len()).filter(|&s| subsets[s].contains(&exit));
    let mut partial = PartialDfa::new(alphabet.clone(), subsets.len(), 0, finals)?;
    for (from, a, to) in edges {
        partial.set(from, a, to)?;
    }
    Ok(partial.complete().trim_accessible())
}
