//! Line-oriented machine source format.
//!
//! ```text
//! # comment
//! states: A B H
//! alphabet: _ 1
//! start: A
//! input: 1 1 _ 1        (optional, head starts on the first cell)
//! A _ -> B 1 R
//! ```

use std::fmt;

use super::{build_machine, Id, Machine, MachineError, Move, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed machine file: the machine plus its default input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineDef {
    pub machine: Machine,
    pub input: Vec<Symbol>,
}

impl MachineDef {
    pub fn initial_id(&self) -> Id {
        self.machine.initial_id(&self.input)
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(s: &str, offset: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in s.char_indices() {
        if ch.is_whitespace() {
            if let Some(b) = start.take() {
                out.push(Token {
                    text: &s[b..i],
                    column: offset + b + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(b) = start {
        out.push(Token {
            text: &s[b..],
            column: offset + b + 1,
        });
    }
    out
}

struct Rule<'a> {
    line: usize,
    parts: [Token<'a>; 5],
}

pub fn parse_machine(src: &str) -> Result<MachineDef, ParseError> {
    let err = |line: usize, column: usize, message: String| ParseError {
        line,
        column,
        message,
    };

    let mut states: Option<(usize, Vec<String>)> = None;
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut start: Option<(usize, usize, String)> = None;
    let mut input: Vec<Token<'_>> = Vec::new();
    let mut input_line = 0;
    let mut rules: Vec<Rule<'_>> = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let line_no = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        if let Some(arrow) = body.find("->") {
            let lhs = tokens(&body[..arrow], 0);
            let rhs = tokens(&body[arrow + 2..], arrow + 2);
            if lhs.len() != 2 {
                return Err(err(
                    line_no,
                    1,
                    "expected `state symbol` before `->`".into(),
                ));
            }
            if rhs.len() != 3 {
                return Err(err(
                    line_no,
                    arrow + 3,
                    "expected `state symbol L|R` after `->`".into(),
                ));
            }
            let mut it = lhs.into_iter().chain(rhs);
            let parts = [(); 5].map(|_| it.next().expect("five tokens"));
            rules.push(Rule {
                line: line_no,
                parts,
            });
            continue;
        }
        let Some(colon) = body.find(':') else {
            let col = body.len() - body.trim_start().len() + 1;
            return Err(err(
                line_no,
                col,
                "expected a `key:` header or a `->` transition".into(),
            ));
        };
        let key = body[..colon].trim();
        let values = tokens(&body[colon + 1..], colon + 1);
        let key_col = body.len() - body.trim_start().len() + 1;
        let names = || values.iter().map(|t| t.text.to_owned()).collect::<Vec<_>>();
        match key {
            "states" => states = Some((line_no, names())),
            "alphabet" => alphabet = Some((line_no, names())),
            "start" => {
                let [only] = values.as_slice() else {
                    return Err(err(
                        line_no,
                        colon + 2,
                        "`start:` takes exactly one state".into(),
                    ));
                };
                start = Some((line_no, only.column, only.text.to_owned()));
            }
            "input" => {
                input_line = line_no;
                input = values;
            }
            other => {
                return Err(err(line_no, key_col, format!("unknown header `{other}`")));
            }
        }
    }

    let (states_line, states) =
        states.ok_or_else(|| err(1, 1, "missing `states:` header".into()))?;
    let (alphabet_line, alphabet) =
        alphabet.ok_or_else(|| err(1, 1, "missing `alphabet:` header".into()))?;
    let (start_line, start_col, start) =
        start.ok_or_else(|| err(1, 1, "missing `start:` header".into()))?;

    for rule in &rules {
        for (i, tok) in rule.parts.iter().enumerate() {
            let known = match i {
                0 | 2 => states.iter().any(|s| s == tok.text),
                1 | 3 => alphabet.iter().any(|s| s == tok.text),
                _ => matches!(tok.text, "L" | "R"),
            };
            if !known {
                let what = match i {
                    0 | 2 => "state",
                    1 | 3 => "symbol",
                    _ => "move (expected L or R)",
                };
                return Err(err(
                    rule.line,
                    tok.column,
                    format!("unknown {what} `{}`", tok.text),
                ));
            }
        }
    }

    let moves = |t: &str| if t == "L" { Move::Left } else { Move::Right };
    let machine = build_machine(
        &states,
        &alphabet,
        &start,
        rules.iter().map(|r| {
            (
                r.parts[0].text,
                r.parts[1].text,
                r.parts[2].text,
                r.parts[3].text,
                moves(r.parts[4].text),
            )
        }),
    )
    .map_err(|e| {
        let (line, column) = match &e {
            MachineError::NoStates | MachineError::DuplicateState(_) => (states_line, 1),
            MachineError::MissingBlank | MachineError::DuplicateSymbol(_) => (alphabet_line, 1),
            MachineError::UnknownStateName(s) if *s == start => (start_line, start_col),
            MachineError::DuplicateTransition { state, symbol } => rules
                .iter()
                .filter(|r| r.parts[0].text == state && r.parts[1].text == symbol)
                .nth(1)
                .map_or((1, 1), |r| (r.line, 1)),
            _ => (1, 1),
        };
        err(line, column, e.to_string())
    })?;

    let input = input
        .iter()
        .map(|t| {
            machine
                .symbol_by_name(t.text)
                .ok_or_else(|| err(input_line, t.column, format!("unknown symbol `{}`", t.text)))
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(MachineDef { machine, input })
}

/// Reads an input tape written as symbol names separated by spaces or
/// commas. A single word that is not itself a symbol is read one character
/// per cell, so `111` works for one-character alphabets.
pub fn parse_input(machine: &Machine, spec: &str) -> Result<Vec<Symbol>, MachineError> {
    let words: Vec<&str> = spec
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|w| !w.is_empty())
        .collect();
    let lookup = |w: &str| {
        machine
            .symbol_by_name(w)
            .ok_or_else(|| MachineError::UnknownSymbolName(w.to_owned()))
    };
    match words.as_slice() {
        [word] if machine.symbol_by_name(word).is_none() => {
            word.chars().map(|c| lookup(&c.to_string())).collect()
        }
        _ => words.into_iter().map(lookup).collect(),
    }
}
