//! Deterministic single-tape Turing machines with loop detection.
//!
//! A machine halts when no transition applies to the current (state, symbol)
//! pair. Execution records every instantaneous description it visits, up to
//! translation of the tape, and stops as soon as one of them repeats.

mod parse;
mod table;

use std::borrow::Borrow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

pub use parse::{parse_input, parse_machine, MachineDef, ParseError};
pub use table::{count_ones, unary_input, unary_table_machine, TableEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// Index into a machine's alphabet. Symbol 0 is always the blank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub const BLANK: Symbol = Symbol(0);

    pub fn is_blank(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
}

impl Move {
    fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Right => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: StateId,
    pub write: Symbol,
    pub movement: Move,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("machine has no states")]
    NoStates,
    #[error("alphabet must contain the blank symbol `_`")]
    MissingBlank,
    #[error("duplicate state name `{0}`")]
    DuplicateState(String),
    #[error("duplicate symbol name `{0}`")]
    DuplicateSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownStateName(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbolName(String),
    #[error("state index {0} out of range")]
    UnknownState(u32),
    #[error("symbol index {0} out of range")]
    UnknownSymbol(u32),
    #[error("more than one transition for state `{state}` on symbol `{symbol}`")]
    DuplicateTransition { state: String, symbol: String },
    #[error("malformed instantaneous description: {0}")]
    MalformedId(String),
}

/// A deterministic Turing machine over a finite alphabet.
///
/// Transitions are stored densely, indexed by `state * |alphabet| + symbol`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Machine {
    state_names: Vec<String>,
    symbol_names: Vec<String>,
    table: Vec<Option<Transition>>,
    start: StateId,
}

impl Machine {
    pub fn states(&self) -> usize {
        self.state_names.len()
    }

    pub fn symbols(&self) -> usize {
        self.symbol_names.len()
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.state_names[state.0 as usize]
    }

    pub fn symbol_name(&self, symbol: Symbol) -> &str {
        &self.symbol_names[symbol.0 as usize]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
    }

    pub fn symbol_by_name(&self, name: &str) -> Option<Symbol> {
        self.symbol_names
            .iter()
            .position(|n| n == name)
            .map(|i| Symbol(i as u32))
    }

    pub fn transition(&self, state: StateId, symbol: Symbol) -> Option<&Transition> {
        self.table
            .get(state.0 as usize * self.symbols() + symbol.0 as usize)
            .and_then(Option::as_ref)
    }

    /// All defined transitions in (state, symbol) order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Symbol, &Transition)> + '_ {
        let width = self.symbols();
        self.table.iter().enumerate().filter_map(move |(i, t)| {
            t.as_ref()
                .map(|t| (StateId((i / width) as u32), Symbol((i % width) as u32), t))
        })
    }

    /// The start configuration on the given input, head on the first input cell.
    pub fn initial_id(&self, input: &[Symbol]) -> Id {
        Id::with_input(self.start, input)
    }

    fn check(&self, id: &Id) -> Result<Symbol, MachineError> {
        if id.state.0 as usize >= self.states() {
            return Err(MachineError::MalformedId(format!(
                "state index {} not in machine",
                id.state.0
            )));
        }
        let symbol = id.read(id.head);
        if symbol.0 as usize >= self.symbols() {
            return Err(MachineError::MalformedId(format!(
                "symbol index {} under head not in alphabet",
                symbol.0
            )));
        }
        Ok(symbol)
    }

    /// Whether no transition applies to `id`.
    pub fn is_halted(&self, id: &Id) -> Result<bool, MachineError> {
        let symbol = self.check(id)?;
        Ok(self.transition(id.state, symbol).is_none())
    }

    /// Applies one transition in place. Returns `false` (leaving `id`
    /// untouched) when the configuration is halted.
    pub fn step_in_place(&self, id: &mut Id) -> Result<bool, MachineError> {
        let symbol = self.check(id)?;
        let Some(t) = self.transition(id.state, symbol).copied() else {
            return Ok(false);
        };
        id.write(id.head, t.write);
        id.head += t.movement.delta();
        id.state = t.next;
        Ok(true)
    }

    /// Renders the machine back into the line-oriented source format.
    pub fn to_source(&self, input: &[Symbol]) -> String {
        let mut out = String::new();
        out.push_str("states: ");
        out.push_str(&self.state_names.join(" "));
        out.push_str("\nalphabet: ");
        out.push_str(&self.symbol_names.join(" "));
        out.push_str("\nstart: ");
        out.push_str(self.state_name(self.start));
        out.push('\n');
        if !input.is_empty() {
            let names: Vec<&str> = input.iter().map(|s| self.symbol_name(*s)).collect();
            out.push_str("input: ");
            out.push_str(&names.join(" "));
            out.push('\n');
        }
        for (state, symbol, t) in self.transitions() {
            let dir = match t.movement {
                Move::Left => 'L',
                Move::Right => 'R',
            };
            out.push_str(&format!(
                "{} {} -> {} {} {}\n",
                self.state_name(state),
                self.symbol_name(symbol),
                self.state_name(t.next),
                self.symbol_name(t.write),
                dir
            ));
        }
        out
    }
}

/// Incremental construction of a [`Machine`] by name.
#[derive(Clone, Debug, Default)]
pub struct MachineBuilder {
    states: Vec<String>,
    symbols: Vec<String>,
    rules: Vec<(String, String, String, String, Move)>,
    start: Option<String>,
}

impl MachineBuilder {
    /// A builder whose alphabet already holds the blank `_`.
    pub fn new() -> Self {
        Self {
            symbols: vec!["_".to_owned()],
            ..Self::default()
        }
    }

    pub fn state(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        if !self.states.contains(&name) {
            self.states.push(name);
        }
        self
    }

    pub fn symbol(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        if !self.symbols.contains(&name) {
            self.symbols.push(name);
        }
        self
    }

    pub fn start(&mut self, name: impl Into<String>) -> &mut Self {
        let name = name.into();
        self.state(name.clone());
        self.start = Some(name);
        self
    }

    pub fn rule(
        &mut self,
        state: &str,
        read: &str,
        next: &str,
        write: &str,
        movement: Move,
    ) -> &mut Self {
        self.state(state).state(next).symbol(read).symbol(write);
        self.rules.push((
            state.to_owned(),
            read.to_owned(),
            next.to_owned(),
            write.to_owned(),
            movement,
        ));
        self
    }

    pub fn build(&self) -> Result<Machine, MachineError> {
        let start = self
            .start
            .clone()
            .or_else(|| self.states.first().cloned())
            .ok_or(MachineError::NoStates)?;
        let rules = self
            .rules
            .iter()
            .map(|(s, r, n, w, m)| (s.as_str(), r.as_str(), n.as_str(), w.as_str(), *m));
        build_machine(&self.states, &self.symbols, &start, rules)
    }
}

/// Validates names and transitions and assembles the dense table.
///
/// The blank `_` must appear in `symbols`; it is moved to index 0.
pub(crate) fn build_machine<'a>(
    states: &[String],
    symbols: &[String],
    start: &str,
    rules: impl IntoIterator<Item = (&'a str, &'a str, &'a str, &'a str, Move)>,
) -> Result<Machine, MachineError> {
    if states.is_empty() {
        return Err(MachineError::NoStates);
    }
    for (i, s) in states.iter().enumerate() {
        if states[..i].contains(s) {
            return Err(MachineError::DuplicateState(s.clone()));
        }
    }
    for (i, s) in symbols.iter().enumerate() {
        if symbols[..i].contains(s) {
            return Err(MachineError::DuplicateSymbol(s.clone()));
        }
    }
    let mut symbol_names = Vec::with_capacity(symbols.len());
    symbol_names.push("_".to_owned());
    if !symbols.iter().any(|s| s == "_") {
        return Err(MachineError::MissingBlank);
    }
    symbol_names.extend(symbols.iter().filter(|s| *s != "_").cloned());

    let mut machine = Machine {
        state_names: states.to_vec(),
        symbol_names,
        table: vec![None; states.len() * symbols.len()],
        start: StateId(0),
    };
    machine.start = machine
        .state_by_name(start)
        .ok_or_else(|| MachineError::UnknownStateName(start.to_owned()))?;

    let width = machine.symbols();
    for (state, read, next, write, movement) in rules {
        let s = machine
            .state_by_name(state)
            .ok_or_else(|| MachineError::UnknownStateName(state.to_owned()))?;
        let r = machine
            .symbol_by_name(read)
            .ok_or_else(|| MachineError::UnknownSymbolName(read.to_owned()))?;
        let n = machine
            .state_by_name(next)
            .ok_or_else(|| MachineError::UnknownStateName(next.to_owned()))?;
        let w = machine
            .symbol_by_name(write)
            .ok_or_else(|| MachineError::UnknownSymbolName(write.to_owned()))?;
        let slot = &mut machine.table[s.0 as usize * width + r.0 as usize];
        if slot.is_some() {
            return Err(MachineError::DuplicateTransition {
                state: state.to_owned(),
                symbol: read.to_owned(),
            });
        }
        *slot = Some(Transition {
            next: n,
            write: w,
            movement,
        });
    }
    Ok(machine)
}

/// Instantaneous description: state, head position and a finite-support tape.
///
/// The tape never stores blanks, so two descriptions of the same
/// configuration are structurally equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Id {
    pub state: StateId,
    pub head: i64,
    tape: BTreeMap<i64, Symbol>,
}

impl Id {
    pub fn blank(state: StateId) -> Self {
        Self {
            state,
            head: 0,
            tape: BTreeMap::new(),
        }
    }

    pub fn with_input(state: StateId, input: &[Symbol]) -> Self {
        let mut id = Self::blank(state);
        for (i, s) in input.iter().enumerate() {
            id.write(i as i64, *s);
        }
        id
    }

    pub fn read(&self, cell: i64) -> Symbol {
        self.tape.get(&cell).copied().unwrap_or(Symbol::BLANK)
    }

    pub fn write(&mut self, cell: i64, symbol: Symbol) {
        if symbol.is_blank() {
            self.tape.remove(&cell);
        } else {
            self.tape.insert(cell, symbol);
        }
    }

    /// Non-blank cells in increasing order.
    pub fn cells(&self) -> impl Iterator<Item = (i64, Symbol)> + '_ {
        self.tape.iter().map(|(c, s)| (*c, *s))
    }

    pub fn leftmost(&self) -> Option<i64> {
        self.tape.keys().next().copied()
    }

    pub fn rightmost(&self) -> Option<i64> {
        self.tape.keys().next_back().copied()
    }

    pub fn count(&self, symbol: Symbol) -> usize {
        self.tape.values().filter(|s| **s == symbol).count()
    }

    /// Shifts the whole configuration (tape and head) by `offset` cells.
    pub fn translate(&self, offset: i64) -> Id {
        Id {
            state: self.state,
            head: self.head + offset,
            tape: self.tape.iter().map(|(c, s)| (c + offset, *s)).collect(),
        }
    }

    /// One-line picture of the configuration, head cell bracketed.
    pub fn render(&self, machine: &Machine) -> String {
        let lo = self.leftmost().map_or(self.head, |l| l.min(self.head));
        let hi = self.rightmost().map_or(self.head, |r| r.max(self.head));
        let mut cells = Vec::with_capacity((hi - lo + 1) as usize);
        for cell in lo..=hi {
            let name = machine
                .symbol_names
                .get(self.read(cell).0 as usize)
                .map_or("?", String::as_str);
            if cell == self.head {
                cells.push(format!("[{name}]"));
            } else {
                cells.push(name.to_owned());
            }
        }
        let state = machine
            .state_names
            .get(self.state.0 as usize)
            .map_or("?", String::as_str);
        format!("{state} @{}: {}", self.head, cells.join(" "))
    }
}

/// An [`Id`] in translation-normal form: the leftmost non-blank cell, or
/// the head when the tape is blank, sits at index 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalId(Id);

impl CanonicalId {
    pub fn as_id(&self) -> &Id {
        &self.0
    }

    pub fn into_id(self) -> Id {
        self.0
    }

    /// Stable, self-delimiting byte key; injective on canonical IDs.
    pub fn encode(&self) -> Vec<u8> {
        encode_id(self)
    }
}

pub fn canonicalize(id: &Id) -> CanonicalId {
    let anchor = id.leftmost().unwrap_or(id.head);
    if anchor == 0 {
        CanonicalId(id.clone())
    } else {
        CanonicalId(id.translate(-anchor))
    }
}

fn put_varint(out: &mut Vec<u8>, mut v: u64) {
    loop {
        let byte = (v & 0x7f) as u8;
        v >>= 7;
        if v == 0 {
            out.push(byte);
            return;
        }
        out.push(byte | 0x80);
    }
}

fn zigzag(v: i64) -> u64 {
    ((v << 1) ^ (v >> 63)) as u64
}

/// Serializes a canonical ID as LEB128 varints: state, zigzag head, cell
/// count, then (cell, symbol) pairs in increasing cell order.
pub fn encode_id(id: &CanonicalId) -> Vec<u8> {
    let id = &id.0;
    let mut out = Vec::with_capacity(4 + 2 * id.tape.len());
    put_varint(&mut out, u64::from(id.state.0));
    put_varint(&mut out, zigzag(id.head));
    put_varint(&mut out, id.tape.len() as u64);
    for (cell, symbol) in &id.tape {
        put_varint(&mut out, zigzag(*cell));
        put_varint(&mut out, u64::from(symbol.0));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Next(Id),
    Halted,
}

pub fn step(machine: &Machine, id: &Id) -> Result<Step, MachineError> {
    let mut next = id.clone();
    if machine.step_in_place(&mut next)? {
        Ok(Step::Next(next))
    } else {
        Ok(Step::Halted)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Halted { steps: u64, final_id: Id },
    LoopDetected { first_repeat_step: u64, period: u64 },
    BudgetExceeded { budget: u64 },
}

impl RunOutcome {
    pub fn is_halted(&self) -> bool {
        matches!(self, RunOutcome::Halted { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunOutcome::Halted { .. } => "halted",
            RunOutcome::LoopDetected { .. } => "loop",
            RunOutcome::BudgetExceeded { .. } => "budget",
        }
    }
}

/// A run in progress. Each call to [`Execution::advance`] applies at most
/// one transition, so several executions can be interleaved fairly.
#[derive(Clone, Debug)]
pub struct Execution<M> {
    machine: M,
    current: Id,
    steps: u64,
    budget: u64,
    visited: HashMap<Vec<u8>, u64>,
    outcome: Option<RunOutcome>,
}

impl<M: Borrow<Machine>> Execution<M> {
    pub fn new(machine: M, input: Id, budget: u64) -> Self {
        let mut visited = HashMap::new();
        visited.insert(encode_id(&canonicalize(&input)), 0);
        Self {
            machine,
            current: input,
            steps: 0,
            budget,
            visited,
            outcome: None,
        }
    }

    pub fn machine(&self) -> &Machine {
        self.machine.borrow()
    }

    pub fn current(&self) -> &Id {
        &self.current
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn outcome(&self) -> Option<&RunOutcome> {
        self.outcome.as_ref()
    }

    /// Makes one unit of progress and reports the outcome once decided.
    ///
    /// A halting configuration is recognised in the same call that reaches
    /// it; the only call that applies no transition is the one that finds
    /// the input itself halted, or the budget already spent.
    pub fn advance(&mut self) -> Result<Option<&RunOutcome>, MachineError> {
        if self.outcome.is_none() {
            self.outcome = self.advance_inner()?;
        }
        Ok(self.outcome.as_ref())
    }

    fn advance_inner(&mut self) -> Result<Option<RunOutcome>, MachineError> {
        let machine = self.machine.borrow();
        if self.steps == 0 && machine.is_halted(&self.current)? {
            return Ok(Some(self.halted()));
        }
        if self.steps >= self.budget {
            return Ok(Some(RunOutcome::BudgetExceeded {
                budget: self.budget,
            }));
        }
        machine.step_in_place(&mut self.current)?;
        self.steps += 1;
        let key = encode_id(&canonicalize(&self.current));
        if let Some(previous) = self.visited.insert(key, self.steps) {
            return Ok(Some(RunOutcome::LoopDetected {
                first_repeat_step: self.steps,
                period: self.steps - previous,
            }));
        }
        if machine.is_halted(&self.current)? {
            return Ok(Some(self.halted()));
        }
        Ok(None)
    }

    fn halted(&self) -> RunOutcome {
        RunOutcome::Halted {
            steps: self.steps,
            final_id: self.current.clone(),
        }
    }

    pub fn finish(mut self) -> Result<RunOutcome, MachineError> {
        loop {
            if let Some(outcome) = self.advance()? {
                return Ok(outcome.clone());
            }
        }
    }
}

pub fn run_with_loop_detection(
    machine: &Machine,
    input: &Id,
    budget: u64,
) -> Result<RunOutcome, MachineError> {
    Execution::new(machine, input.clone(), budget).finish()
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Halted { steps, .. } => write!(f, "halted after {steps} steps"),
            RunOutcome::LoopDetected {
                first_repeat_step,
                period,
            } => write!(
                f,
                "loop detected at step {first_repeat_step} (period {period})"
            ),
            RunOutcome::BudgetExceeded { budget } => write!(f, "budget of {budget} steps exceeded"),
        }
    }
}
