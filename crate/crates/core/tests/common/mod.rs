//! Oracles shared by the integration and acceptance suites.
//!
//! Nothing here calls the library's execution path: the naive simulator
//! keeps its own tape and its own notion of translation-normal form, and
//! only reads the transition table through the public accessors.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use gu_core::machine::{Id, Machine, MachineBuilder, Move, StateId, Symbol};
use rand::Rng;

/// Dense copy of a machine's table, keyed by raw indices.
pub struct NaiveMachine {
    rules: HashMap<(u32, u32), (u32, u32, i64)>,
    pub start: u32,
}

impl NaiveMachine {
    pub fn from(machine: &Machine) -> Self {
        let rules = machine
            .transitions()
            .map(|(s, a, t)| {
                let dir = match t.movement {
                    Move::Left => -1,
                    Move::Right => 1,
                };
                ((s.0, a.0), (t.next.0, t.write.0, dir))
            })
            .collect();
        Self {
            rules,
            start: machine.start().0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NaiveConfig {
    pub state: u32,
    pub head: i64,
    pub tape: BTreeMap<i64, u32>,
}

impl NaiveConfig {
    pub fn from_id(id: &Id) -> Self {
        Self {
            state: id.state.0,
            head: id.head,
            tape: id.cells().map(|(c, s)| (c, s.0)).collect(),
        }
    }

    /// Shift so the leftmost non-blank (or the head on a blank tape) is 0.
    pub fn normal_form(&self) -> (u32, i64, Vec<(i64, u32)>) {
        let anchor = self.tape.keys().next().copied().unwrap_or(self.head);
        (
            self.state,
            self.head - anchor,
            self.tape.iter().map(|(c, s)| (c - anchor, *s)).collect(),
        )
    }

    /// One transition; `false` when none applies.
    pub fn step(&mut self, m: &NaiveMachine) -> bool {
        let sym = self.tape.get(&self.head).copied().unwrap_or(0);
        let Some(&(next, write, dir)) = m.rules.get(&(self.state, sym)) else {
            return false;
        };
        if write == 0 {
            self.tape.remove(&self.head);
        } else {
            self.tape.insert(self.head, write);
        }
        self.head += dir;
        self.state = next;
        true
    }
}

#[derive(Debug)]
pub struct NaiveRun {
    pub halted: bool,
    pub steps: u64,
    pub last: NaiveConfig,
    /// Configuration after each step, index 0 being the input.
    pub trace: Vec<NaiveConfig>,
}

/// Plain simulation with no loop detection, up to `max_steps` transitions.
pub fn naive_run(machine: &Machine, input: &Id, max_steps: u64, keep_trace: bool) -> NaiveRun {
    let m = NaiveMachine::from(machine);
    let mut cfg = NaiveConfig::from_id(input);
    let mut trace = Vec::new();
    if keep_trace {
        trace.push(cfg.clone());
    }
    let mut steps = 0;
    while steps < max_steps {
        if !cfg.step(&m) {
            return NaiveRun {
                halted: true,
                steps,
                last: cfg,
                trace,
            };
        }
        steps += 1;
        if keep_trace {
            trace.push(cfg.clone());
        }
    }
    let halted = {
        let sym = cfg.tape.get(&cfg.head).copied().unwrap_or(0);
        !m.rules.contains_key(&(cfg.state, sym))
    };
    NaiveRun {
        halted,
        steps,
        last: cfg,
        trace,
    }
}

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(gu_core::CORPUS_DIR)
}

#[derive(Clone, Debug)]
pub struct ManifestRow {
    pub file: String,
    pub expected: String,
    pub steps: Option<u64>,
    pub period: Option<u64>,
    pub budget: u64,
}

pub fn machine_manifest(dir: &Path) -> Vec<ManifestRow> {
    let text = std::fs::read_to_string(dir.join("manifest.csv")).expect("manifest");
    text.lines()
        .skip(1)
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            let opt = |s: &str| {
                if s.is_empty() {
                    None
                } else {
                    Some(s.parse().unwrap())
                }
            };
            ManifestRow {
                file: f[0].to_owned(),
                expected: f[1].to_owned(),
                steps: opt(f[2]),
                period: opt(f[3]),
                budget: f[4].parse().unwrap(),
            }
        })
        .collect()
}

/// A random machine with 1–4 states over 2–3 symbols; each (state, symbol)
/// pair has a transition with probability 4/5.
pub fn random_machine(rng: &mut impl Rng) -> Machine {
    let states = rng.gen_range(1..=4);
    let symbols = rng.gen_range(2..=3);
    let sname = |i: usize| format!("s{i}");
    let aname = |i: usize| {
        if i == 0 {
            "_".to_owned()
        } else {
            i.to_string()
        }
    };
    let mut b = MachineBuilder::new();
    b.start(sname(0));
    for s in 0..states {
        b.state(sname(s));
    }
    for a in 0..symbols {
        b.symbol(aname(a));
    }
    for s in 0..states {
        for a in 0..symbols {
            if rng.gen_ratio(4, 5) {
                let next = sname(rng.gen_range(0..states));
                let write = aname(rng.gen_range(0..symbols));
                let mv = if rng.gen_bool(0.5) {
                    Move::Left
                } else {
                    Move::Right
                };
                b.rule(&sname(s), &aname(a), &next, &write, mv);
            }
        }
    }
    b.build().expect("random machine")
}

/// A random configuration valid for `machine`.
pub fn random_id(machine: &Machine, rng: &mut impl Rng) -> Id {
    let mut id = Id::blank(StateId(rng.gen_range(0..machine.states() as u32)));
    let offset = rng.gen_range(-20..20);
    for cell in 0..rng.gen_range(0..8) {
        id.write(
            offset + cell,
            Symbol(rng.gen_range(0..machine.symbols() as u32)),
        );
    }
    id.head = offset + rng.gen_range(-3..10);
    id
}

/// Least `y <= limit` with `g(y) = 0`, straight from the closure.
pub fn brute_force_mu(g: impl Fn(u64) -> Option<u64>, limit: u64) -> Option<u64> {
    for y in 0..=limit {
        match g(y) {
            Some(0) => return Some(y),
            Some(_) => {}
            None => return None,
        }
    }
    None
}

/// Double loop over the whole `(b, c)` grid.
pub fn brute_force_matches(seq: &[u64], bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for c in 1..=bound {
        for b in 0..=bound {
            if seq
                .iter()
                .enumerate()
                .all(|(i, m)| b % (1 + (i as u64 + 1) * c) == *m)
            {
                out.push((b, c));
            }
        }
    }
    out
}

/// Length of the final constant run, scanning from the end.
pub fn final_constant_run(values: &[u64]) -> usize {
    let Some(last) = values.last() else { return 0 };
    values.iter().rev().take_while(|v| *v == last).count()
}

/// One μ-search case: the table of `g(y)` for `y <= 50` (`None` = loops).
#[derive(Clone, Debug)]
pub struct MuCase {
    pub table: Vec<Option<u64>>,
}

impl MuCase {
    pub fn eval(&self, y: u64) -> Option<u64> {
        self.table.get(y as usize).copied().flatten()
    }
}

/// Fifty cases: forty with sparse zeros, five zero-free, five that loop
/// before any zero.
pub fn mu_suite(rng: &mut impl Rng) -> Vec<MuCase> {
    let mut cases = Vec::new();
    for i in 0..50 {
        let table = (0..=50)
            .map(|_| match i {
                0..=39 => Some(if rng.gen_ratio(1, 12) {
                    0
                } else {
                    rng.gen_range(1..4)
                }),
                40..=44 => Some(rng.gen_range(1..4)),
                _ => {
                    if rng.gen_ratio(1, 6) {
                        None
                    } else {
                        Some(rng.gen_range(1..4))
                    }
                }
            })
            .collect::<Vec<_>>();
        let mut table = table;
        if i >= 45 && table.iter().all(Option::is_some) {
            table[rng.gen_range(0..50)] = None;
        }
        cases.push(MuCase { table });
    }
    cases
}

/// Summary of an instrumented three-task dovetail run.
#[derive(Debug, PartialEq, Eq)]
pub struct FairnessRun {
    /// First round at which the bound failed, if any.
    pub violation: Option<(u64, u64, u64)>,
    pub events: u64,
    pub digest: u64,
    pub outcome: gu_core::dovetail::DovetailOutcome,
}

/// Three never-accepting tasks (a binary counter, a sweeper and a
/// settle-then-bounce looper) on fixed inputs. After every round `N`
/// each live pair of rank `r <= N` must have had
/// `floor(N / (r + 1) / 3)` steps.
pub fn fairness_run(rounds: u64, sub_budget: u64) -> FairnessRun {
    use gu_core::dovetail::{dovetail_observed, SchedulerEvent, SearchTask};
    use std::hash::{DefaultHasher, Hash, Hasher};
    use std::sync::Arc;

    let task = |file: &str| {
        let src = std::fs::read_to_string(corpus_dir().join("machines").join(file)).unwrap();
        let def = gu_core::machine::parse_machine(&src).unwrap();
        let m = Arc::new(def.machine.clone());
        let id = def.initial_id();
        SearchTask::new(file, move |_| (m.clone(), id.clone()), |_, _| false)
    };
    let tasks = [
        task("counter.tm"),
        task("sweep.tm"),
        task("settle_then_bounce.tm"),
    ];
    let mut steps: BTreeMap<u64, u64> = BTreeMap::new();
    let mut hasher = DefaultHasher::new();
    let mut events = 0;
    let mut violation = None;
    let outcome = dovetail_observed(&tasks, sub_budget, rounds, |e| {
        e.hash(&mut hasher);
        events += 1;
        match *e {
            SchedulerEvent::Activated { rank, .. } => {
                steps.insert(rank, 0);
            }
            SchedulerEvent::Advanced { rank, .. } => *steps.get_mut(&rank).unwrap() += 1,
            SchedulerEvent::Retired { rank, .. } => {
                steps.remove(&rank);
            }
            SchedulerEvent::RoundEnd { round } => {
                let n = round + 1;
                for (&r, &s) in &steps {
                    if violation.is_none() && r <= n && s < n / (r + 1) / 3 {
                        violation = Some((n, r, s));
                    }
                }
            }
        }
    })
    .unwrap();
    FairnessRun {
        violation,
        events,
        digest: hasher.finish(),
        outcome,
    }
}

/// Loads and builds a shipped universe config by file stem.
pub fn load_universe(
    stem: &str,
) -> (
    gu_core::universe::UniverseConfig,
    gu_core::universe::Universe,
) {
    let dir = corpus_dir().join("universes");
    let src = std::fs::read_to_string(dir.join(format!("{stem}.json"))).unwrap();
    let cfg = gu_core::universe::UniverseConfig::from_json(&src).unwrap();
    let u = cfg.build(&dir).unwrap();
    (cfg, u)
}
