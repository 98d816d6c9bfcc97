//! Dovetailed search over machine runs and the totalized μ-operator.
//!
//! Each search task proposes one sub-run per trial index `y`. The scheduler
//! activates `(task, trial)` pairs in Cantor diagonal order, one per round,
//! and in every round advances each live sub-run by one step. Pair `r` is
//! activated in round `r`, so after `N` rounds a pair still live has
//! received exactly `N - r` steps.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use thiserror::Error;

use crate::machine::{
    count_ones, unary_input, unary_table_machine, Execution, Id, Machine, MachineError, RunOutcome,
    Symbol, TableEntry,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DovetailError {
    #[error("at least one search task is required")]
    NoTasks,
    #[error("budgets must be at least 1")]
    ZeroBudget,
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// A computable function presented as machine runs: `sub_run(args, y)` is
/// the machine and input whose halting output is `g(args, y)`.
pub trait Evaluator: Send + Sync {
    fn sub_run(&self, args: &[u64], y: u64) -> (Arc<Machine>, Id);

    /// Reads the function value off a halted configuration.
    fn decode(&self, halted: &Id) -> u64 {
        count_ones(halted)
    }

    /// Step allowance for one evaluation.
    fn sub_budget(&self) -> u64;
}

type TableFn = dyn Fn(&[u64], u64) -> TableEntry + Send + Sync;

/// `g(args, y)` given by a Rust closure and compiled, per argument tuple,
/// into a unary tabulating machine over `y < domain`. Inputs at or past
/// `domain` loop.
pub struct TabulatedFunction {
    domain: u64,
    sub_budget: u64,
    f: Box<TableFn>,
    cache: Mutex<HashMap<Vec<u64>, Arc<Machine>>>,
}

impl TabulatedFunction {
    pub fn new(
        domain: u64,
        sub_budget: u64,
        f: impl Fn(&[u64], u64) -> TableEntry + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            sub_budget,
            f: Box::new(f),
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// A total function; every tabulated input halts.
    pub fn total(domain: u64, f: impl Fn(&[u64], u64) -> u64 + Send + Sync + 'static) -> Self {
        let budget = 4 * domain + 64;
        Self::new(domain, budget, move |args, y| TableEntry::Value(f(args, y)))
    }

    pub fn entry(&self, args: &[u64], y: u64) -> TableEntry {
        if y < self.domain {
            (self.f)(args, y)
        } else {
            TableEntry::Loop
        }
    }

    fn machine_for(&self, args: &[u64]) -> Arc<Machine> {
        let mut cache = self.cache.lock().expect("cache lock");
        cache
            .entry(args.to_vec())
            .or_insert_with(|| {
                let entries: Vec<_> = (0..self.domain).map(|y| (self.f)(args, y)).collect();
                Arc::new(unary_table_machine(&entries, TableEntry::Loop))
            })
            .clone()
    }
}

impl Evaluator for TabulatedFunction {
    fn sub_run(&self, args: &[u64], y: u64) -> (Arc<Machine>, Id) {
        let m = self.machine_for(args);
        let id = m.initial_id(&unary_input(y));
        (m, id)
    }

    fn sub_budget(&self) -> u64 {
        self.sub_budget
    }
}

/// A user-supplied machine reading `1^a1 _ 1^a2 _ ... _ 1^y`; the output is
/// the number of `1`s left on the tape.
pub struct MachineFunction {
    machine: Arc<Machine>,
    one: Symbol,
    sub_budget: u64,
}

impl MachineFunction {
    pub fn new(machine: Machine, sub_budget: u64) -> Result<Self, MachineError> {
        let one = machine
            .symbol_by_name("1")
            .ok_or_else(|| MachineError::UnknownSymbolName("1".to_owned()))?;
        Ok(Self {
            machine: Arc::new(machine),
            one,
            sub_budget,
        })
    }

    pub fn input(&self, args: &[u64], y: u64) -> Vec<Symbol> {
        let mut tape = Vec::new();
        for a in args {
            tape.extend(std::iter::repeat_n(self.one, *a as usize));
            tape.push(Symbol::BLANK);
        }
        tape.extend(std::iter::repeat_n(self.one, y as usize));
        tape
    }
}

impl Evaluator for MachineFunction {
    fn sub_run(&self, args: &[u64], y: u64) -> (Arc<Machine>, Id) {
        let id = self.machine.initial_id(&self.input(args, y));
        (self.machine.clone(), id)
    }

    fn decode(&self, halted: &Id) -> u64 {
        halted.count(self.one) as u64
    }

    fn sub_budget(&self) -> u64 {
        self.sub_budget
    }
}

type Generator = dyn Fn(u64) -> (Arc<Machine>, Id) + Send + Sync;
type Acceptor = dyn Fn(u64, &Id) -> bool + Send + Sync;

/// One search: trial `y` runs `generator(y)`; a halted run is a success
/// when `accept(steps, final_id)` holds.
pub struct SearchTask {
    pub label: String,
    generator: Box<Generator>,
    accept: Box<Acceptor>,
    max_trials: Option<u64>,
}

impl SearchTask {
    pub fn new(
        label: impl Into<String>,
        generator: impl Fn(u64) -> (Arc<Machine>, Id) + Send + Sync + 'static,
        accept: impl Fn(u64, &Id) -> bool + Send + Sync + 'static,
    ) -> Self {
        Self {
            label: label.into(),
            generator: Box::new(generator),
            accept: Box::new(accept),
            max_trials: None,
        }
    }

    /// Restricts the task to trials `0..max_trials`.
    pub fn with_max_trials(mut self, max_trials: u64) -> Self {
        self.max_trials = Some(max_trials);
        self
    }

    pub fn max_trials(&self) -> Option<u64> {
        self.max_trials
    }
}

impl fmt::Debug for SearchTask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SearchTask")
            .field("label", &self.label)
            .field("max_trials", &self.max_trials)
            .finish_non_exhaustive()
    }
}

/// Halts iff `g(args, y) = 0` for the trial's `y`.
pub fn make_t1(g: Arc<dyn Evaluator>, args: Vec<u64>) -> SearchTask {
    search_for(g, args, "zero-of", true)
}

/// Halts iff `g(args, y) != 0` for the trial's `y`.
pub fn make_t2(g: Arc<dyn Evaluator>, args: Vec<u64>) -> SearchTask {
    search_for(g, args, "nonzero-of", false)
}

fn search_for(g: Arc<dyn Evaluator>, args: Vec<u64>, label: &str, zero: bool) -> SearchTask {
    let gen_g = g.clone();
    SearchTask::new(
        label,
        move |y| gen_g.sub_run(&args, y),
        move |_, id| (g.decode(id) == 0) == zero,
    )
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TaskStatus {
    pub task_id: usize,
    pub trials_started: u64,
    pub rejected: u64,
    pub loops: u64,
    pub budget_exceeded: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DovetailOutcome {
    FirstSuccess {
        task_id: usize,
        trial: u64,
        evidence: RunOutcome,
    },
    AllExhausted(Vec<TaskStatus>),
    GlobalBudgetExceeded {
        rounds: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RetireReason {
    Accepted,
    Rejected,
    Loop,
    Budget,
}

/// What the scheduler did, for tracing and instrumentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchedulerEvent {
    Activated {
        round: u64,
        rank: u64,
        task_id: usize,
        trial: u64,
    },
    Advanced {
        round: u64,
        rank: u64,
        task_id: usize,
        trial: u64,
    },
    Retired {
        round: u64,
        rank: u64,
        task_id: usize,
        trial: u64,
        steps: u64,
        reason: RetireReason,
    },
    RoundEnd {
        round: u64,
    },
}

/// Cantor enumeration of `(task, trial)` pairs: diagonal `d = task + trial`
/// in increasing order, tasks ascending within a diagonal. Pairs outside a
/// task's trial limit are skipped.
#[derive(Clone, Debug)]
pub struct DiagonalOrder {
    limits: Vec<Option<u64>>,
    diagonal: u64,
    task: usize,
}

impl DiagonalOrder {
    pub fn new(limits: Vec<Option<u64>>) -> Self {
        Self {
            limits,
            diagonal: 0,
            task: 0,
        }
    }

    fn last_diagonal(&self) -> Option<u64> {
        self.limits
            .iter()
            .enumerate()
            .map(|(t, l)| l.map(|l| (t as u64 + l).saturating_sub(1)))
            .try_fold(0u64, |acc, d| d.map(|d| acc.max(d)))
    }
}

impl Iterator for DiagonalOrder {
    type Item = (usize, u64);

    fn next(&mut self) -> Option<(usize, u64)> {
        let last = self.last_diagonal();
        loop {
            if last.is_some_and(|l| self.diagonal > l) || self.limits.is_empty() {
                return None;
            }
            let width = (self.diagonal as usize).min(self.limits.len() - 1);
            if self.task > width {
                self.diagonal += 1;
                self.task = 0;
                continue;
            }
            let task = self.task;
            let trial = self.diagonal - task as u64;
            self.task += 1;
            if self.limits[task].is_none_or(|l| trial < l) {
                return Some((task, trial));
            }
        }
    }
}

struct LivePair {
    rank: u64,
    task: usize,
    trial: u64,
    run: Execution<Arc<Machine>>,
}

pub fn dovetail(
    tasks: &[SearchTask],
    sub_budget: u64,
    global_budget: u64,
) -> Result<DovetailOutcome, DovetailError> {
    dovetail_observed(tasks, sub_budget, global_budget, |_| {})
}

/// [`dovetail`] with a callback receiving every scheduler decision.
/// `global_budget` bounds the number of rounds.
pub fn dovetail_observed(
    tasks: &[SearchTask],
    sub_budget: u64,
    global_budget: u64,
    mut observe: impl FnMut(&SchedulerEvent),
) -> Result<DovetailOutcome, DovetailError> {
    if tasks.is_empty() {
        return Err(DovetailError::NoTasks);
    }
    if sub_budget == 0 || global_budget == 0 {
        return Err(DovetailError::ZeroBudget);
    }
    let mut order = DiagonalOrder::new(tasks.iter().map(|t| t.max_trials).collect());
    let mut status: Vec<TaskStatus> = (0..tasks.len())
        .map(|task_id| TaskStatus {
            task_id,
            ..TaskStatus::default()
        })
        .collect();
    let mut live: Vec<LivePair> = Vec::new();
    let mut exhausted = false;
    let mut next_rank = 0;

    for round in 0..global_budget {
        if !exhausted {
            match order.next() {
                Some((task, trial)) => {
                    let (machine, input) = (tasks[task].generator)(trial);
                    live.push(LivePair {
                        rank: next_rank,
                        task,
                        trial,
                        run: Execution::new(machine, input, sub_budget),
                    });
                    status[task].trials_started += 1;
                    observe(&SchedulerEvent::Activated {
                        round,
                        rank: next_rank,
                        task_id: task,
                        trial,
                    });
                    next_rank += 1;
                }
                None => exhausted = true,
            }
        }

        let mut i = 0;
        while i < live.len() {
            let pair = &mut live[i];
            observe(&SchedulerEvent::Advanced {
                round,
                rank: pair.rank,
                task_id: pair.task,
                trial: pair.trial,
            });
            let Some(outcome) = pair.run.advance()?.cloned() else {
                i += 1;
                continue;
            };
            let reason = match &outcome {
                RunOutcome::Halted { steps, final_id } => {
                    if (tasks[pair.task].accept)(*steps, final_id) {
                        RetireReason::Accepted
                    } else {
                        RetireReason::Rejected
                    }
                }
                RunOutcome::LoopDetected { .. } => RetireReason::Loop,
                RunOutcome::BudgetExceeded { .. } => RetireReason::Budget,
            };
            observe(&SchedulerEvent::Retired {
                round,
                rank: pair.rank,
                task_id: pair.task,
                trial: pair.trial,
                steps: pair.run.steps(),
                reason,
            });
            let st = &mut status[pair.task];
            match reason {
                RetireReason::Accepted => {
                    return Ok(DovetailOutcome::FirstSuccess {
                        task_id: pair.task,
                        trial: pair.trial,
                        evidence: outcome,
                    });
                }
                RetireReason::Rejected => st.rejected += 1,
                RetireReason::Loop => st.loops += 1,
                RetireReason::Budget => st.budget_exceeded += 1,
            }
            live.remove(i);
        }
        observe(&SchedulerEvent::RoundEnd { round });

        if exhausted && live.is_empty() {
            return Ok(DovetailOutcome::AllExhausted(status));
        }
    }
    Ok(DovetailOutcome::GlobalBudgetExceeded {
        rounds: global_budget,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VacuousReason {
    LoopDetected,
    BudgetExceeded,
}

/// Result of the totalized μ-operator. `Vacuous` is kept apart from every
/// numeral so it cannot be mistaken for a genuine least zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TotalMuResult {
    Defined(u64),
    Vacuous(VacuousReason),
}

impl fmt::Display for TotalMuResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TotalMuResult::Defined(y) => write!(f, "{y}"),
            TotalMuResult::Vacuous(VacuousReason::LoopDetected) => f.write_str("vacuous(loop)"),
            TotalMuResult::Vacuous(VacuousReason::BudgetExceeded) => f.write_str("vacuous(budget)"),
        }
    }
}

/// `μy (g(args, y) = 0)`, searching `y < budget`. A looping evaluation ends
/// the search as `Vacuous(LoopDetected)`, an evaluation that outruns its
/// sub-budget or an exhausted search as `Vacuous(BudgetExceeded)`.
pub fn total_mu(
    g: &dyn Evaluator,
    args: &[u64],
    budget: u64,
) -> Result<TotalMuResult, MachineError> {
    for y in 0..budget {
        let (machine, input) = g.sub_run(args, y);
        let outcome = Execution::new(machine, input, g.sub_budget()).finish()?;
        match outcome {
            RunOutcome::Halted { final_id, .. } => {
                if g.decode(&final_id) == 0 {
                    return Ok(TotalMuResult::Defined(y));
                }
            }
            RunOutcome::LoopDetected { .. } => {
                return Ok(TotalMuResult::Vacuous(VacuousReason::LoopDetected))
            }
            RunOutcome::BudgetExceeded { .. } => {
                return Ok(TotalMuResult::Vacuous(VacuousReason::BudgetExceeded))
            }
        }
    }
    Ok(TotalMuResult::Vacuous(VacuousReason::BudgetExceeded))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{MachineBuilder, Move};

    fn constant(v: u64) -> Arc<dyn Evaluator> {
        Arc::new(TabulatedFunction::total(64, move |_, _| v))
    }

    fn looping() -> Arc<Machine> {
        let mut b = MachineBuilder::new();
        b.start("a")
            .rule("a", "_", "b", "_", Move::Right)
            .rule("b", "_", "a", "_", Move::Left);
        Arc::new(b.build().unwrap())
    }

    fn halting() -> Arc<Machine> {
        let mut b = MachineBuilder::new();
        b.start("h");
        Arc::new(b.build().unwrap())
    }

    #[test]
    fn immediate_halt_wins() {
        let h = halting();
        let l = looping();
        let tasks = [
            SearchTask::new(
                "halts",
                move |_| (h.clone(), Id::blank(h.start())),
                |_, _| true,
            ),
            SearchTask::new(
                "loops",
                move |_| (l.clone(), Id::blank(l.start())),
                |_, _| true,
            ),
        ];
        let out = dovetail(&tasks, 10, 100).unwrap();
        assert!(matches!(
            out,
            DovetailOutcome::FirstSuccess {
                task_id: 0,
                trial: 0,
                evidence: RunOutcome::Halted { steps: 0, .. }
            }
        ));
    }

    #[test]
    fn looping_tasks_exhaust() {
        let tasks: Vec<_> = (0..2)
            .map(|i| {
                let l = looping();
                SearchTask::new(
                    format!("loop{i}"),
                    move |_| (l.clone(), Id::blank(l.start())),
                    |_, _| true,
                )
                .with_max_trials(4)
            })
            .collect();
        let DovetailOutcome::AllExhausted(status) = dovetail(&tasks, 5, 1000).unwrap() else {
            panic!("expected exhaustion");
        };
        for st in status {
            assert_eq!(st.trials_started, 4);
            assert_eq!(st.loops, 4);
        }
    }

    #[test]
    fn unbounded_tasks_hit_the_global_budget() {
        let l = looping();
        let tasks = [SearchTask::new(
            "l",
            move |_| (l.clone(), Id::blank(l.start())),
            |_, _| true,
        )];
        assert_eq!(
            dovetail(&tasks, 5, 30).unwrap(),
            DovetailOutcome::GlobalBudgetExceeded { rounds: 30 }
        );
    }

    #[test]
    fn bad_arguments() {
        assert_eq!(dovetail(&[], 1, 1), Err(DovetailError::NoTasks));
        let h = halting();
        let tasks = [SearchTask::new(
            "h",
            move |_| (h.clone(), Id::blank(h.start())),
            |_, _| true,
        )];
        assert_eq!(dovetail(&tasks, 0, 1), Err(DovetailError::ZeroBudget));
    }

    #[test]
    fn diagonal_order_prefix() {
        let got: Vec<_> = DiagonalOrder::new(vec![None, None]).take(7).collect();
        assert_eq!(
            got,
            [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (0, 3), (1, 2)]
        );
        let finite: Vec<_> = DiagonalOrder::new(vec![Some(2), Some(1)]).collect();
        assert_eq!(finite, [(0, 0), (0, 1), (1, 0)]);
        assert_eq!(DiagonalOrder::new(vec![Some(0)]).next(), None);
    }

    #[test]
    fn constant_zero_and_one_searches() {
        let zero = constant(0);
        let one = constant(1);
        let t1 = [make_t1(zero.clone(), vec![]).with_max_trials(5)];
        assert!(matches!(
            dovetail(&t1, 100, 1000).unwrap(),
            DovetailOutcome::FirstSuccess {
                task_id: 0,
                trial: 0,
                ..
            }
        ));
        let t2 = [make_t2(zero, vec![]).with_max_trials(5)];
        assert!(matches!(
            dovetail(&t2, 100, 1000).unwrap(),
            DovetailOutcome::AllExhausted(_)
        ));

        let t2 = [make_t2(one.clone(), vec![]).with_max_trials(5)];
        assert!(matches!(
            dovetail(&t2, 100, 1000).unwrap(),
            DovetailOutcome::FirstSuccess {
                task_id: 0,
                trial: 0,
                ..
            }
        ));
        let t1 = [make_t1(one, vec![]).with_max_trials(5)];
        assert!(matches!(
            dovetail(&t1, 100, 1000).unwrap(),
            DovetailOutcome::AllExhausted(_)
        ));
    }

    #[test]
    fn mu_of_distance_to_five() {
        let g = TabulatedFunction::total(32, |args, y| (args[0] + y).abs_diff(5));
        assert_eq!(total_mu(&g, &[2], 20).unwrap(), TotalMuResult::Defined(3));
        assert_eq!(total_mu(&g, &[5], 20).unwrap(), TotalMuResult::Defined(0));
        // x = 9 never reaches 5 from above.
        assert_eq!(
            total_mu(&g, &[9], 20).unwrap(),
            TotalMuResult::Vacuous(VacuousReason::BudgetExceeded)
        );
    }

    #[test]
    fn looping_evaluation_is_vacuous() {
        let g = TabulatedFunction::new(8, 50, |_, _| TableEntry::Loop);
        assert_eq!(
            total_mu(&g, &[], 10).unwrap(),
            TotalMuResult::Vacuous(VacuousReason::LoopDetected)
        );
        let g = TabulatedFunction::new(8, 50, |_, y| {
            if y < 2 {
                TableEntry::Value(1)
            } else {
                TableEntry::Diverge
            }
        });
        assert_eq!(
            total_mu(&g, &[], 10).unwrap(),
            TotalMuResult::Vacuous(VacuousReason::BudgetExceeded)
        );
    }

    #[test]
    fn machine_function_reads_unary_arguments() {
        // Erase everything up to the separator, keeping y's ones: g(x, y) = y.
        let mut b = MachineBuilder::new();
        b.symbol("1")
            .start("skip")
            .rule("skip", "1", "skip", "_", Move::Right)
            .rule("skip", "_", "done", "_", Move::Right);
        let f = MachineFunction::new(b.build().unwrap(), 100).unwrap();
        assert_eq!(total_mu(&f, &[3], 10).unwrap(), TotalMuResult::Defined(0));
        let (m, id) = f.sub_run(&[2], 3);
        let RunOutcome::Halted { final_id, .. } =
            crate::machine::run_with_loop_detection(&m, &id, 100).unwrap()
        else {
            panic!();
        };
        assert_eq!(f.decode(&final_id), 3);
    }
}
