//! Horizon machines: evaluators that answer below a horizon and loop at it.
//!
//! `T(k)` is a genuine Turing machine reading `n` in unary. For `n < k` it
//! halts with `pred(n)` ones on the tape; for `n >= k` it settles into a
//! two-configuration bounce that loop detection reports within `k + 3`
//! steps. Measuring at `n >= k` replaces `T(k)` by `T(n + 1)`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::machine::{
    count_ones, run_with_loop_detection, unary_input, unary_table_machine, Machine, RunOutcome,
    TableEntry,
};

const PI_DIGITS: &str = include_str!("../corpus/pi_digits.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollapseError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("unknown predicate `{0}` (expected parity, const:V, mod:M or pi)")]
    UnknownPredicate(String),
}

/// Total predicates available to horizon machines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Predicate {
    Constant(u64),
    Parity,
    Mod(u64),
    /// Decimal digits of π, repeating after the shipped table ends.
    PiDigits,
}

impl Predicate {
    pub fn eval(self, n: u64) -> u64 {
        match self {
            Predicate::Constant(v) => v,
            Predicate::Parity => n % 2,
            Predicate::Mod(m) => n % m,
            Predicate::PiDigits => {
                let digits = PI_DIGITS.trim().as_bytes();
                u64::from(digits[(n % digits.len() as u64) as usize] - b'0')
            }
        }
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Constant(v) => write!(f, "const:{v}"),
            Predicate::Parity => f.write_str("parity"),
            Predicate::Mod(m) => write!(f, "mod:{m}"),
            Predicate::PiDigits => f.write_str("pi"),
        }
    }
}

impl FromStr for Predicate {
    type Err = CollapseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let unknown = || CollapseError::UnknownPredicate(s.to_owned());
        match s.trim() {
            "parity" => Ok(Predicate::Parity),
            "pi" | "pi-digits" => Ok(Predicate::PiDigits),
            other => {
                let (kind, arg) = other.split_once(':').ok_or_else(unknown)?;
                let arg: u64 = arg.parse().map_err(|_| unknown())?;
                match kind {
                    "const" => Ok(Predicate::Constant(arg)),
                    "mod" if arg > 0 => Ok(Predicate::Mod(arg)),
                    _ => Err(unknown()),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Evaluation {
    Value(u64),
    LoopDetected,
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Evaluation::Value(v) => write!(f, "{v}"),
            Evaluation::LoopDetected => f.write_str("loop"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct HorizonMachine {
    predicate: Predicate,
    horizon: u64,
    history: Vec<u64>,
    machine: Arc<Machine>,
    max_output: u64,
}

impl PartialEq for HorizonMachine {
    fn eq(&self, other: &Self) -> bool {
        self.predicate == other.predicate
            && self.horizon == other.horizon
            && self.history == other.history
    }
}

impl Eq for HorizonMachine {}

fn build(predicate: Predicate, horizon: u64) -> (Arc<Machine>, u64) {
    let entries: Vec<TableEntry> = (0..horizon)
        .map(|n| TableEntry::Value(predicate.eval(n)))
        .collect();
    let max_output = (0..horizon).map(|n| predicate.eval(n)).max().unwrap_or(0);
    (
        Arc::new(unary_table_machine(&entries, TableEntry::Loop)),
        max_output,
    )
}

pub fn make_horizon_machine(
    predicate: Predicate,
    horizon: u64,
) -> Result<HorizonMachine, CollapseError> {
    if horizon == 0 {
        return Err(CollapseError::ZeroHorizon);
    }
    let (machine, max_output) = build(predicate, horizon);
    Ok(HorizonMachine {
        predicate,
        horizon,
        history: vec![horizon],
        machine,
        max_output,
    })
}

impl HorizonMachine {
    pub fn predicate(&self) -> Predicate {
        self.predicate
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Every horizon this machine has held, oldest first; strictly increasing.
    pub fn history(&self) -> &[u64] {
        &self.history
    }

    pub fn machine(&self) -> &Machine {
        &self.machine
    }

    /// Enough steps to erase `n` cells, write the largest tabulated value
    /// and complete one bounce period.
    fn budget(&self, n: u64) -> u64 {
        n.min(self.horizon) + self.max_output + 4
    }

    /// Runs `T(k)` on `n` under loop detection.
    pub fn run(&self, n: u64) -> RunOutcome {
        run_with_loop_detection(
            &self.machine,
            &self.machine.initial_id(&unary_input(n)),
            self.budget(n),
        )
        .expect("horizon machine input is well formed")
    }

    pub fn evaluate(&self, n: u64) -> Evaluation {
        match self.run(n) {
            RunOutcome::Halted { final_id, .. } => Evaluation::Value(count_ones(&final_id)),
            RunOutcome::LoopDetected { .. } => Evaluation::LoopDetected,
            RunOutcome::BudgetExceeded { budget } => {
                unreachable!("horizon machine exceeded its budget of {budget} on input {n}")
            }
        }
    }

    /// Makes `n` evaluable. Below the horizon nothing changes; otherwise the
    /// horizon jumps to `n + 1`.
    pub fn measure(&self, n: u64) -> HorizonMachine {
        if n < self.horizon {
            return self.clone();
        }
        let horizon = n + 1;
        let (machine, max_output) = build(self.predicate, horizon);
        let mut history = self.history.clone();
        history.push(horizon);
        HorizonMachine {
            predicate: self.predicate,
            horizon,
            history,
            machine,
            max_output,
        }
    }
}

pub fn evaluate(hm: &HorizonMachine, n: u64) -> Evaluation {
    hm.evaluate(n)
}

pub fn measure(hm: &HorizonMachine, n: u64) -> HorizonMachine {
    hm.measure(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_horizon_halts_only_on_zero() {
        let hm = make_horizon_machine(Predicate::Constant(2), 1).unwrap();
        assert_eq!(hm.evaluate(0), Evaluation::Value(2));
        for n in 1..6 {
            assert_eq!(hm.evaluate(n), Evaluation::LoopDetected);
        }
    }

    #[test]
    fn parity_below_four() {
        let hm = make_horizon_machine(Predicate::Parity, 4).unwrap();
        let got: Vec<_> = (0..4).map(|n| hm.evaluate(n)).collect();
        assert_eq!(got, [0, 1, 0, 1].map(Evaluation::Value));
        for n in 4..=9 {
            assert!(
                matches!(hm.run(n), RunOutcome::LoopDetected { .. }),
                "n={n}"
            );
        }
    }

    #[test]
    fn measure_below_horizon_is_identity() {
        let hm = make_horizon_machine(Predicate::PiDigits, 5).unwrap();
        assert_eq!(hm.measure(4), hm);
        assert_eq!(hm.measure(0).history(), &[5]);
    }

    #[test]
    fn measure_jumps_to_one_past_the_input() {
        let hm = make_horizon_machine(Predicate::Parity, 3).unwrap();
        assert_eq!(hm.evaluate(7), Evaluation::LoopDetected);
        let after = hm.measure(7);
        assert_eq!(after.horizon(), 8);
        assert_eq!(after.evaluate(7), Evaluation::Value(1));
        assert_eq!(after.history(), &[3, 8]);
        let again = after.measure(12).measure(2).measure(20);
        assert_eq!(again.history(), &[3, 8, 13, 21]);
    }

    #[test]
    fn zero_horizon_is_rejected() {
        assert_eq!(
            make_horizon_machine(Predicate::Parity, 0),
            Err(CollapseError::ZeroHorizon)
        );
    }

    #[test]
    fn predicate_parsing() {
        for p in [
            Predicate::Parity,
            Predicate::PiDigits,
            Predicate::Constant(4),
            Predicate::Mod(3),
        ] {
            assert_eq!(p.to_string().parse::<Predicate>().unwrap(), p);
        }
        assert!("mod:0".parse::<Predicate>().is_err());
        assert!("square".parse::<Predicate>().is_err());
        assert_eq!(Predicate::PiDigits.eval(0), 3);
        assert_eq!(Predicate::PiDigits.eval(5), 9);
        assert_eq!(Predicate::PiDigits.eval(200), 3);
    }
}
