//! The demo's operations as plain functions returning JSON.

use gu_core::beta::{
    enumerate_matches, fit_characteristic_beta, next_value_distribution, BetaError, ValueSequence,
};
use gu_core::collapse::{make_horizon_machine, Predicate};
use gu_core::machine::{parse_input, parse_machine, Execution, RunOutcome};
use serde::Serialize;

/// Pairs listed in a prediction; the distribution still covers them all.
const LISTED_PAIRS: usize = 40;

#[derive(Serialize)]
pub struct Prediction {
    pub total: u64,
    pub characteristic: Option<(String, String)>,
    pub pairs: Vec<(String, String)>,
    pub distribution: Vec<Bar>,
}

#[derive(Serialize)]
pub struct Bar {
    pub value: u64,
    pub count: u64,
    pub frequency: String,
    pub probability: f64,
}

pub fn beta_predict(seq: &str, bound: u64) -> Result<Prediction, String> {
    let s: ValueSequence = seq.parse().map_err(|e: BetaError| e.to_string())?;
    let pairs = enumerate_matches(&s, bound).map_err(|e| e.to_string())?;
    let distribution = match next_value_distribution(&s, bound) {
        Ok(d) => d
            .frequencies()
            .map(|(value, f)| Bar {
                value,
                count: d.counts[&value],
                frequency: f.to_string(),
                probability: *f.numer() as f64 / *f.denom() as f64,
            })
            .collect(),
        Err(BetaError::EmptyMatchSet(_)) => Vec::new(),
        Err(e) => return Err(e.to_string()),
    };
    Ok(Prediction {
        total: pairs.len() as u64,
        characteristic: fit_characteristic_beta(&s, bound)
            .map(|p| (p.b().to_string(), p.c().to_string())),
        pairs: pairs
            .iter()
            .take(LISTED_PAIRS)
            .map(|p| (p.b().to_string(), p.c().to_string()))
            .collect(),
        distribution,
    })
}

#[derive(Serialize)]
pub struct CollapseRow {
    pub n: u64,
    pub predicate: u64,
    pub before: String,
    pub after: String,
}

#[derive(Serialize)]
pub struct CollapseTable {
    pub history: Vec<u64>,
    pub rows: Vec<CollapseRow>,
}

/// Evaluates inputs `0..upto` before and after measuring each of
/// `measures` (comma-separated) in turn.
pub fn collapse_table(
    pred: &str,
    k: u64,
    measures: &str,
    upto: u64,
) -> Result<CollapseTable, String> {
    let predicate: Predicate = pred.parse().map_err(|e| format!("{e}"))?;
    let before = make_horizon_machine(predicate, k).map_err(|e| e.to_string())?;
    let mut after = before.clone();
    for m in measures.split(',').map(str::trim).filter(|m| !m.is_empty()) {
        let n: u64 = m.parse().map_err(|_| format!("bad measurement `{m}`"))?;
        after = after.measure(n);
    }
    let rows = (0..upto.min(200))
        .map(|n| CollapseRow {
            n,
            predicate: predicate.eval(n),
            before: before.evaluate(n).to_string(),
            after: after.evaluate(n).to_string(),
        })
        .collect();
    Ok(CollapseTable {
        history: after.history().to_vec(),
        rows,
    })
}

#[derive(Serialize)]
pub struct Frame {
    pub state: String,
    pub head: i64,
    pub cells: Vec<(i64, String)>,
}

#[derive(Serialize)]
pub struct Trace {
    pub outcome: String,
    pub summary: String,
    pub steps: u64,
    pub period: Option<u64>,
    pub frames: Vec<Frame>,
    pub truncated: bool,
}

/// Runs a machine from source, keeping up to `max_frames` configurations
/// for a space-time diagram. An empty `input` uses the file's own.
pub fn run_machine(
    src: &str,
    input: &str,
    budget: u64,
    max_frames: usize,
) -> Result<Trace, String> {
    let def = parse_machine(src).map_err(|e| e.to_string())?;
    let m = &def.machine;
    let tape = if input.trim().is_empty() {
        def.input.clone()
    } else {
        parse_input(m, input).map_err(|e| e.to_string())?
    };
    let mut run = Execution::new(m, m.initial_id(&tape), budget);
    let frame = |id: &gu_core::machine::Id| Frame {
        state: m.state_name(id.state).to_owned(),
        head: id.head,
        cells: id
            .cells()
            .map(|(c, s)| (c, m.symbol_name(s).to_owned()))
            .collect(),
    };
    let mut frames = vec![frame(run.current())];
    let outcome = loop {
        let before = run.steps();
        let outcome = run.advance().map_err(|e| e.to_string())?.cloned();
        if run.steps() > before && frames.len() < max_frames {
            frames.push(frame(run.current()));
        }
        if let Some(o) = outcome {
            break o;
        }
    };
    let (steps, period) = match &outcome {
        RunOutcome::Halted { steps, .. } => (*steps, None),
        RunOutcome::LoopDetected {
            first_repeat_step,
            period,
        } => (*first_repeat_step, Some(*period)),
        RunOutcome::BudgetExceeded { budget } => (*budget, None),
    };
    Ok(Trace {
        outcome: outcome.kind().to_owned(),
        summary: outcome.to_string(),
        steps,
        period,
        truncated: (frames.len() as u64) < steps + 1,
        frames,
    })
}
