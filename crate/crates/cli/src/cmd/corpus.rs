use std::path::{Path, PathBuf};

use clap::Subcommand;
use gu_core::machine::{
    canonicalize, parse_machine, run_with_loop_detection, step, CanonicalId, Id, Machine,
    MachineBuilder, Move, RunOutcome, StateId, Step, Symbol,
};
use gu_core::universe::{check_predictability_obstruction, UniverseConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::Ctx;
use crate::error::{read_file, CliError};

#[derive(Subcommand, Debug)]
pub enum CorpusCmd {
    /// Check every shipped machine against its manifest and re-simulate
    /// seeded random machines without loop detection.
    Verify {
        /// Corpus root holding `machines/` and `universes/`.
        #[arg(long, default_value = gu_core::CORPUS_DIR)]
        dir: PathBuf,
        /// Random machines to cross-check.
        #[arg(long, default_value_t = 200)]
        random: u64,
    },
}

pub const COLUMNS: [&str; 7] = [
    "record", "name", "expected", "outcome", "steps", "period", "status",
];

/// Steps `id` up to `limit` times with no loop detection. Returns the
/// step count at which it halted, if it did.
fn plain_halt(m: &Machine, id: &Id, limit: u64) -> Result<Option<u64>, CliError> {
    let mut cur = id.clone();
    for s in 0..=limit {
        match step(m, &cur)? {
            Step::Halted => return Ok(Some(s)),
            Step::Next(n) => cur = n,
        }
    }
    Ok(None)
}

/// Canonical configuration after exactly `n` plain steps.
fn plain_at(m: &Machine, id: &Id, n: u64) -> Result<Option<CanonicalId>, CliError> {
    let mut cur = id.clone();
    for _ in 0..n {
        match step(m, &cur)? {
            Step::Halted => return Ok(None),
            Step::Next(next) => cur = next,
        }
    }
    Ok(Some(canonicalize(&cur)))
}

/// Independent confirmation of a verdict by plain simulation.
fn confirm(m: &Machine, id: &Id, outcome: &RunOutcome, budget: u64) -> Result<bool, CliError> {
    Ok(match outcome {
        RunOutcome::Halted { steps, .. } => plain_halt(m, id, *steps)? == Some(*steps),
        RunOutcome::LoopDetected {
            first_repeat_step,
            period,
        } => {
            let a = plain_at(m, id, first_repeat_step - period)?;
            let b = plain_at(m, id, *first_repeat_step)?;
            a.is_some() && a == b && plain_halt(m, id, 10 * budget)?.is_none()
        }
        RunOutcome::BudgetExceeded { budget } => plain_halt(m, id, *budget)?.is_none(),
    })
}

fn random_machine(rng: &mut ChaCha8Rng) -> Result<Machine, CliError> {
    let states = rng.gen_range(1..=4);
    let symbols = rng.gen_range(2..=3);
    let sym = |i: usize| {
        if i == 0 {
            "_".to_owned()
        } else {
            i.to_string()
        }
    };
    let mut b = MachineBuilder::new();
    b.start("s0");
    for s in 0..states {
        b.state(format!("s{s}"));
    }
    for a in 0..symbols {
        b.symbol(sym(a));
    }
    for s in 0..states {
        for a in 0..symbols {
            if rng.gen_ratio(4, 5) {
                let next = format!("s{}", rng.gen_range(0..states));
                let write = sym(rng.gen_range(0..symbols));
                let mv = if rng.gen_bool(0.5) {
                    Move::Left
                } else {
                    Move::Right
                };
                b.rule(&format!("s{s}"), &sym(a), &next, &write, mv);
            }
        }
    }
    Ok(b.build()?)
}

fn random_id(m: &Machine, rng: &mut ChaCha8Rng) -> Id {
    let mut id = Id::blank(StateId(rng.gen_range(0..m.states() as u32)));
    for cell in 0..rng.gen_range(0..8) {
        id.write(cell, Symbol(rng.gen_range(0..m.symbols() as u32)));
    }
    id.head = rng.gen_range(-3..10);
    id
}

struct Row {
    file: String,
    expected: String,
    steps: Option<u64>,
    period: Option<u64>,
    budget: u64,
}

fn manifest_rows(dir: &Path) -> Result<Vec<Row>, CliError> {
    let path = dir.join("manifest.csv");
    let text = read_file(&path)?;
    let bad = |msg: String| CliError::Verify(format!("{}: {msg}", path.display()));
    let mut rows = Vec::new();
    for rec in csv::Reader::from_reader(text.as_bytes()).records() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let opt = |i: usize| -> Result<Option<u64>, CliError> {
            match rec.get(i).unwrap_or("") {
                "" => Ok(None),
                s => s
                    .parse()
                    .map(Some)
                    .map_err(|_| bad(format!("bad number `{s}`"))),
            }
        };
        rows.push(Row {
            file: rec.get(0).unwrap_or("").to_owned(),
            expected: rec.get(1).unwrap_or("").to_owned(),
            steps: opt(2)?,
            period: opt(3)?,
            budget: opt(4)?.ok_or_else(|| bad("missing budget".into()))?,
        });
    }
    Ok(rows)
}

pub fn exec(cmd: &CorpusCmd, ctx: &mut Ctx) -> Result<i32, CliError> {
    let CorpusCmd::Verify { dir, random } = cmd;
    ctx.manifest.subcommand.push_str(" verify");
    ctx.manifest.path("dir", dir);
    ctx.manifest.input("random", *random);
    let seed = ctx.manifest.seed;
    let machines = dir.join("machines");
    let rows = manifest_rows(&machines)?;

    let mut t = ctx.table(&COLUMNS)?;
    let mut failures = Vec::new();
    for row in &rows {
        let path = machines.join(&row.file);
        let def = parse_machine(&read_file(&path)?).map_err(|source| CliError::Parse {
            path: path.display().to_string(),
            source,
        })?;
        let input = def.initial_id();
        let outcome = run_with_loop_detection(&def.machine, &input, row.budget)?;
        let (steps, period) = match &outcome {
            RunOutcome::Halted { steps, .. } => (Some(*steps), None),
            RunOutcome::LoopDetected {
                first_repeat_step,
                period,
            } => (Some(*first_repeat_step), Some(*period)),
            RunOutcome::BudgetExceeded { .. } => (None, None),
        };
        let kind = match outcome.kind() {
            "halted" => "halt",
            "loop" => "loop",
            _ => "diverge",
        };
        let ok = kind == row.expected
            && steps == row.steps
            && period == row.period
            && confirm(&def.machine, &input, &outcome, row.budget)?
            && (kind != "diverge" || plain_halt(&def.machine, &input, 10 * row.budget)?.is_none());
        if !ok {
            failures.push(row.file.clone());
        }
        t.row(&[
            ("record", json!("machine")),
            ("name", json!(row.file)),
            ("expected", json!(row.expected)),
            ("outcome", json!(kind)),
            ("steps", json!(steps)),
            ("period", json!(period)),
            ("status", json!(if ok { "pass" } else { "fail" })),
        ])?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = [0u64; 3];
    let mut random_ok = true;
    for _ in 0..*random {
        let m = random_machine(&mut rng)?;
        let id = random_id(&m, &mut rng);
        let outcome = run_with_loop_detection(&m, &id, 200)?;
        counts[match outcome {
            RunOutcome::Halted { .. } => 0,
            RunOutcome::LoopDetected { .. } => 1,
            RunOutcome::BudgetExceeded { .. } => 2,
        }] += 1;
        random_ok &= confirm(&m, &id, &outcome, 200)?;
    }
    if !random_ok {
        failures.push("random".into());
    }
    t.row(&[
        ("record", json!("random")),
        ("name", json!(format!("seed={seed}"))),
        ("expected", json!(random)),
        (
            "outcome",
            json!(format!(
                "halt={} loop={} diverge={}",
                counts[0], counts[1], counts[2]
            )),
        ),
        ("status", json!(if random_ok { "pass" } else { "fail" })),
    ])?;

    let universes = dir.join("universes");
    let mut configs: Vec<PathBuf> = std::fs::read_dir(&universes)
        .map_err(|source| CliError::Io {
            path: universes.display().to_string(),
            source,
        })?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    configs.sort();
    for path in configs {
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let built = UniverseConfig::from_json(&read_file(&path)?).and_then(|c| c.build(&universes));
        let (outcome, ok) = match built {
            Ok(u) => (check_predictability_obstruction(&u).class.to_string(), true),
            Err(e) => (e.to_string(), false),
        };
        if !ok {
            failures.push(name.clone());
        }
        t.row(&[
            ("record", json!("universe")),
            ("name", json!(name)),
            ("outcome", json!(outcome)),
            ("status", json!(if ok { "pass" } else { "fail" })),
        ])?;
    }
    t.finish()?;

    ctx.manifest.outcome = format!(
        "{} machines, {random} random, {} failures",
        rows.len(),
        failures.len()
    );
    if failures.is_empty() {
        Ok(0)
    } else {
        Err(CliError::Verify(format!(
            "corpus mismatch: {}",
            failures.join(",")
        )))
    }
}
