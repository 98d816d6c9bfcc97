use std::path::PathBuf;
use std::sync::Arc;

use clap::Args;
use gu_core::dovetail::{dovetail, make_t1, make_t2, DovetailOutcome, Evaluator, MachineFunction};
use gu_core::machine::{parse_machine, RunOutcome};
use serde_json::json;

use super::Ctx;
use crate::error::{read_file, CliError};

#[derive(Args, Debug)]
pub struct DovetailArgs {
    /// `zero-of:FILE` searches y with g(args, y) = 0, `nonzero-of:FILE`
    /// searches y with g(args, y) != 0. Repeatable.
    #[arg(long = "task", required = true)]
    pub tasks: Vec<String>,
    /// Fixed arguments, comma-separated.
    #[arg(long, default_value = "")]
    pub args: String,
    #[arg(long, default_value_t = 1000)]
    pub sub_budget: u64,
    /// Number of scheduler rounds.
    #[arg(long, default_value_t = 10_000)]
    pub global_budget: u64,
    /// Trials per task; unlimited when absent.
    #[arg(long)]
    pub max_trials: Option<u64>,
}

pub const COLUMNS: [&str; 10] = [
    "record",
    "task",
    "label",
    "trial",
    "steps",
    "value",
    "trials_started",
    "rejected",
    "loops",
    "budget_exceeded",
];

fn parse_args(s: &str) -> Result<Vec<u64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| CliError::Usage(format!("bad argument `{t}`")))
        })
        .collect()
}

pub fn exec(a: &DovetailArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    let args = parse_args(&a.args)?;
    ctx.manifest.input("args", json!(args));
    ctx.manifest.input("sub_budget", a.sub_budget);
    ctx.manifest.input("global_budget", a.global_budget);
    ctx.manifest.input("max_trials", json!(a.max_trials));
    let mut specs = Vec::new();
    let mut tasks = Vec::new();
    let mut evaluators = Vec::new();
    for spec in &a.tasks {
        let (kind, file) = spec
            .split_once(':')
            .ok_or_else(|| CliError::Usage(format!("task `{spec}` is not KIND:FILE")))?;
        let path = PathBuf::from(file);
        let resolved = path.canonicalize().unwrap_or_else(|_| path.clone());
        specs.push(json!(format!("{kind}:{}", resolved.display())));
        let def = parse_machine(&read_file(&path)?).map_err(|source| CliError::Parse {
            path: file.to_owned(),
            source,
        })?;
        let g: Arc<dyn Evaluator> = Arc::new(MachineFunction::new(def.machine, a.sub_budget)?);
        evaluators.push(g.clone());
        let task = match kind {
            "zero-of" => make_t1(g, args.clone()),
            "nonzero-of" => make_t2(g, args.clone()),
            other => return Err(CliError::Usage(format!("unknown task kind `{other}`"))),
        };
        tasks.push(match a.max_trials {
            Some(n) => task.with_max_trials(n),
            None => task,
        });
    }
    ctx.manifest.input("tasks", specs);

    let outcome = dovetail(&tasks, a.sub_budget, a.global_budget)?;
    let mut t = ctx.table(&COLUMNS)?;
    let summary = match &outcome {
        DovetailOutcome::FirstSuccess {
            task_id,
            trial,
            evidence,
        } => {
            let RunOutcome::Halted { steps, final_id } = evidence else {
                unreachable!("accepted runs halt");
            };
            t.row(&[
                ("record", json!("success")),
                ("task", json!(task_id)),
                ("label", json!(tasks[*task_id].label)),
                ("trial", json!(trial)),
                ("steps", json!(steps)),
                ("value", json!(evaluators[*task_id].decode(final_id))),
            ])?;
            format!("task {task_id} succeeded at trial {trial}")
        }
        DovetailOutcome::AllExhausted(status) => {
            for s in status {
                t.row(&[
                    ("record", json!("exhausted")),
                    ("task", json!(s.task_id)),
                    ("label", json!(tasks[s.task_id].label)),
                    ("trials_started", json!(s.trials_started)),
                    ("rejected", json!(s.rejected)),
                    ("loops", json!(s.loops)),
                    ("budget_exceeded", json!(s.budget_exceeded)),
                ])?;
            }
            "all tasks exhausted".to_owned()
        }
        DovetailOutcome::GlobalBudgetExceeded { rounds } => {
            t.row(&[("record", json!("global_budget")), ("steps", json!(rounds))])?;
            format!("no success within {rounds} rounds")
        }
    };
    t.finish()?;
    ctx.manifest.outcome = summary;
    Ok(0)
}
