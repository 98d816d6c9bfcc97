use std::path::PathBuf;

use clap::Args;
use gu_core::machine::{
    canonicalize, parse_input, parse_machine, Execution, Id, Machine, RunOutcome,
};
use serde_json::{json, Value};

use super::Ctx;
use crate::error::{read_file, CliError};

#[derive(Args, Debug)]
pub struct RunArgs {
    /// Machine source file.
    pub machine: PathBuf,
    /// Input symbols, separated by spaces or commas (`1 1 _ 1`, or `111`
    /// for one-character names). Overrides the file's `input:` line.
    #[arg(long)]
    pub input: Option<String>,
    /// Starting head cell; the input begins at cell 0.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub head: i64,
    #[arg(long, default_value_t = 1000)]
    pub budget: u64,
    /// Emit every visited configuration in canonical form.
    #[arg(long)]
    pub trace: bool,
}

pub const COLUMNS: [&str; 7] = [
    "record", "step", "state", "head", "tape", "outcome", "period",
];

fn id_cells(machine: &Machine, id: &Id) -> [(&'static str, Value); 3] {
    let rendered = id.render(machine);
    let tape = rendered.split_once(": ").map_or("", |(_, t)| t).to_owned();
    [
        ("state", json!(machine.state_name(id.state))),
        ("head", json!(id.head)),
        ("tape", json!(tape)),
    ]
}

pub fn exec(args: &RunArgs, ctx: &mut Ctx) -> Result<i32, CliError> {
    ctx.manifest.path("machine", &args.machine);
    ctx.manifest.input("budget", args.budget);
    ctx.manifest.input("head", args.head);
    ctx.manifest.input("trace", args.trace);
    let src = read_file(&args.machine)?;
    let def = parse_machine(&src).map_err(|source| CliError::Parse {
        path: args.machine.display().to_string(),
        source,
    })?;
    let input = match &args.input {
        Some(spec) => {
            ctx.manifest.input("input", spec.as_str());
            parse_input(&def.machine, spec)?
        }
        None => def.input.clone(),
    };
    let mut id = def.machine.initial_id(&input);
    id.head = args.head;

    let machine = &def.machine;
    let mut table = ctx.table(&COLUMNS)?;
    let mut run = Execution::new(machine, id, args.budget);
    let mut trace_row = |step: u64, id: &Id| -> std::io::Result<()> {
        let canon = canonicalize(id);
        let mut cells = vec![("record", json!("id")), ("step", json!(step))];
        cells.extend(id_cells(machine, canon.as_id()));
        table.row(&cells)
    };
    if args.trace {
        trace_row(0, run.current())?;
    }
    let outcome = loop {
        let before = run.steps();
        let outcome = run.advance()?.cloned();
        if args.trace && run.steps() > before {
            trace_row(run.steps(), run.current())?;
        }
        if let Some(o) = outcome {
            break o;
        }
    };
    let mut cells = vec![
        ("record", json!("outcome")),
        ("outcome", json!(outcome.kind())),
    ];
    let code = match &outcome {
        RunOutcome::Halted { steps, final_id } => {
            cells.push(("step", json!(steps)));
            cells.extend(id_cells(machine, final_id));
            0
        }
        RunOutcome::LoopDetected {
            first_repeat_step,
            period,
        } => {
            cells.push(("step", json!(first_repeat_step)));
            cells.push(("period", json!(period)));
            2
        }
        RunOutcome::BudgetExceeded { budget } => {
            cells.push(("step", json!(budget)));
            3
        }
    };
    table.row(&cells)?;
    table.finish()?;
    ctx.manifest.outcome = outcome.to_string();
    Ok(code)
}
