use clap::Subcommand;
use gu_core::collapse::{make_horizon_machine, Predicate};
use serde_json::json;

use super::{parse_range, Ctx};
use crate::error::CliError;

#[derive(Subcommand, Debug)]
pub enum CollapseCmd {
    /// Evaluate a horizon machine before and after measurements.
    Demo {
        /// `parity`, `pi`, `const:V` or `mod:M`.
        #[arg(long)]
        pred: String,
        /// Initial horizon.
        #[arg(long)]
        k: u64,
        /// Inputs to measure, applied in order. Repeatable.
        #[arg(long)]
        measure: Vec<u64>,
        /// Inputs to evaluate (`0..10`, `0..=10` or `4`).
        #[arg(long, default_value = "0..10")]
        eval: String,
    },
}

pub const COLUMNS: [&str; 5] = ["n", "predicate", "before", "after", "collapsed"];

pub fn exec(cmd: &CollapseCmd, ctx: &mut Ctx) -> Result<i32, CliError> {
    let CollapseCmd::Demo {
        pred,
        k,
        measure,
        eval,
    } = cmd;
    ctx.manifest.subcommand.push_str(" demo");
    ctx.manifest.input("pred", pred.as_str());
    ctx.manifest.input("k", *k);
    ctx.manifest.input("measure", json!(measure));
    ctx.manifest.input("eval", eval.as_str());
    let predicate: Predicate = pred.parse()?;
    let range = parse_range(eval).map_err(CliError::Usage)?;
    let before = make_horizon_machine(predicate, *k)?;
    let after = measure.iter().fold(before.clone(), |hm, n| hm.measure(*n));

    let mut t = ctx.table(&COLUMNS)?;
    for n in range {
        let (b, a) = (before.evaluate(n), after.evaluate(n));
        t.row(&[
            ("n", json!(n)),
            ("predicate", json!(predicate.eval(n))),
            ("before", json!(b.to_string())),
            ("after", json!(a.to_string())),
            ("collapsed", json!(b != a)),
        ])?;
    }
    t.finish()?;
    let history: Vec<String> = after.history().iter().map(u64::to_string).collect();
    ctx.manifest.outcome = format!("horizons {}", history.join(" -> "));
    Ok(0)
}
