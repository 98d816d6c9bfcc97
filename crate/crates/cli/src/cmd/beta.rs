use clap::Subcommand;
use gu_core::beta::{
    beta_encode, beta_eval, matches_iter, next_value_distribution, superpose, BetaError, BetaPair,
    TaggedSequence, ValueSequence,
};
use num_bigint::BigUint;
use serde_json::json;

use super::{parse_range, Ctx};
use crate::error::CliError;

#[derive(Subcommand, Debug)]
pub enum BetaCmd {
    /// Find (b, c) whose β-values reproduce SEQ, e.g. `3,1,4`.
    Encode { seq: String },
    /// β(b, c, i) for each index in RANGE (`0..5`, `2..=4` or `3`).
    Eval {
        b: String,
        c: String,
        #[arg(default_value = "0..1")]
        range: String,
    },
    /// Every pair within the bound reproducing SEQ, in (c, b) order.
    Matches {
        seq: String,
        #[arg(long)]
        bound: u64,
    },
    /// Distribution of the next value over all matching pairs.
    Predict {
        seq: String,
        #[arg(long)]
        bound: u64,
    },
    /// Merge two tagged sequences (`tag:value,...`) by tag.
    Superpose { a: String, b: String },
}

fn seq(s: &str) -> Result<ValueSequence, CliError> {
    Ok(s.parse::<ValueSequence>()?)
}

fn big(s: &str) -> Result<BigUint, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Beta(BetaError::BadNumber(s.to_owned())))
}

pub fn exec(cmd: &BetaCmd, ctx: &mut Ctx) -> Result<i32, CliError> {
    match cmd {
        BetaCmd::Encode { seq: s } => {
            ctx.manifest.subcommand.push_str(" encode");
            ctx.manifest.input("seq", s.as_str());
            let pair = beta_encode(&seq(s)?);
            let mut t = ctx.table(&["b", "c"])?;
            t.row(&[
                ("b", json!(pair.b().to_string())),
                ("c", json!(pair.c().to_string())),
            ])?;
            t.finish()?;
            ctx.manifest.outcome = format!("c has {} digits", pair.c().to_string().len());
        }
        BetaCmd::Eval { b, c, range } => {
            ctx.manifest.subcommand.push_str(" eval");
            ctx.manifest.input("b", b.as_str());
            ctx.manifest.input("c", c.as_str());
            ctx.manifest.input("range", range.as_str());
            let pair = BetaPair::new(big(b)?, big(c)?)?;
            let range = parse_range(range).map_err(CliError::Usage)?;
            let mut t = ctx.table(&["i", "value"])?;
            for i in range.clone() {
                t.row(&[
                    ("i", json!(i)),
                    ("value", json!(beta_eval(&pair, i).to_string())),
                ])?;
            }
            t.finish()?;
            ctx.manifest.outcome = format!("{} values", range.end.saturating_sub(range.start));
        }
        BetaCmd::Matches { seq: s, bound } => {
            ctx.manifest.subcommand.push_str(" matches");
            ctx.manifest.input("seq", s.as_str());
            ctx.manifest.input("bound", *bound);
            let sq = seq(s)?;
            if *bound == 0 {
                return Err(BetaError::ZeroBound.into());
            }
            let mut t = ctx.table(&["c", "b"])?;
            for (b, c) in matches_iter(&sq, *bound) {
                t.row(&[("c", json!(c)), ("b", json!(b))])?;
            }
            let n = t.rows;
            t.finish()?;
            ctx.manifest.outcome = format!("{n} matches");
        }
        BetaCmd::Predict { seq: s, bound } => {
            ctx.manifest.subcommand.push_str(" predict");
            ctx.manifest.input("seq", s.as_str());
            ctx.manifest.input("bound", *bound);
            let d = next_value_distribution(&seq(s)?, *bound)?;
            let mut t = ctx.table(&["value", "count", "total", "frequency", "probability"])?;
            for (value, f) in d.frequencies() {
                t.row(&[
                    ("value", json!(value)),
                    ("count", json!(d.counts[&value])),
                    ("total", json!(d.total)),
                    ("frequency", json!(f.to_string())),
                    ("probability", json!(*f.numer() as f64 / *f.denom() as f64)),
                ])?;
            }
            t.finish()?;
            ctx.manifest.outcome = format!("{} outcomes over {} pairs", d.counts.len(), d.total);
        }
        BetaCmd::Superpose { a, b } => {
            ctx.manifest.subcommand.push_str(" superpose");
            ctx.manifest.input("a", a.as_str());
            ctx.manifest.input("b", b.as_str());
            let a: TaggedSequence = a.parse()?;
            let b: TaggedSequence = b.parse()?;
            let merged = superpose(&a, &b)?;
            let mut t = ctx.table(&["index", "tag", "value"])?;
            for (i, (tag, value)) in merged.entries().iter().enumerate() {
                t.row(&[
                    ("index", json!(i)),
                    ("tag", json!(tag)),
                    ("value", json!(value)),
                ])?;
            }
            t.finish()?;
            ctx.manifest.outcome = format!("{} entries", merged.len());
        }
    }
    Ok(0)
}
