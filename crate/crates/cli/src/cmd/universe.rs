use std::path::PathBuf;

use clap::Subcommand;
use gu_core::universe::{
    check_predestination_sufficient, check_predictability_obstruction, predictability_report,
    step_universe, Signature, Universe, UniverseConfig,
};
use serde_json::json;

use super::Ctx;
use crate::error::{read_file, CliError};

#[derive(Subcommand, Debug)]
pub enum UniverseCmd {
    /// Simulate a configured universe and report its classification.
    Sim {
        #[arg(long)]
        config: PathBuf,
        /// Interactions to simulate; defaults to the config's `steps`.
        #[arg(long)]
        steps: Option<u64>,
        #[arg(long)]
        window: Option<usize>,
        /// β search bound for the pre-destination check.
        #[arg(long)]
        bound: Option<u64>,
    },
}

pub const COLUMNS: [&str; 8] = [
    "record",
    "particle",
    "interaction",
    "signature",
    "class",
    "fundamental",
    "predestined",
    "verdicts",
];

fn render(u: &Universe, sig: &Signature) -> String {
    sig.assignment
        .iter()
        .map(|(k, a)| format!("{}={a}", u.registry().name(k.0).unwrap_or("?")))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn exec(cmd: &UniverseCmd, ctx: &mut Ctx) -> Result<i32, CliError> {
    let UniverseCmd::Sim {
        config,
        steps,
        window,
        bound,
    } = cmd;
    ctx.manifest.subcommand.push_str(" sim");
    ctx.manifest.path("config", config);
    let cfg = UniverseConfig::from_json(&read_file(config)?)?;
    let base = config.parent().unwrap_or_else(|| std::path::Path::new("."));
    let u0 = cfg.build(base)?;
    let steps = steps.unwrap_or(cfg.steps);
    let window = window.unwrap_or(cfg.window);
    let bound = bound.unwrap_or(cfg.bound);
    ctx.manifest.input("steps", steps);
    ctx.manifest.input("window", window);
    ctx.manifest.input("bound", bound);
    if steps == 0 {
        return Err(CliError::Usage("steps must be positive".into()));
    }

    let mut u = u0;
    for _ in 1..steps {
        u = step_universe(&u);
    }
    let mut t = ctx.table(&COLUMNS)?;
    for p in u.particles() {
        for s in 0..steps {
            let sig = u.signature(p.id, s)?;
            t.row(&[
                ("record", json!("signature")),
                ("particle", json!(p.id)),
                ("interaction", json!(s)),
                ("signature", json!(render(&u, &sig))),
            ])?;
        }
    }
    let obstruction = check_predictability_obstruction(&u);
    let predestined = check_predestination_sufficient(&u, steps - 1, bound).holds;
    let verdicts = predictability_report(&u, steps, window)
        .iter()
        .map(|e| format!("{}.{}={}", e.particle, e.name, e.verdict))
        .collect::<Vec<_>>()
        .join(";");
    t.row(&[
        ("record", json!("report")),
        ("class", json!(obstruction.class.to_string())),
        ("fundamental", json!(obstruction.fundamental_count)),
        ("predestined", json!(predestined)),
        ("verdicts", json!(verdicts)),
    ])?;
    t.finish()?;
    ctx.manifest.outcome = format!("{} over {steps} interactions", obstruction.class);
    Ok(0)
}
