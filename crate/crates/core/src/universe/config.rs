//! JSON universe configuration.
//!
//! ```json
//! {
//!   "name": "two-particle",
//!   "properties": ["mass", "spin"],
//!   "steps": 5, "window": 3, "bound": 10000,
//!   "particles": [
//!     { "id": 0,
//!       "providers": { "mass": "uniform:constant,value=3",
//!                      "spin": "horizon:parity,k0=4" },
//!       "initial": {} }
//!   ]
//! }
//! ```
//!
//! Provider specs are `uniform:<rule>[,key=value...]` with rules
//! `constant,value=V`, `counter,step=S`, `affine,a=A,b=B,m=M`,
//! `table,values=V1|V2|...` and `machine,file=F,budget=N`; or
//! `horizon:<predicate>,k0=K`. Counter and affine rules take their first
//! value from `initial` (default 0).

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{Particle, PropertyId, Registry, Rule, Universe, UniverseError, ValueProvider};
use crate::collapse::{make_horizon_machine, Predicate};
use crate::machine::parse_machine;

fn default_steps() -> u64 {
    8
}

fn default_window() -> usize {
    3
}

fn default_bound() -> u64 {
    10_000
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseConfig {
    #[serde(default)]
    pub name: String,
    pub properties: Vec<String>,
    #[serde(default = "default_steps")]
    pub steps: u64,
    #[serde(default = "default_window")]
    pub window: usize,
    #[serde(default = "default_bound")]
    pub bound: u64,
    pub particles: Vec<ParticleConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleConfig {
    pub id: u64,
    pub providers: BTreeMap<String, String>,
    #[serde(default)]
    pub initial: BTreeMap<String, u64>,
}

impl UniverseConfig {
    pub fn from_json(src: &str) -> Result<Self, UniverseError> {
        serde_json::from_str(src).map_err(|e| UniverseError::Config(e.to_string()))
    }

    /// Builds the universe; machine files resolve relative to `base_dir`.
    pub fn build(&self, base_dir: &Path) -> Result<Universe, UniverseError> {
        let mut registry = Registry::new();
        for name in &self.properties {
            registry.register(name)?;
        }
        let mut particles = Vec::with_capacity(self.particles.len());
        for pc in &self.particles {
            for name in pc.initial.keys() {
                if !pc.providers.contains_key(name) {
                    return Err(UniverseError::UnknownProperty(name.clone()));
                }
            }
            let mut particle = Particle::new(pc.id);
            for (name, spec) in &pc.providers {
                let k = registry
                    .number(name)
                    .ok_or_else(|| UniverseError::UnknownProperty(name.clone()))?;
                let provider = parse_provider(spec, pc.initial.get(name).copied(), base_dir)?;
                particle.providers.insert(PropertyId(k), provider);
            }
            particles.push(particle);
        }
        Universe::new(registry, particles)
    }
}

fn params(spec: &str, parts: &[&str]) -> Result<BTreeMap<String, String>, UniverseError> {
    parts
        .iter()
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_owned(), v.trim().to_owned()))
                .ok_or_else(|| UniverseError::BadProvider {
                    spec: spec.to_owned(),
                    reason: format!("expected key=value, got `{p}`"),
                })
        })
        .collect()
}

pub fn parse_provider(
    spec: &str,
    initial: Option<u64>,
    base_dir: &Path,
) -> Result<ValueProvider, UniverseError> {
    let bad = |reason: String| UniverseError::BadProvider {
        spec: spec.to_owned(),
        reason,
    };
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected `uniform:` or `horizon:` prefix".into()))?;
    let mut parts = rest.split(',').map(str::trim);
    let head = parts.next().unwrap_or_default();
    let tail: Vec<&str> = parts.collect();
    let kv = params(spec, &tail)?;
    let num = |key: &str| -> Result<u64, UniverseError> {
        kv.get(key)
            .ok_or_else(|| bad(format!("missing `{key}`")))?
            .parse()
            .map_err(|_| bad(format!("`{key}` is not a natural number")))
    };
    let num_or = |key: &str, default: u64| {
        if kv.contains_key(key) {
            num(key)
        } else {
            Ok(default)
        }
    };

    let provider = match kind {
        "uniform" => {
            let rule = match head {
                "constant" => Rule::Constant(num("value")?),
                "counter" => Rule::Counter {
                    step: num_or("step", 1)?,
                },
                "affine" => {
                    let modulus = num("m")?;
                    if modulus == 0 {
                        return Err(bad("modulus must be positive".into()));
                    }
                    Rule::Affine {
                        a: num_or("a", 1)?,
                        b: num_or("b", 0)?,
                        modulus,
                    }
                }
                "table" => {
                    let values = kv
                        .get("values")
                        .ok_or_else(|| bad("missing `values`".into()))?
                        .split('|')
                        .map(|v| {
                            v.trim()
                                .parse::<u64>()
                                .map_err(|_| bad(format!("bad table value `{v}`")))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    if values.is_empty() {
                        return Err(bad("table must not be empty".into()));
                    }
                    Rule::Table(values)
                }
                "machine" => {
                    let file = kv.get("file").ok_or_else(|| bad("missing `file`".into()))?;
                    let path = base_dir.join(file);
                    let src = std::fs::read_to_string(&path)
                        .map_err(|e| bad(format!("{}: {e}", path.display())))?;
                    let def =
                        parse_machine(&src).map_err(|e| bad(format!("{}:{e}", path.display())))?;
                    Rule::Machine {
                        machine: Arc::new(def.machine),
                        budget: num_or("budget", 1000)?,
                    }
                }
                other => return Err(bad(format!("unknown rule `{other}`"))),
            };
            let recurrent = matches!(rule, Rule::Counter { .. } | Rule::Affine { .. });
            let provider = ValueProvider::Uniform {
                rule,
                initial: initial.unwrap_or(0),
            };
            if recurrent {
                return Ok(provider);
            }
            provider
        }
        "horizon" => {
            let predicate: Predicate = head.parse()?;
            ValueProvider::Horizon(make_horizon_machine(predicate, num("k0")?)?)
        }
        other => return Err(bad(format!("unknown provider kind `{other}`"))),
    };
    if let Some(v) = initial {
        let first = provider.value_at(0);
        if first.value() != Some(v) {
            return Err(bad(format!(
                "initial value {v} disagrees with the rule's value {first} at t = 0"
            )));
        }
    }
    Ok(provider)
}
