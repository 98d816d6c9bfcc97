//! A deterministic universe of particles whose properties take natural
//! values at successive interactions.
//!
//! Properties are Gödel-numbered by a [`Registry`]. Each particle carries one
//! [`ValueProvider`] per property: either a uniform rule that answers every
//! interaction, or a horizon machine that answers only below its horizon.
//! A [`Signature`] is the complete property-to-value assignment of one
//! particle at one interaction; the sequence of signatures is its world-line.

mod config;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::beta::{beta_eval, fit_characteristic_beta, BetaPair, ValueSequence};
use crate::collapse::{CollapseError, Evaluation, HorizonMachine};
use crate::machine::{count_ones, run_with_loop_detection, unary_input, Machine, RunOutcome};

pub use config::{parse_provider, ParticleConfig, UniverseConfig};

#[derive(Debug, Error)]
pub enum UniverseError {
    #[error("unknown particle {0}")]
    UnknownParticle(u64),
    #[error("duplicate particle {0}")]
    DuplicateParticle(u64),
    #[error("property names must not be empty")]
    EmptyName,
    #[error("unknown property `{0}`")]
    UnknownProperty(String),
    #[error("property {0} of particle {1} is not horizon-backed")]
    NotHorizon(u64, u64),
    #[error("bad provider spec `{spec}`: {reason}")]
    BadProvider { spec: String, reason: String },
    #[error(transparent)]
    Collapse(#[from] CollapseError),
    #[error("config: {0}")]
    Config(String),
}

/// Gödel number of a property. `0` is reserved for "not a property".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PropertyId(pub u64);

/// Bijective numbering of names, in order of first registration from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Registry {
    forward: BTreeMap<String, u64>,
    backward: Vec<String>,
}

impl Registry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, name: &str) -> Result<u64, UniverseError> {
        if name.is_empty() {
            return Err(UniverseError::EmptyName);
        }
        if let Some(n) = self.forward.get(name) {
            return Ok(*n);
        }
        self.backward.push(name.to_owned());
        let n = self.backward.len() as u64;
        self.forward.insert(name.to_owned(), n);
        Ok(n)
    }

    pub fn number(&self, name: &str) -> Option<u64> {
        self.forward.get(name).copied()
    }

    pub fn name(&self, number: u64) -> Option<&str> {
        let idx = usize::try_from(number).ok()?.checked_sub(1)?;
        self.backward.get(idx).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.backward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.backward.is_empty()
    }

    /// Registered entries in numbering order.
    pub fn entries(&self) -> impl Iterator<Item = (u64, &str)> {
        self.backward
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u64 + 1, s.as_str()))
    }
}

/// Dynamics of a uniformly computable property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Constant(u64),
    /// `m_t = m_0 + step·t`.
    Counter {
        step: u64,
    },
    /// `m_{t+1} = (a·m_t + b) mod modulus`.
    Affine {
        a: u64,
        b: u64,
        modulus: u64,
    },
    /// `m_t = values[t mod len]`.
    Table(Vec<u64>),
    /// `m_t` is the number of `1`s the machine leaves on input `1^t`.
    /// Runs that do not halt within `budget` answer vacuously.
    Machine {
        machine: Arc<Machine>,
        budget: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueProvider {
    Uniform { rule: Rule, initial: u64 },
    Horizon(HorizonMachine),
}

/// One property's value in a signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Answer {
    Value(u64),
    Vacuous,
    HorizonExceeded,
}

impl Answer {
    pub fn value(self) -> Option<u64> {
        match self {
            Answer::Value(v) => Some(v),
            _ => None,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Value(v) => write!(f, "{v}"),
            Answer::Vacuous => f.write_str("vacuous"),
            Answer::HorizonExceeded => f.write_str("horizon"),
        }
    }
}

impl ValueProvider {
    pub fn is_uniform(&self) -> bool {
        matches!(self, ValueProvider::Uniform { .. })
    }

    pub fn value_at(&self, t: u64) -> Answer {
        match self {
            ValueProvider::Uniform { rule, initial } => match rule {
                Rule::Constant(v) => Answer::Value(*v),
                Rule::Counter { step } => Answer::Value(initial + step * t),
                Rule::Affine { a, b, modulus } => {
                    let m = u128::from(*modulus);
                    let mut v = u128::from(*initial);
                    for _ in 0..t {
                        v = (u128::from(*a) * v + u128::from(*b)) % m;
                    }
                    Answer::Value(v as u64)
                }
                Rule::Table(values) => Answer::Value(values[(t % values.len() as u64) as usize]),
                Rule::Machine { machine, budget } => {
                    let input = machine.initial_id(&unary_input(t));
                    match run_with_loop_detection(machine, &input, *budget) {
                        Ok(RunOutcome::Halted { final_id, .. }) => {
                            Answer::Value(count_ones(&final_id))
                        }
                        _ => Answer::Vacuous,
                    }
                }
            },
            ValueProvider::Horizon(hm) => match hm.evaluate(t) {
                Evaluation::Value(v) => Answer::Value(v),
                Evaluation::LoopDetected => Answer::HorizonExceeded,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub particle: u64,
    pub interaction: u64,
    pub assignment: BTreeMap<PropertyId, Answer>,
}

impl Signature {
    /// The value of property `k`; unassigned properties answer vacuously.
    pub fn get(&self, k: PropertyId) -> Answer {
        self.assignment.get(&k).copied().unwrap_or(Answer::Vacuous)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Particle {
    pub id: u64,
    pub providers: BTreeMap<PropertyId, ValueProvider>,
}

impl Particle {
    pub fn new(id: u64) -> Self {
        Self {
            id,
            providers: BTreeMap::new(),
        }
    }

    pub fn with(mut self, k: PropertyId, provider: ValueProvider) -> Self {
        self.providers.insert(k, provider);
        self
    }

    pub fn signature_at(&self, t: u64) -> Signature {
        Signature {
            particle: self.id,
            interaction: t,
            assignment: self
                .providers
                .iter()
                .map(|(k, p)| (*k, p.value_at(t)))
                .collect(),
        }
    }

    /// True when no property is horizon-backed.
    pub fn is_fundamental(&self) -> bool {
        self.providers.values().all(ValueProvider::is_uniform)
    }
}

/// An immutable snapshot. Every particle has materialized signatures for
/// interactions `0..=time`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Universe {
    registry: Registry,
    particles: BTreeMap<u64, Particle>,
    world_lines: BTreeMap<u64, Vec<Signature>>,
    time: u64,
}

impl Universe {
    pub fn new(registry: Registry, particles: Vec<Particle>) -> Result<Self, UniverseError> {
        let mut map = BTreeMap::new();
        for p in particles {
            let id = p.id;
            if map.insert(id, p).is_some() {
                return Err(UniverseError::DuplicateParticle(id));
            }
        }
        let world_lines = map
            .iter()
            .map(|(id, p)| (*id, vec![p.signature_at(0)]))
            .collect();
        Ok(Self {
            registry,
            particles: map,
            world_lines,
            time: 0,
        })
    }

    pub fn empty() -> Self {
        Self::new(Registry::new(), Vec::new()).expect("no particles")
    }

    pub fn registry(&self) -> &Registry {
        &self.registry
    }

    pub fn time(&self) -> u64 {
        self.time
    }

    pub fn particles(&self) -> impl Iterator<Item = &Particle> {
        self.particles.values()
    }

    pub fn particle(&self, i: u64) -> Result<&Particle, UniverseError> {
        self.particles
            .get(&i)
            .ok_or(UniverseError::UnknownParticle(i))
    }

    pub fn initial_signature(&self, i: u64) -> Result<&Signature, UniverseError> {
        self.particle(i)?;
        Ok(&self.world_lines[&i][0])
    }

    /// Signature of particle `i` at interaction `t`, materialized or not.
    pub fn signature(&self, i: u64, t: u64) -> Result<Signature, UniverseError> {
        let p = self.particle(i)?;
        Ok(match self.world_lines[&i].get(t as usize) {
            Some(s) => s.clone(),
            None => p.signature_at(t),
        })
    }

    /// Replaces the horizon machine behind `(i, k)` by its measurement at
    /// `n`, re-deriving the materialized world-line.
    pub fn measure(&self, i: u64, k: PropertyId, n: u64) -> Result<Universe, UniverseError> {
        let mut next = self.clone();
        let particle = next
            .particles
            .get_mut(&i)
            .ok_or(UniverseError::UnknownParticle(i))?;
        match particle.providers.get_mut(&k) {
            Some(ValueProvider::Horizon(hm)) => *hm = hm.measure(n),
            _ => return Err(UniverseError::NotHorizon(k.0, i)),
        }
        let line = (0..=self.time).map(|t| particle.signature_at(t)).collect();
        next.world_lines.insert(i, line);
        Ok(next)
    }
}

pub fn register(registry: &mut Registry, name: &str) -> Result<u64, UniverseError> {
    registry.register(name)
}

pub fn signature_query(
    u: &Universe,
    i: u64,
    t: u64,
    k: PropertyId,
) -> Result<Answer, UniverseError> {
    let particle = u.particle(i)?;
    if k.0 == 0 || u.registry.name(k.0).is_none() {
        return Ok(Answer::Vacuous);
    }
    if let Some(sig) = u.world_lines[&i].get(t as usize) {
        return Ok(sig.get(k));
    }
    Ok(particle
        .providers
        .get(&k)
        .map_or(Answer::Vacuous, |p| p.value_at(t)))
}

/// Advances every particle by one interaction.
pub fn step_universe(u: &Universe) -> Universe {
    let mut next = u.clone();
    next.time += 1;
    for (id, p) in &u.particles {
        next.world_lines
            .get_mut(id)
            .expect("world-line per particle")
            .push(p.signature_at(next.time));
    }
    next
}

/// Signatures at interactions `0..t`.
pub fn history(u: &Universe, i: u64, t: u64) -> Result<Vec<Signature>, UniverseError> {
    u.particle(i)?;
    (0..t).map(|s| u.signature(i, s)).collect()
}

/// Coordinates of the signature at `t`, projected onto `props`.
pub fn godelian_point(
    u: &Universe,
    i: u64,
    t: u64,
    props: &[PropertyId],
) -> Result<Vec<Answer>, UniverseError> {
    props.iter().map(|k| signature_query(u, i, t, *k)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum PredictabilityVerdict {
    Predictable {
        value: u64,
        stabilized_at: usize,
    },
    /// Two indices inside the final window holding different values.
    Random {
        first: usize,
        second: usize,
    },
    Undetermined {
        window: usize,
    },
}

impl fmt::Display for PredictabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PredictabilityVerdict::Predictable {
                value,
                stabilized_at,
            } => write!(f, "predictable({value}@{stabilized_at})"),
            PredictabilityVerdict::Random { first, second } => {
                write!(f, "random({first},{second})")
            }
            PredictabilityVerdict::Undetermined { window } => write!(f, "undetermined({window})"),
        }
    }
}

/// Over the naturals a Cauchy sequence is one that is eventually constant;
/// the last `window` observations stand in for "eventually".
pub fn classify_predictability(values: &[u64], window: usize) -> PredictabilityVerdict {
    let window = window.max(1);
    if values.len() < window {
        return PredictabilityVerdict::Undetermined { window };
    }
    let last = values.len() - 1;
    let tail = values[last];
    let run_start = values.iter().rposition(|v| *v != tail).map_or(0, |i| i + 1);
    if last + 1 - run_start >= window {
        PredictabilityVerdict::Predictable {
            value: tail,
            stabilized_at: run_start,
        }
    } else {
        PredictabilityVerdict::Random {
            first: run_start - 1,
            second: last,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictabilityEntry {
    pub particle: u64,
    pub property: PropertyId,
    pub name: String,
    pub verdict: PredictabilityVerdict,
}

/// Classifies each property over interactions `0..steps`, using the values
/// observed before the first non-value answer.
pub fn predictability_report(u: &Universe, steps: u64, window: usize) -> Vec<PredictabilityEntry> {
    let mut out = Vec::new();
    for p in u.particles() {
        for k in p.providers.keys() {
            let values: Vec<u64> = (0..steps)
                .map(|t| signature_query(u, p.id, t, *k).expect("particle exists"))
                .map_while(Answer::value)
                .collect();
            out.push(PredictabilityEntry {
                particle: p.id,
                property: *k,
                name: u.registry.name(k.0).unwrap_or("?").to_owned(),
                verdict: classify_predictability(&values, window),
            });
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FitEntry {
    pub particle: u64,
    pub property: PropertyId,
    pub values: Vec<Answer>,
    pub pair: Option<(String, String)>,
    /// The found pair reproduces every simulated value.
    pub replays: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredestinationReport {
    pub horizon: u64,
    pub bound: u64,
    pub all_uniform: bool,
    pub entries: Vec<FitEntry>,
    /// Every property of every particle has a characteristic pair in bound.
    pub holds: bool,
}

/// Simulates interactions `0..=horizon` and looks for the least β pair
/// within `bound` reproducing each property's values.
pub fn check_predestination_sufficient(
    u: &Universe,
    horizon: u64,
    bound: u64,
) -> PredestinationReport {
    let mut entries = Vec::new();
    let mut all_uniform = true;
    for p in u.particles() {
        all_uniform &= p.is_fundamental();
        for k in p.providers.keys() {
            let values: Vec<Answer> = (0..=horizon)
                .map(|t| signature_query(u, p.id, t, *k).expect("particle exists"))
                .collect();
            let numeric: Option<Vec<u64>> = values.iter().map(|a| a.value()).collect();
            let fit: Option<BetaPair> = numeric
                .as_ref()
                .and_then(|v| ValueSequence::new(v.clone()).ok())
                .and_then(|s| fit_characteristic_beta(&s, bound));
            let replays = match (&fit, &numeric) {
                (Some(pair), Some(v)) => v
                    .iter()
                    .enumerate()
                    .all(|(i, m)| beta_eval(pair, i as u64) == (*m).into()),
                _ => false,
            };
            entries.push(FitEntry {
                particle: p.id,
                property: *k,
                values,
                pair: fit.map(|f| (f.b().to_string(), f.c().to_string())),
                replays,
            });
        }
    }
    let holds = all_uniform && entries.iter().all(|e| e.replays);
    PredestinationReport {
        horizon,
        bound,
        all_uniform,
        entries,
        holds,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UniverseClass {
    /// No particle has a horizon-backed property.
    PreDestined,
    PartiallyPreDestined,
    /// Every particle has only horizon-backed properties.
    Quantum,
}

impl fmt::Display for UniverseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UniverseClass::PreDestined => "pre-destined",
            UniverseClass::PartiallyPreDestined => "partially-pre-destined",
            UniverseClass::Quantum => "quantum",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParticleObstruction {
    pub particle: u64,
    /// Every entry of the initial signature is a value.
    pub initial_materialized: bool,
    pub has_horizon: bool,
    pub fundamental: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionReport {
    pub particles: Vec<ParticleObstruction>,
    pub class: UniverseClass,
    pub fundamental_count: usize,
}

pub fn check_predictability_obstruction(u: &Universe) -> ObstructionReport {
    let particles: Vec<ParticleObstruction> = u
        .particles()
        .map(|p| {
            let initial = &u.world_lines[&p.id][0];
            ParticleObstruction {
                particle: p.id,
                initial_materialized: initial.assignment.values().all(|a| a.value().is_some()),
                has_horizon: !p.is_fundamental(),
                fundamental: p.is_fundamental(),
            }
        })
        .collect();
    let all_quantum = !particles.is_empty()
        && u.particles()
            .all(|p| !p.providers.is_empty() && p.providers.values().all(|v| !v.is_uniform()));
    let class = if particles.iter().all(|p| !p.has_horizon) {
        UniverseClass::PreDestined
    } else if all_quantum {
        UniverseClass::Quantum
    } else {
        UniverseClass::PartiallyPreDestined
    };
    ObstructionReport {
        fundamental_count: particles.iter().filter(|p| p.fundamental).count(),
        particles,
        class,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collapse::{make_horizon_machine, Predicate};

    fn uniform(rule: Rule, initial: u64) -> ValueProvider {
        ValueProvider::Uniform { rule, initial }
    }

    fn one_property(provider: ValueProvider) -> (Universe, PropertyId) {
        let mut r = Registry::new();
        let k = PropertyId(r.register("x").unwrap());
        let u = Universe::new(r, vec![Particle::new(0).with(k, provider)]).unwrap();
        (u, k)
    }

    #[test]
    fn registry_numbers_by_first_registration() {
        let mut r = Registry::new();
        assert_eq!(r.register("mass").unwrap(), 1);
        assert_eq!(r.register("spin").unwrap(), 2);
        assert_eq!(r.register("mass").unwrap(), 1);
        assert_eq!(r.name(2), Some("spin"));
        assert_eq!(r.name(0), None);
        assert!(matches!(r.register(""), Err(UniverseError::EmptyName)));
    }

    #[test]
    fn unregistered_properties_are_vacuous() {
        let (u, k) = one_property(uniform(Rule::Constant(5), 5));
        assert_eq!(
            signature_query(&u, 0, 3, PropertyId(0)).unwrap(),
            Answer::Vacuous
        );
        assert_eq!(
            signature_query(&u, 0, 3, PropertyId(9)).unwrap(),
            Answer::Vacuous
        );
        for t in 0..10 {
            assert_eq!(signature_query(&u, 0, t, k).unwrap(), Answer::Value(5));
        }
        assert!(matches!(
            signature_query(&u, 4, 0, k),
            Err(UniverseError::UnknownParticle(4))
        ));
    }

    #[test]
    fn horizon_query_and_measurement() {
        let hm = make_horizon_machine(Predicate::Parity, 3).unwrap();
        let (u, k) = one_property(ValueProvider::Horizon(hm));
        assert_eq!(
            signature_query(&u, 0, 7, k).unwrap(),
            Answer::HorizonExceeded
        );
        let measured = u.measure(0, k, 10).unwrap();
        assert_eq!(
            signature_query(&measured, 0, 7, k).unwrap(),
            Answer::Value(1)
        );
        assert_eq!(
            signature_query(&measured, 0, 10, k).unwrap(),
            Answer::Value(0)
        );
        assert!(measured.measure(0, PropertyId(1), 2).is_ok());
    }

    #[test]
    fn measuring_a_uniform_property_fails() {
        let (u, k) = one_property(uniform(Rule::Constant(1), 1));
        assert!(matches!(
            u.measure(0, k, 4),
            Err(UniverseError::NotHorizon(1, 0))
        ));
    }

    #[test]
    fn stepping_flags_horizon_entries() {
        let hm = make_horizon_machine(Predicate::Parity, 2).unwrap();
        let (mut u, k) = one_property(ValueProvider::Horizon(hm));
        for _ in 0..3 {
            u = step_universe(&u);
        }
        let h = history(&u, 0, 4).unwrap();
        let got: Vec<Answer> = h.iter().map(|s| s.get(k)).collect();
        assert_eq!(
            got,
            [
                Answer::Value(0),
                Answer::Value(1),
                Answer::HorizonExceeded,
                Answer::HorizonExceeded
            ]
        );
    }

    #[test]
    fn empty_universe_steps_to_itself() {
        let u = Universe::empty();
        let next = step_universe(&u);
        assert_eq!(next.particles().count(), 0);
        assert_eq!(
            check_predictability_obstruction(&next).class,
            UniverseClass::PreDestined
        );
    }

    #[test]
    fn counter_counts() {
        let (mut u, k) = one_property(uniform(Rule::Counter { step: 1 }, 0));
        for _ in 0..3 {
            u = step_universe(&u);
        }
        assert_eq!(u.signature(0, 3).unwrap().get(k), Answer::Value(3));
        assert_eq!(u.time(), 3);
    }

    #[test]
    fn history_edges() {
        let (u, k) = one_property(uniform(Rule::Counter { step: 2 }, 1));
        assert!(history(&u, 0, 0).unwrap().is_empty());
        let one = history(&u, 0, 1).unwrap();
        assert_eq!(one, vec![u.initial_signature(0).unwrap().clone()]);
        assert_eq!(one[0].get(k), Answer::Value(1));
    }

    #[test]
    fn affine_and_table_rules() {
        let alt = uniform(
            Rule::Affine {
                a: 1,
                b: 1,
                modulus: 2,
            },
            0,
        );
        let got: Vec<Answer> = (0..4).map(|t| alt.value_at(t)).collect();
        assert_eq!(got, [0, 1, 0, 1].map(Answer::Value));
        let table = uniform(Rule::Table(vec![3, 1, 4]), 3);
        assert_eq!(table.value_at(4), Answer::Value(1));
    }

    #[test]
    fn godelian_point_projection() {
        let (u, k) = one_property(uniform(Rule::Constant(7), 7));
        assert!(godelian_point(&u, 0, 2, &[]).unwrap().is_empty());
        assert_eq!(
            godelian_point(&u, 0, 2, &[k]).unwrap(),
            vec![Answer::Value(7)]
        );
        assert_eq!(
            godelian_point(&u, 0, 2, &[k, PropertyId(0)]).unwrap(),
            vec![Answer::Value(7), Answer::Vacuous]
        );
    }

    #[test]
    fn classifier_examples() {
        assert_eq!(
            classify_predictability(&[5, 5, 5, 5], 3),
            PredictabilityVerdict::Predictable {
                value: 5,
                stabilized_at: 0
            }
        );
        let PredictabilityVerdict::Random { first, second } =
            classify_predictability(&[0, 1, 0, 1, 0, 1], 3)
        else {
            panic!("expected random");
        };
        assert!(first >= 3 && second >= 3);
        assert_ne!([0, 1, 0, 1, 0, 1][first], [0, 1, 0, 1, 0, 1][second]);
        assert_eq!(
            classify_predictability(&[7, 7, 3, 3, 3, 3, 3], 4),
            PredictabilityVerdict::Predictable {
                value: 3,
                stabilized_at: 2
            }
        );
        assert_eq!(
            classify_predictability(&[1, 1], 3),
            PredictabilityVerdict::Undetermined { window: 3 }
        );
    }

    #[test]
    fn predestination_bound_failure_is_reported() {
        let (u, _) = one_property(uniform(Rule::Constant(50), 50));
        let report = check_predestination_sufficient(&u, 4, 10);
        assert!(report.all_uniform);
        assert!(!report.holds);
        assert_eq!(report.entries[0].pair, None);
        let report = check_predestination_sufficient(&u, 4, 100);
        assert!(report.holds);
    }

    #[test]
    fn obstruction_classes() {
        let mut r = Registry::new();
        let k = PropertyId(r.register("x").unwrap());
        let hm = || ValueProvider::Horizon(make_horizon_machine(Predicate::Parity, 2).unwrap());
        let classical = Particle::new(0).with(k, uniform(Rule::Constant(1), 1));
        let quantum = Particle::new(1).with(k, hm());

        let u = Universe::new(r.clone(), vec![classical.clone()]).unwrap();
        assert_eq!(
            check_predictability_obstruction(&u).class,
            UniverseClass::PreDestined
        );

        let u = Universe::new(r.clone(), vec![quantum.clone()]).unwrap();
        let report = check_predictability_obstruction(&u);
        assert_eq!(report.class, UniverseClass::Quantum);
        assert_eq!(report.fundamental_count, 0);
        assert!(report.particles[0].initial_materialized);

        let u = Universe::new(r, vec![classical, quantum]).unwrap();
        assert_eq!(
            check_predictability_obstruction(&u).class,
            UniverseClass::PartiallyPreDestined
        );
    }
}
