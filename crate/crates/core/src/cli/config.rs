//! `key=value` configuration: one key per line, `#` starts a comment.
//! Precedence is flags, then file, then defaults. The seed falls back to
//! `LEXSIM_SEED` when neither flags nor file set it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::experiment::{default_schedule, sweep_conditions, ConditionKey, ExperimentConfig};
use crate::learners::Algorithm;
use crate::tutor::ProductionStrategy;

pub const SEED_ENV: &str = "LEXSIM_SEED";

pub const CONFIG_KEYS: [&str; 14] = [
    "world_size",
    "context_size",
    "lexicon_size",
    "dims",
    "f",
    "algorithm",
    "alpha",
    "k",
    "strategy",
    "training_interactions",
    "test_interactions",
    "checkpoints",
    "repetitions",
    "seed",
];

/// Full grid used by `sweep` for any condition axis left unspecified.
pub const SWEEP_F_VALUES: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Run,
    Sweep,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Run => "run",
            Command::Sweep => "sweep",
        })
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "run" => Ok(Command::Run),
            "sweep" => Ok(Command::Sweep),
            other => Err(Error::config(
                "command",
                format!("unknown command `{other}`"),
            )),
        }
    }
}

/// A fully resolved invocation: shared parameters plus the condition axes.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub command: Command,
    pub base: ExperimentConfig,
    pub f_values: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub strategies: Vec<ProductionStrategy>,
}

impl Plan {
    pub fn conditions(&self) -> Vec<ConditionKey> {
        sweep_conditions(&self.f_values, &self.algorithms, &self.strategies)
    }

    /// Every configuration key with its resolved value, in `CONFIG_KEYS` order.
    pub fn to_key_values(&self) -> Vec<(String, String)> {
        let c = &self.base;
        let values = [
            c.world_size.to_string(),
            c.context_size.to_string(),
            c.lexicon_size.to_string(),
            c.dims.to_string(),
            join(&self.f_values),
            join(&self.algorithms),
            c.alpha.to_string(),
            c.k.to_string(),
            join(&self.strategies),
            c.training_interactions.to_string(),
            c.test_interactions.to_string(),
            join(&c.checkpoints),
            c.repetitions.to_string(),
            c.seed.to_string(),
        ];
        CONFIG_KEYS
            .iter()
            .zip(values)
            .map(|(k, v)| (k.to_string(), v))
            .collect()
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses `key=value` lines. Blank lines and `#` comments are skipped.
pub fn parse_key_values(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::config(
                format!("line {}", n + 1),
                format!("expected key=value, got `{line}`"),
            )
        })?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Where configuration values come from, highest precedence last.
#[derive(Debug, Clone, Default)]
pub struct ConfigSources {
    pub file: Vec<(String, String)>,
    pub flags: Vec<(String, String)>,
    pub env_seed: Option<String>,
}

pub fn resolve(command: Command, sources: &ConfigSources) -> Result<Plan> {
    let mut merged: BTreeMap<&str, &str> = BTreeMap::new();
    for (key, value) in sources.file.iter().chain(&sources.flags) {
        let known = CONFIG_KEYS
            .iter()
            .find(|k| **k == key.as_str())
            .ok_or_else(|| Error::config(key.clone(), "unknown key"))?;
        merged.insert(known, value.as_str());
    }

    let defaults = ExperimentConfig::default();
    let mut base = ExperimentConfig {
        world_size: scalar(&merged, "world_size", defaults.world_size)?,
        context_size: scalar(&merged, "context_size", defaults.context_size)?,
        lexicon_size: scalar(&merged, "lexicon_size", defaults.lexicon_size)?,
        dims: scalar(&merged, "dims", defaults.dims)?,
        alpha: scalar(&merged, "alpha", defaults.alpha)?,
        k: scalar(&merged, "k", defaults.k)?,
        training_interactions: scalar(
            &merged,
            "training_interactions",
            defaults.training_interactions,
        )?,
        test_interactions: scalar(&merged, "test_interactions", defaults.test_interactions)?,
        repetitions: scalar(&merged, "repetitions", defaults.repetitions)?,
        ..defaults.clone()
    };
    base.checkpoints = match merged.get("checkpoints") {
        Some(v) => list(v, "checkpoints")?,
        None => default_schedule(base.training_interactions),
    };
    base.seed = match (merged.get("seed"), &sources.env_seed) {
        (Some(v), _) => parse_value(v, "seed")?,
        (None, Some(env)) => parse_value(env, SEED_ENV)?,
        (None, None) => defaults.seed,
    };

    let axis = |key: &str| merged.get(key).copied();
    let (f_values, algorithms, strategies) = match command {
        Command::Run => (
            single(axis("f"), "f", defaults.f)?,
            single(axis("algorithm"), "algorithm", defaults.algorithm)?,
            single(axis("strategy"), "strategy", defaults.strategy)?,
        ),
        Command::Sweep => (
            axis("f")
                .map(|v| list(v, "f"))
                .transpose()?
                .unwrap_or_else(|| SWEEP_F_VALUES.to_vec()),
            axis("algorithm")
                .map(|v| list(v, "algorithm"))
                .transpose()?
                .unwrap_or_else(|| Algorithm::ALL.to_vec()),
            axis("strategy")
                .map(|v| list(v, "strategy"))
                .transpose()?
                .unwrap_or_else(|| vec![defaults.strategy]),
        ),
    };
    if f_values.is_empty() || algorithms.is_empty() || strategies.is_empty() {
        return Err(Error::config(
            "f/algorithm/strategy",
            "condition lists must not be empty",
        ));
    }
    base.f = f_values[0];
    base.algorithm = algorithms[0];
    base.strategy = strategies[0];
    for &f in &f_values {
        ExperimentConfig { f, ..base.clone() }.validate()?;
    }
    base.validate()?;

    Ok(Plan {
        command,
        base,
        f_values,
        algorithms,
        strategies,
    })
}

fn parse_value<T: FromStr>(raw: &str, key: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| Error::config(key, format!("malformed value `{raw}`")))
}

fn scalar<T: FromStr>(merged: &BTreeMap<&str, &str>, key: &str, default: T) -> Result<T> {
    merged.get(key).map_or(Ok(default), |v| parse_value(v, key))
}

fn list<T: FromStr>(raw: &str, key: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_value(s, key))
        .collect()
}

fn single<T: FromStr>(raw: Option<&str>, key: &str, default: T) -> Result<Vec<T>> {
    let Some(raw) = raw else {
        return Ok(vec![default]);
    };
    let values: Vec<T> = list(raw, key)?;
    if values.len() != 1 {
        return Err(Error::config(
            key,
            "`run` takes exactly one value; use `sweep` for lists",
        ));
    }
    Ok(values)
}
