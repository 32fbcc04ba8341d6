//! Experiment configuration, read from TOML:
//!
//! ```toml
//! mode = "private"          # private | noiseless | exact-baseline
//! eps = [0.5, 1, 2, "inf"]
//! seeds = [0, 1, 2]         # or: seed_count = 20
//! output = "report.csv"     # optional
//!
//! [instance]                # or: file = "graph.txt"
//! generator = "erdos-renyi-weighted"
//! n = 30
//! p = 0.2
//! seed = 7                  # instance seed, default 0
//!
//! [constants]               # optional overrides
//! c1 = 4.0
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::generators::{generate, Generator};
use super::io::load_graph;
use super::{HarnessError, HarnessResult};
use crate::gh_private::Constants;
use crate::graph::Graph;
use crate::privacy::Epsilon;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Private,
    Noiseless,
    ExactBaseline,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    Generated { generator: Generator, seed: u64 },
}

impl InstanceSource {
    pub fn load(&self) -> HarnessResult<Graph> {
        match self {
            Self::File(p) => load_graph(p),
            Self::Generated { generator, seed } => Ok(generate(generator, *seed)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub instance: InstanceSource,
    /// Ignored (treated as `[inf]`) unless `mode` is private.
    pub eps: Vec<Epsilon>,
    pub seeds: Vec<u64>,
    pub mode: Mode,
    pub constants: Constants,
    pub output: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    mode: Mode,
    #[serde(default)]
    eps: Vec<toml::Value>,
    seeds: Option<Vec<u64>>,
    seed_count: Option<u64>,
    output: Option<PathBuf>,
    instance: toml::Table,
    #[serde(default)]
    constants: RawConstants,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawConstants {
    c1: Option<f64>,
    c2: Option<f64>,
    c_depth: Option<f64>,
    penalty_const: Option<f64>,
}

fn cfg_err(msg: impl Into<String>) -> HarnessError {
    HarnessError::Config(msg.into())
}

fn parse_eps(v: &toml::Value) -> HarnessResult<Epsilon> {
    match v {
        toml::Value::Float(x) => Ok(Epsilon::new(*x)?),
        toml::Value::Integer(x) => Ok(Epsilon::new(*x as f64)?),
        toml::Value::String(s) => s.parse().map_err(|_| cfg_err(format!("bad eps {s:?}"))),
        other => Err(cfg_err(format!("bad eps {other}"))),
    }
}

/// Environment variables that override [`Constants::default`].
pub const CONSTANT_ENV_VARS: [&str; 4] = ["GHTREE_C1", "GHTREE_C2", "GHTREE_C_DEPTH", "GHTREE_PENALTY"];

/// Default constants with overrides from `lookup` (normally
/// `std::env::var(..).ok()`) for the names in [`CONSTANT_ENV_VARS`].
pub fn constants_with_overrides(lookup: impl Fn(&str) -> Option<String>) -> HarnessResult<Constants> {
    let mut c = Constants::default();
    let slots = [&mut c.c1, &mut c.c2, &mut c.c_depth, &mut c.penalty_const];
    for (name, slot) in CONSTANT_ENV_VARS.iter().zip(slots) {
        if let Some(raw) = lookup(name) {
            *slot = raw
                .trim()
                .parse()
                .map_err(|_| cfg_err(format!("{name}={raw:?} is not a number")))?;
        }
    }
    c.validate()?;
    Ok(c)
}

impl ExperimentConfig {
    /// Parses TOML with the default constants; relative paths resolve
    /// against `base`.
    pub fn from_toml_str(text: &str, base: &Path) -> HarnessResult<Self> {
        Self::parse(text, base, Constants::default())
    }

    /// Like [`Self::from_toml_str`], with `[constants]` layered over
    /// `defaults`.
    pub fn parse(text: &str, base: &Path, defaults: Constants) -> HarnessResult<Self> {
        let raw: Raw = toml::from_str(text).map_err(|e| cfg_err(e.to_string()))?;

        let seeds = match (raw.seeds, raw.seed_count) {
            (Some(s), None) => s,
            (None, Some(c)) => (0..c).collect(),
            (None, None) => return Err(cfg_err("one of `seeds` or `seed_count` is required")),
            (Some(_), Some(_)) => return Err(cfg_err("give `seeds` or `seed_count`, not both")),
        };
        if seeds.is_empty() {
            return Err(cfg_err("at least one seed is required"));
        }

        let mut eps = raw.eps.iter().map(parse_eps).collect::<HarnessResult<Vec<_>>>()?;
        if raw.mode != Mode::Private {
            eps = vec![Epsilon::Infinite];
        } else if eps.is_empty() {
            return Err(cfg_err("private mode needs at least one eps"));
        }

        let mut table = raw.instance;
        let instance = if let Some(file) = table.remove("file") {
            if !table.is_empty() {
                return Err(cfg_err("`instance.file` excludes generator keys"));
            }
            let file = file.as_str().ok_or_else(|| cfg_err("`instance.file` must be a string"))?;
            InstanceSource::File(base.join(file))
        } else {
            let seed = match table.remove("seed") {
                None => 0,
                Some(toml::Value::Integer(s)) if s >= 0 => s as u64,
                Some(other) => return Err(cfg_err(format!("bad instance seed {other}"))),
            };
            let generator = Generator::deserialize(toml::Value::Table(table))
                .map_err(|e| cfg_err(format!("instance: {e}")))?;
            InstanceSource::Generated { generator, seed }
        };

        let d = defaults;
        let c = raw.constants;
        let constants = Constants {
            c1: c.c1.unwrap_or(d.c1),
            c2: c.c2.unwrap_or(d.c2),
            c_depth: c.c_depth.unwrap_or(d.c_depth),
            penalty_const: c.penalty_const.unwrap_or(d.penalty_const),
        };
        constants.validate()?;

        Ok(Self {
            instance,
            eps,
            seeds,
            mode: raw.mode,
            constants,
            output: raw.output.map(|p| base.join(p)),
        })
    }

    pub fn load(path: impl AsRef<Path>, defaults: Constants) -> HarnessResult<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")), defaults)
    }
}
