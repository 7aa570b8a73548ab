//! Run configuration: a flat `key = value` file merged with flag overrides.

use prtbp_core::equilibria::Branch;
use prtbp_core::normalform::pipeline::{Stage, Tolerances};
use prtbp_core::numfmt::fmt17;
use prtbp_core::ModelParams;
use std::collections::BTreeMap;
use std::str::FromStr;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected key = value, got {text:?}")]
    Syntax { line: usize, text: String },
    #[error("unknown key {0:?}")]
    UnknownKey(String),
    #[error("key {key:?}: cannot parse {value:?}")]
    BadValue { key: String, value: String },
    #[error("keys {0} and {1} are mutually exclusive")]
    Conflict(&'static str, &'static str),
    #[error("missing required key {0:?}")]
    Missing(&'static str),
    #[error(transparent)]
    Model(#[from] prtbp_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Report,
}

impl FromStr for Format {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "csv" => Ok(Format::Csv),
            "report" => Ok(Format::Report),
            _ => Err(()),
        }
    }
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Report => "report",
        }
    }
}

fn parse_branch(s: &str) -> Option<Branch> {
    match s.to_ascii_uppercase().as_str() {
        "L4" => Some(Branch::L4),
        "L5" => Some(Branch::L5),
        _ => None,
    }
}

const SCALAR_KEYS: &[&str] = &[
    "mu", "q1", "epsilon", "a2", "cd", "w1", "branch", "stages", "out", "format", "mu_min",
    "mu_max", "steps", "moser_tol", "tol",
];

/// Parsed run configuration. Unset fields take the pipeline defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub mu: Option<f64>,
    pub q1: Option<f64>,
    pub epsilon: Option<f64>,
    pub a2: Option<f64>,
    pub cd: Option<f64>,
    pub w1: Option<f64>,
    pub branch: Option<Branch>,
    pub stages: Option<Vec<Stage>>,
    pub tol: BTreeMap<Stage, f64>,
    pub out: Option<String>,
    pub format: Option<Format>,
    pub mu_min: Option<f64>,
    pub mu_max: Option<f64>,
    pub steps: Option<usize>,
    pub moser_tol: Option<f64>,
}

fn bad(key: &str, value: &str) -> ConfigError {
    ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
    }
}

fn num(key: &str, value: &str) -> Result<f64, ConfigError> {
    value.parse::<f64>().map_err(|_| bad(key, value))
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                text: raw.to_string(),
            })?;
            cfg.set(k.trim(), v.trim())?;
        }
        Ok(cfg)
    }

    /// Sets one key. `tol.<stage>` overrides a single stage, bare `tol` all of them.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        if let Some(stage) = key.strip_prefix("tol.") {
            let s = Stage::from_str(stage).map_err(|_| ConfigError::UnknownKey(key.to_string()))?;
            self.tol.insert(s, num(key, value)?);
            return Ok(());
        }
        if !SCALAR_KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey(key.to_string()));
        }
        match key {
            "mu" => self.mu = Some(num(key, value)?),
            "q1" => self.q1 = Some(num(key, value)?),
            "epsilon" => self.epsilon = Some(num(key, value)?),
            "a2" => self.a2 = Some(num(key, value)?),
            "cd" => self.cd = Some(num(key, value)?),
            "w1" => self.w1 = Some(num(key, value)?),
            "mu_min" => self.mu_min = Some(num(key, value)?),
            "mu_max" => self.mu_max = Some(num(key, value)?),
            "moser_tol" => self.moser_tol = Some(num(key, value)?),
            "steps" => self.steps = Some(value.parse().map_err(|_| bad(key, value))?),
            "branch" => self.branch = Some(parse_branch(value).ok_or_else(|| bad(key, value))?),
            "format" => self.format = Some(value.parse().map_err(|_| bad(key, value))?),
            "out" => self.out = Some(value.to_string()),
            "stages" => {
                let mut v = value
                    .split(',')
                    .map(|s| Stage::from_str(s.trim()).map_err(|_| bad(key, value)))
                    .collect::<Result<Vec<_>, _>>()?;
                v.sort();
                v.dedup();
                self.stages = Some(v);
            }
            "tol" => {
                let t = num(key, value)?;
                for s in Stage::ALL {
                    self.tol.insert(s, t);
                }
            }
            _ => unreachable!("key list and match arms agree"),
        }
        Ok(())
    }

    /// Applies every set field of `other` on top of `self`.
    pub fn merge(&mut self, other: &RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => {$(
                if other.$f.is_some() {
                    self.$f = other.$f.clone();
                }
            )*};
        }
        take!(mu, q1, epsilon, a2, cd, w1, branch, stages, out, format, mu_min, mu_max, steps, moser_tol);
        self.tol.extend(other.tol.iter().map(|(k, v)| (*k, *v)));
    }

    /// Canonical text: sorted keys, numbers in 17 significant digits.
    pub fn normalized(&self) -> String {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                kv.insert(k.to_string(), v);
            }
        };
        put("mu", self.mu.map(fmt17));
        put("q1", self.q1.map(fmt17));
        put("epsilon", self.epsilon.map(fmt17));
        put("a2", self.a2.map(fmt17));
        put("cd", self.cd.map(fmt17));
        put("w1", self.w1.map(fmt17));
        put("mu_min", self.mu_min.map(fmt17));
        put("mu_max", self.mu_max.map(fmt17));
        put("moser_tol", self.moser_tol.map(fmt17));
        put("steps", self.steps.map(|s| s.to_string()));
        put("branch", self.branch.map(|b| b.to_string()));
        put("format", self.format.map(|f| f.name().to_string()));
        put("out", self.out.clone());
        put(
            "stages",
            self.stages
                .as_ref()
                .map(|v| v.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")),
        );
        for (s, t) in &self.tol {
            put(&format!("tol.{}", s.name()), Some(fmt17(*t)));
        }
        kv.into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn params(&self) -> Result<ModelParams, ConfigError> {
        let mu = self.mu.ok_or(ConfigError::Missing("mu"))?;
        self.params_at(mu)
    }

    /// Model parameters at mass ratio `mu` with the configured perturbations.
    /// Without `cd` or `w1` the drag is off.
    pub fn params_at(&self, mu: f64) -> Result<ModelParams, ConfigError> {
        let q1 = match (self.q1, self.epsilon) {
            (Some(_), Some(_)) => return Err(ConfigError::Conflict("q1", "epsilon")),
            (Some(q), None) => q,
            (None, Some(e)) => 1.0 - e,
            (None, None) => 1.0,
        };
        let a2 = self.a2.unwrap_or(0.0);
        Ok(match (self.cd, self.w1) {
            (Some(_), Some(_)) => return Err(ConfigError::Conflict("cd", "w1")),
            (Some(cd), None) => ModelParams::new(mu, q1, a2, cd)?,
            (None, w1) => ModelParams::with_drag_strength(mu, q1, a2, w1.unwrap_or(0.0))?,
        })
    }

    pub fn tolerances(&self) -> Tolerances {
        let mut t = Tolerances::default();
        for (s, v) in &self.tol {
            t.set(*s, *v);
        }
        t
    }

    /// Last requested stage; the pipeline runs everything up to it.
    pub fn through(&self) -> Stage {
        self.stages
            .as_ref()
            .and_then(|v| v.iter().max().copied())
            .unwrap_or(Stage::H3)
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_normalizes() {
        let cfg = RunConfig::parse("mu = 0.01 # mass ratio\nepsilon=1e-3\n\nstages = h3, b1\ntol.b2 = 1e-8\nbranch = l5\n")
            .unwrap();
        assert_eq!(cfg.stages, Some(vec![Stage::B1, Stage::H3]));
        assert_eq!(cfg.branch, Some(Branch::L5));
        let text = cfg.normalized();
        assert_eq!(
            text,
            "branch = L5\nepsilon = 0.001\nmu = 0.01\nstages = b1,h3\ntol.b2 = 1e-8\n"
        );
        assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
    }

    #[test]
    fn rejects_unknown_and_malformed() {
        assert_eq!(
            RunConfig::parse("mass = 0.1").unwrap_err(),
            ConfigError::UnknownKey("mass".into())
        );
        assert!(matches!(RunConfig::parse("mu 0.1"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(RunConfig::parse("mu = abc"), Err(ConfigError::BadValue { .. })));
        assert!(matches!(RunConfig::parse("tol.b7 = 1"), Err(ConfigError::UnknownKey(_))));
    }

    #[test]
    fn overrides_win() {
        let mut base = RunConfig::parse("mu = 0.01\na2 = 0.001").unwrap();
        let over = RunConfig::parse("mu = 0.02").unwrap();
        base.merge(&over);
        assert_eq!((base.mu, base.a2), (Some(0.02), Some(0.001)));
    }

    #[test]
    fn exclusive_keys() {
        let cfg = RunConfig::parse("mu = 0.01\nq1 = 0.9\nepsilon = 0.1").unwrap();
        assert_eq!(cfg.params().unwrap_err(), ConfigError::Conflict("q1", "epsilon"));
        let cfg = RunConfig::parse("mu = 0.7").unwrap();
        assert!(matches!(cfg.params(), Err(ConfigError::Model(_))));
    }
}
