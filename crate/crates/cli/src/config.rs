//! JSON run configuration.
//!
//! Reals are written as strings (`"0.25"`, `"-1e-3"`, `"1/3"`) so that no
//! locale or float-printing convention leaks into a config. Symbols are
//! 1-based; finite-system states are 0-based indices.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A real number given as a decimal or fraction string.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Real(pub String);

impl Real {
    pub fn value(&self) -> Result<f64, CliError> {
        parse_real(&self.0)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Real;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a real number written as a string")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Real, E> {
                parse_real(s).map_err(|e| E::custom(e.to_string()))?;
                Ok(Real(s.to_string()))
            }
        }
        d.deserialize_str(V)
    }
}

pub fn parse_real(s: &str) -> Result<f64, CliError> {
    let bad = || CliError::Schema(format!("`{s}` is not a real number"));
    let t = s.trim();
    let v = match t.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|_| bad())?;
            let d: f64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            n / d
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub name: Option<String>,
    pub controls: Controls,
    pub partition: Partition,
    pub system: System,
    /// Seed for randomized candidate families.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub limits: Option<LimitsConfig>,
    pub tasks: Vec<Task>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Controls {
    pub values: Vec<String>,
    /// Potential name -> control value -> real.
    #[serde(default)]
    pub potentials: BTreeMap<String, BTreeMap<String, Real>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Partition {
    pub tau: usize,
    /// Control word of each symbol, symbol 1 first.
    pub words: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum System {
    /// Allowed transitions as 1-based `[from, to]` pairs.
    Sft { transitions: Vec<[usize; 2]> },
    FiniteState {
        states: usize,
        /// `[state, control value, successor]`.
        transitions: Vec<(usize, String, usize)>,
        invariant: Vec<usize>,
        /// `[state, symbol]`.
        cells: Vec<[usize; 2]>,
    },
    /// `x -> q x + u` on `[a, b]`; control values must be numeric.
    AffineInterval {
        contraction: String,
        interval: [String; 2],
        #[serde(default)]
        cuts: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsConfig {
    pub max_words: Option<u64>,
    pub max_nodes: Option<u64>,
}

/// A cylinder union by 1-based words, or `"all"`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum SubsetConfig {
    Keyword(String),
    Cylinders { cylinders: Vec<Vec<usize>> },
}

impl Default for SubsetConfig {
    fn default() -> Self {
        SubsetConfig::Keyword("all".into())
    }
}

/// An explicit list of reals or an evenly spaced range.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<Real>),
    Range { from: Real, to: Real, step: Real },
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        match self {
            Grid::List(v) => v.iter().map(Real::value).collect(),
            Grid::Range { from, to, step } => {
                let (a, b, h) = (from.value()?, to.value()?, step.value()?);
                if !(h > 0.0) || b < a {
                    return Err(CliError::Schema(
                        "grid needs step > 0 and to >= from".into(),
                    ));
                }
                let n = ((b - a) / h + 1e-9).floor() as usize;
                // Snap away the representation error of `a + k h` so that
                // decimal grids print as written.
                Ok((0..=n)
                    .map(|k| {
                        let x = a + k as f64 * h;
                        let r = (x * 1e12).round() / 1e12;
                        if (r - x).abs() <= 1e-9 * h { r } else { x }
                    })
                    .collect())
            }
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Candidate {
    Bernoulli { probs: Vec<Real> },
    Markov { matrix: Vec<Vec<Real>> },
    Parry,
    /// `count` random chains supported on the SFT relation, drawn from the
    /// run seed.
    RandomMarkov { count: usize },
    /// Unit mass on one itinerary, given by a 1-based word of length `D`.
    PointMass { word: Vec<usize> },
    /// A Markov candidate conditioned on a cylinder.
    Conditioned { on: Vec<usize>, base: Box<Candidate> },
}

fn default_tol() -> Real {
    Real("1e-9".into())
}
fn default_tail_window() -> usize {
    10
}
fn default_vp_window() -> usize {
    3
}
fn default_n_min() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Validate {},
    Pressure {
        phi: String,
        n_max: usize,
        #[serde(default = "default_tail_window")]
        tail_window: usize,
    },
    BowenRoot {
        phi: String,
        psi: String,
        #[serde(default = "default_tol")]
        tol: Real,
        /// Finite horizon `n`; the spectral limit when absent.
        #[serde(default)]
        horizon: Option<usize>,
    },
    Induced {
        phi: String,
        psi: String,
        t: Grid,
    },
    Characterize {
        phi: String,
        psi: String,
        t: Real,
        betas: Grid,
        #[serde(default)]
        tail_levels: Option<usize>,
        #[serde(default)]
        lag: Option<usize>,
    },
    PpPressure {
        phi: String,
        #[serde(default)]
        subset: SubsetConfig,
        #[serde(default = "default_n_min")]
        n_min: usize,
        depth: usize,
        #[serde(default = "default_tol")]
        tol: Real,
        /// Also export the optimal cover at this level.
        #[serde(default)]
        cover_at: Option<Real>,
    },
    BsDim {
        phi: String,
        #[serde(default)]
        subset: SubsetConfig,
        #[serde(default = "default_n_min")]
        n_min: usize,
        depth: usize,
        #[serde(default = "default_tol")]
        tol: Real,
        #[serde(default)]
        cover_at: Option<Real>,
    },
    Frostman {
        phi: String,
        #[serde(default)]
        subset: SubsetConfig,
        lambda: Real,
        #[serde(default = "default_n_min")]
        n_min: usize,
        depth: usize,
    },
    Sandwich {
        phi: String,
        #[serde(default)]
        subset: SubsetConfig,
        lambda: Real,
        epsilons: Vec<Real>,
        #[serde(default = "default_n_min")]
        n_min: usize,
        depth: usize,
    },
    VpCheck {
        phi: String,
        #[serde(default)]
        subset: SubsetConfig,
        #[serde(default = "default_n_min")]
        n_min: usize,
        depth: usize,
        #[serde(default = "default_tol")]
        tol: Real,
        #[serde(default = "default_vp_window")]
        window: usize,
        #[serde(default)]
        candidates: Vec<Candidate>,
    },
    Scan {
        phi: String,
        psi: String,
        betas: Grid,
        #[serde(default)]
        horizon: Option<usize>,
    },
}

impl Task {
    pub fn command(&self) -> &'static str {
        match self {
            Task::Validate {} => "validate",
            Task::Pressure { .. } => "pressure",
            Task::BowenRoot { .. } => "bowen-root",
            Task::Induced { .. } => "induced",
            Task::Characterize { .. } => "characterize",
            Task::PpPressure { .. } => "pp-pressure",
            Task::BsDim { .. } => "bs-dim",
            Task::Frostman { .. } => "frostman",
            Task::Sandwich { .. } => "sandwich",
            Task::VpCheck { .. } => "vp-check",
            Task::Scan { .. } => "scan",
        }
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let cfg: RunConfig =
        serde_json::from_str(text).map_err(|e| CliError::Schema(e.to_string()))?;
    if cfg.tasks.is_empty() {
        return Err(CliError::Schema("config lists no tasks".into()));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_must_be_strings() {
        let e = serde_json::from_str::<Real>("0.5").unwrap_err();
        assert!(e.to_string().contains("string"));
        assert_eq!(serde_json::from_str::<Real>("\"1/4\"").unwrap().value().unwrap(), 0.25);
        assert!(serde_json::from_str::<Real>("\"abc\"").is_err());
    }

    #[test]
    fn range_grid_includes_both_ends() {
        let g: Grid = serde_json::from_str(r#"{"from":"0","to":"1","step":"0.05"}"#).unwrap();
        let p = g.points().unwrap();
        assert_eq!(p.len(), 21);
        assert!((p[20] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let t = serde_json::from_str::<Task>(r#"{"command":"validate","extra":1}"#);
        assert!(t.is_err());
    }
}
