//! Run configuration: a flat key=value text format describing the
//! generator, the parameter schedule, and pipeline knobs.

use crate::gen::{self, CayleyPreset, GenError};
use crate::graph::Graph;
use crate::hierarchy::SplitPolicy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: expected key=value, got {text:?}")]
    BadLine { line: usize, text: String },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: cannot parse value for {key}: {value:?}")]
    BadValue {
        line: usize,
        key: String,
        value: String,
    },
    #[error("invalid generator spec {0:?}")]
    BadGenerator(String),
    #[error("config declares delta={declared} but the generator produced degree bound {actual}")]
    DeltaMismatch { declared: u32, actual: u32 },
    #[error(transparent)]
    Gen(#[from] GenError),
}

/// What graph to build, parsed from specs like "cycle 40", "grid 60x60",
/// "tree 3x6", "cayley f2 3", "random 4 100 7".
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GeneratorSpec {
    Cycle(u32),
    Path(u32),
    Complete(u32),
    CompleteBipartite(u32, u32),
    Grid(u32, u32),
    Torus(u32, u32),
    Tree(u32, u32),
    Cayley(String, u32),
    Random { delta: u32, vertices: u32, seed: u64 },
}

fn split_dims(s: &str) -> Option<(u32, u32)> {
    let (a, b) = s.split_once(['x', 'X'])?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl GeneratorSpec {
    pub fn parse(text: &str) -> Result<GeneratorSpec, ConfigError> {
        let bad = || ConfigError::BadGenerator(text.to_string());
        let words: Vec<&str> = text.split_whitespace().collect();
        let num = |i: usize| -> Result<u32, ConfigError> {
            words.get(i).and_then(|w| w.parse().ok()).ok_or_else(bad)
        };
        match *words.first().ok_or_else(bad)? {
            "cycle" => Ok(GeneratorSpec::Cycle(num(1)?)),
            "path" => Ok(GeneratorSpec::Path(num(1)?)),
            "complete" => Ok(GeneratorSpec::Complete(num(1)?)),
            "complete_bipartite" => Ok(GeneratorSpec::CompleteBipartite(num(1)?, num(2)?)),
            "grid" => {
                let (w, h) = words.get(1).and_then(|w| split_dims(w)).ok_or_else(bad)?;
                Ok(GeneratorSpec::Grid(w, h))
            }
            "torus" => {
                let (w, h) = words.get(1).and_then(|w| split_dims(w)).ok_or_else(bad)?;
                Ok(GeneratorSpec::Torus(w, h))
            }
            "tree" => {
                let (a, d) = words.get(1).and_then(|w| split_dims(w)).ok_or_else(bad)?;
                Ok(GeneratorSpec::Tree(a, d))
            }
            "cayley" => {
                let preset = words.get(1).ok_or_else(bad)?.to_lowercase();
                if !matches!(preset.as_str(), "z" | "z2" | "f2") {
                    return Err(bad());
                }
                Ok(GeneratorSpec::Cayley(preset, num(2)?))
            }
            "random" => Ok(GeneratorSpec::Random {
                delta: num(1)?,
                vertices: num(2)?,
                seed: words.get(3).and_then(|w| w.parse().ok()).ok_or_else(bad)?,
            }),
            _ => Err(bad()),
        }
    }

    pub fn render(&self) -> String {
        match self {
            GeneratorSpec::Cycle(n) => format!("cycle {n}"),
            GeneratorSpec::Path(n) => format!("path {n}"),
            GeneratorSpec::Complete(n) => format!("complete {n}"),
            GeneratorSpec::CompleteBipartite(a, b) => format!("complete_bipartite {a} {b}"),
            GeneratorSpec::Grid(w, h) => format!("grid {w}x{h}"),
            GeneratorSpec::Torus(w, h) => format!("torus {w}x{h}"),
            GeneratorSpec::Tree(a, d) => format!("tree {a}x{d}"),
            GeneratorSpec::Cayley(p, r) => format!("cayley {p} {r}"),
            GeneratorSpec::Random { delta, vertices, seed } => {
                format!("random {delta} {vertices} {seed}")
            }
        }
    }

    pub fn generate(&self) -> Result<Graph, GenError> {
        match *self {
            GeneratorSpec::Cycle(n) => gen::cycle(n),
            GeneratorSpec::Path(n) => gen::path(n),
            GeneratorSpec::Complete(n) => gen::complete(n),
            GeneratorSpec::CompleteBipartite(a, b) => gen::complete_bipartite(a, b),
            GeneratorSpec::Grid(w, h) => gen::grid(w, h),
            GeneratorSpec::Torus(w, h) => gen::torus(w, h),
            GeneratorSpec::Tree(a, d) => gen::tree(a, d),
            GeneratorSpec::Cayley(ref p, r) => {
                let preset = match p.as_str() {
                    "z" => CayleyPreset::Z,
                    "z2" => CayleyPreset::Z2,
                    _ => CayleyPreset::F2,
                };
                gen::cayley_ball(preset, r)
            }
            GeneratorSpec::Random { delta, vertices, seed } => {
                gen::random_bounded(delta, vertices, seed)
            }
        }
    }
}

/// Run configuration; every field has a flat-text key of the same name.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub generator: GeneratorSpec,
    /// declared degree bound, cross-checked against the generator output
    pub delta: u32,
    /// number of hierarchy levels
    pub levels: usize,
    /// per-level separation radii (working-scale override)
    pub r: Vec<u32>,
    /// per-level scale factors
    pub s: Vec<u32>,
    pub split: SplitPolicy,
    /// use one pushed-forward template per equivalence class when coloring
    pub canonical_template: bool,
    /// boundary margin for bulk-only checks; defaults to the largest level
    /// coarse radius when absent
    pub bulk_margin: Option<u32>,
    /// separation scale for the finitary check
    pub eps: u32,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> RunConfig {
        RunConfig {
            generator: GeneratorSpec::Cycle(40),
            delta: 2,
            levels: 1,
            r: vec![3],
            s: vec![28],
            split: SplitPolicy::Formula,
            canonical_template: false,
            bulk_margin: None,
            eps: 4,
            seed: 0,
        }
    }
}

fn parse_list(line: usize, key: &str, value: &str) -> Result<Vec<u32>, ConfigError> {
    value
        .split(',')
        .map(|w| w.trim().parse::<u32>())
        .collect::<Result<Vec<u32>, _>>()
        .map_err(|_| ConfigError::BadValue {
            line,
            key: key.to_string(),
            value: value.to_string(),
        })
}

impl RunConfig {
    /// Parse the flat key=value text form. Lines starting with `#` and
    /// blank lines are ignored.
    pub fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let (key, value) = t.split_once('=').ok_or_else(|| ConfigError::BadLine {
                line,
                text: t.to_string(),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = || ConfigError::BadValue {
                line,
                key: key.to_string(),
                value: value.to_string(),
            };
            match key {
                "generator" => cfg.generator = GeneratorSpec::parse(value)?,
                "delta" => cfg.delta = value.parse().map_err(|_| bad())?,
                "levels" => cfg.levels = value.parse().map_err(|_| bad())?,
                "r" => cfg.r = parse_list(line, key, value)?,
                "s" => cfg.s = parse_list(line, key, value)?,
                "split" => {
                    cfg.split = match value {
                        "formula" => SplitPolicy::Formula,
                        "all-minus" => SplitPolicy::AllMinus,
                        "all-plus" => SplitPolicy::AllPlus,
                        _ => return Err(bad()),
                    }
                }
                "canonical_template" => cfg.canonical_template = value.parse().map_err(|_| bad())?,
                "bulk_margin" => cfg.bulk_margin = Some(value.parse().map_err(|_| bad())?),
                "eps" => cfg.eps = value.parse().map_err(|_| bad())?,
                "seed" => cfg.seed = value.parse().map_err(|_| bad())?,
                _ => {
                    return Err(ConfigError::UnknownKey {
                        line,
                        key: key.to_string(),
                    })
                }
            }
        }
        Ok(cfg)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("generator = {}\n", self.generator.render()));
        out.push_str(&format!("delta = {}\n", self.delta));
        out.push_str(&format!("levels = {}\n", self.levels));
        let list = |v: &[u32]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!("r = {}\n", list(&self.r)));
        out.push_str(&format!("s = {}\n", list(&self.s)));
        let split = match self.split {
            SplitPolicy::Formula => "formula",
            SplitPolicy::AllMinus => "all-minus",
            SplitPolicy::AllPlus => "all-plus",
        };
        out.push_str(&format!("split = {split}\n"));
        out.push_str(&format!("canonical_template = {}\n", self.canonical_template));
        if let Some(m) = self.bulk_margin {
            out.push_str(&format!("bulk_margin = {m}\n"));
        }
        out.push_str(&format!("eps = {}\n", self.eps));
        out.push_str(&format!("seed = {}\n", self.seed));
        out
    }

    /// Build the graph and cross-check the declared degree bound.
    pub fn generate(&self) -> Result<Graph, ConfigError> {
        let g = self.generator.generate()?;
        if g.degree_bound() > self.delta {
            return Err(ConfigError::DeltaMismatch {
                declared: self.delta,
                actual: g.degree_bound(),
            });
        }
        Ok(g)
    }
}
