//! Run configuration: a flat `key = value` document whose keys are the long
//! flag names. Values from a config file are applied first, then flags.

use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use tgci::interpreter::{InterpreterKind, InterpreterOptions};
use tgci::perturbation::Level;
use tgci::{LearnerParams, Method, PerturbKind};

pub const BUILTIN_PROMOTER: &str = "builtin:promoter";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    /// `.csv` files are tabular, anything else `class,name,sequence`.
    Auto,
    Sequence,
    Tabular,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub theory: Vec<String>,
    pub fragment: Vec<String>,
    pub data: Option<PathBuf>,
    pub format: DataFormat,
    pub positions: String,
    pub positive: Option<String>,
    pub out: PathBuf,
    pub seed: u64,
    pub jobs: Option<usize>,
    pub interp: InterpreterKind,
    pub not_emits_feature: bool,
    pub include_original: bool,
    pub top_feature: bool,
    pub min_leaf: usize,
    pub confidence: f64,
    pub gain_ratio: bool,
    pub prune: bool,
    pub method: Vec<Method>,
    pub sizes: Vec<usize>,
    pub test: usize,
    pub partitions: usize,
    pub train_size: Option<usize>,
    pub kind: PerturbKind,
    pub rate: f64,
    pub replicate: u64,
    pub matches_rates: Vec<f64>,
    pub mismatches_rates: Vec<f64>,
    pub replicates: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let learner = LearnerParams::default();
        RunConfig {
            theory: vec![BUILTIN_PROMOTER.into()],
            fragment: Vec::new(),
            data: None,
            format: DataFormat::Auto,
            positions: "-50:7".into(),
            positive: None,
            out: PathBuf::from("out"),
            seed: 0,
            jobs: None,
            interp: InterpreterKind::PartialMatch,
            not_emits_feature: false,
            include_original: false,
            top_feature: true,
            min_leaf: learner.min_leaf,
            confidence: learner.pruning_confidence,
            gain_ratio: learner.use_gain_ratio,
            prune: learner.prune,
            method: vec![Method::Tgci],
            sizes: (8..=80).step_by(8).collect(),
            test: 26,
            partitions: 50,
            train_size: None,
            kind: PerturbKind::FewerMatches,
            rate: 0.3,
            replicate: 0,
            matches_rates: vec![0.1, 0.3, 0.6, 0.9],
            mismatches_rates: vec![0.3, 0.6, 0.9],
            replicates: 10,
        }
    }
}

fn list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => bail!("invalid value `{v}` for {key}: expected true or false"),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str, what: &str) -> Result<T> {
    v.parse()
        .map_err(|_| anyhow!("invalid value `{v}` for {key}: expected {what}"))
}

fn parse_rates(key: &str, v: &str) -> Result<Vec<f64>> {
    list(v)
        .map(|r| {
            let x: f64 = parse_num(key, r, "a rate between 0 and 1")?;
            if !(0.0..=1.0).contains(&x) {
                bail!("invalid value `{r}` for {key}: rates lie between 0 and 1");
            }
            Ok(x)
        })
        .collect()
}

/// `start:end:step` (inclusive) or a comma-separated list.
pub fn parse_sizes(v: &str) -> Result<Vec<usize>> {
    let bad = || {
        anyhow!(
            "invalid value `{v}` for sizes: expected `start:end:step` or a list like `10,20,40`"
        )
    };
    let sizes: Vec<usize> = if v.contains(':') {
        let parts: Vec<usize> = v
            .split(':')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<Result<_>>()?;
        let [start, end, step] = parts[..] else {
            return Err(bad());
        };
        if step == 0 || start > end {
            return Err(bad());
        }
        (start..=end).step_by(step).collect()
    } else {
        list(v)
            .map(|s| s.parse().map_err(|_| bad()))
            .collect::<Result<_>>()?
    };
    if sizes.is_empty() {
        return Err(bad());
    }
    Ok(sizes)
}

fn fmt_list<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub const KEYS: [&'static str; 28] = [
        "theory",
        "fragment",
        "data",
        "format",
        "positions",
        "positive",
        "out",
        "seed",
        "jobs",
        "interp",
        "not-emits-feature",
        "include-original",
        "top-feature",
        "min-leaf",
        "confidence",
        "gain-ratio",
        "prune",
        "method",
        "sizes",
        "test",
        "partitions",
        "train-size",
        "kind",
        "rate",
        "replicate",
        "matches-rates",
        "mismatches-rates",
        "replicates",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let opt = |v: &str| (!v.is_empty()).then(|| v.to_string());
        match key {
            "theory" => self.theory = list(v).map(String::from).collect(),
            "fragment" => self.fragment = list(v).map(String::from).collect(),
            "data" => self.data = opt(v).map(PathBuf::from),
            "format" => {
                self.format = match v {
                    "auto" => DataFormat::Auto,
                    "sequence" => DataFormat::Sequence,
                    "tabular" => DataFormat::Tabular,
                    _ => {
                        bail!("invalid value `{v}` for format: expected auto, sequence or tabular")
                    }
                }
            }
            "positions" => {
                tgci::PositionsSpec::parse_range(v)
                    .with_context(|| format!("invalid value `{v}` for positions"))?;
                self.positions = v.to_string();
            }
            "positive" => self.positive = opt(v),
            "out" => self.out = PathBuf::from(v),
            "seed" => self.seed = parse_num(key, v, "a non-negative integer")?,
            "jobs" => {
                self.jobs = if v.is_empty() {
                    None
                } else {
                    Some(parse_num(key, v, "a thread count (0 for all cores)")?)
                }
            }
            "interp" => {
                self.interp = match v {
                    "partial" | "partial-match" => InterpreterKind::PartialMatch,
                    "boolean" => InterpreterKind::Boolean,
                    _ => bail!("invalid value `{v}` for interp: expected partial or boolean"),
                }
            }
            "not-emits-feature" => self.not_emits_feature = parse_bool(key, v)?,
            "include-original" => self.include_original = parse_bool(key, v)?,
            "top-feature" => self.top_feature = parse_bool(key, v)?,
            "min-leaf" => self.min_leaf = parse_num(key, v, "a positive integer")?,
            "confidence" => self.confidence = parse_num(key, v, "a number in (0, 1]")?,
            "gain-ratio" => self.gain_ratio = parse_bool(key, v)?,
            "prune" => self.prune = parse_bool(key, v)?,
            "method" => {
                self.method = list(v)
                    .map(|m| m.parse::<Method>().map_err(anyhow::Error::from))
                    .collect::<Result<_>>()?;
                if self.method.is_empty() {
                    bail!("method needs at least one of plain, tgci, boolean");
                }
            }
            "sizes" => self.sizes = parse_sizes(v)?,
            "test" => self.test = parse_num(key, v, "a positive integer")?,
            "partitions" => self.partitions = parse_num(key, v, "a positive integer")?,
            "train-size" => {
                self.train_size = if v.is_empty() {
                    None
                } else {
                    Some(parse_num(key, v, "a positive integer")?)
                }
            }
            "kind" => self.kind = v.parse::<PerturbKind>()?,
            "rate" => {
                self.rate = parse_rates(key, v)?
                    .first()
                    .copied()
                    .ok_or_else(|| anyhow!("rate is empty"))?
            }
            "replicate" => self.replicate = parse_num(key, v, "a non-negative integer")?,
            "matches-rates" => self.matches_rates = parse_rates(key, v)?,
            "mismatches-rates" => self.mismatches_rates = parse_rates(key, v)?,
            "replicates" => self.replicates = parse_num(key, v, "a positive integer")?,
            _ => bail!(
                "unknown setting `{key}`; known settings: {}",
                Self::KEYS.join(", ")
            ),
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> String {
        let b = |x: bool| x.to_string();
        match key {
            "theory" => self.theory.join(","),
            "fragment" => self.fragment.join(","),
            "data" => self
                .data
                .as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_default(),
            "format" => match self.format {
                DataFormat::Auto => "auto",
                DataFormat::Sequence => "sequence",
                DataFormat::Tabular => "tabular",
            }
            .into(),
            "positions" => self.positions.clone(),
            "positive" => self.positive.clone().unwrap_or_default(),
            "out" => self.out.display().to_string(),
            "seed" => self.seed.to_string(),
            "jobs" => self.jobs.map(|j| j.to_string()).unwrap_or_default(),
            "interp" => match self.interp {
                InterpreterKind::PartialMatch => "partial",
                InterpreterKind::Boolean => "boolean",
            }
            .into(),
            "not-emits-feature" => b(self.not_emits_feature),
            "include-original" => b(self.include_original),
            "top-feature" => b(self.top_feature),
            "min-leaf" => self.min_leaf.to_string(),
            "confidence" => self.confidence.to_string(),
            "gain-ratio" => b(self.gain_ratio),
            "prune" => b(self.prune),
            "method" => fmt_list(&self.method),
            "sizes" => fmt_list(&self.sizes),
            "test" => self.test.to_string(),
            "partitions" => self.partitions.to_string(),
            "train-size" => self.train_size.map(|t| t.to_string()).unwrap_or_default(),
            "kind" => self.kind.to_string(),
            "rate" => self.rate.to_string(),
            "replicate" => self.replicate.to_string(),
            "matches-rates" => fmt_list(&self.matches_rates),
            "mismatches-rates" => fmt_list(&self.mismatches_rates),
            "replicates" => self.replicates.to_string(),
            _ => String::new(),
        }
    }

    /// Applies a flat config document. Repeated keys are rejected.
    pub fn apply_flat(&mut self, text: &str) -> Result<()> {
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, found `{line}`", i + 1))?;
            let key = key.trim();
            if seen.contains(&key) {
                bail!("line {}: `{key}` is set more than once", i + 1);
            }
            seen.push(key);
            self.set(key, value)
                .with_context(|| format!("line {}", i + 1))?;
        }
        Ok(())
    }

    pub fn to_flat(&self, command: &str) -> String {
        let mut out = format!("# resolved settings for `tgci {command}`; replay with `tgci {command} --config <this file>`\n");
        for key in Self::KEYS {
            let _ = writeln!(out, "{key} = {}", self.get(key));
        }
        out
    }

    pub fn interpreter(&self) -> InterpreterOptions {
        InterpreterOptions {
            kind: self.interp,
            not_emits_feature: self.not_emits_feature,
            include_original_features: self.include_original,
            top_feature_included: self.top_feature,
        }
    }

    pub fn learner(&self) -> LearnerParams {
        LearnerParams {
            min_leaf: self.min_leaf,
            pruning_confidence: self.confidence,
            use_gain_ratio: self.gain_ratio,
            prune: self.prune,
            seed: self.seed,
        }
    }

    pub fn levels(&self) -> Vec<Level> {
        let mut levels: Vec<Level> = self
            .matches_rates
            .iter()
            .map(|&r| Level::new(PerturbKind::FewerMatches, r))
            .collect();
        levels.extend(
            self.mismatches_rates
                .iter()
                .map(|&r| Level::new(PerturbKind::FewerMismatches, r)),
        );
        levels
    }
}
