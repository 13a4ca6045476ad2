//! Controlled changes to how closely positive examples match a theory.
//!
//! For each positive example the theory's OR nodes are resolved top-down to
//! the disjunct the example matches best, which fixes an expected value for
//! every feature the chosen rules test. Examples are then moved away from the
//! theory (`FewerMatches`: matching features are re-drawn at random) or towards
//! it (`FewerMismatches`: mismatching features are set to the expected value).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::dataset::{Dataset, Example, Schema};
use crate::error::{Error, Result};
use crate::evaluation::{leave_one_out, mean_ci, prepare, Method};
use crate::interpreter::{tgci1, InterpreterOptions};
use crate::learner::Learner;
use crate::rng::{self, PERTURB_STREAM_BASE};
use crate::theory::{Concept, NodeKind, Theory, TheoryNode};

/// Printed alongside every proximity sweep.
pub const PROXIMITY_CAVEAT: &str =
    "Proximity values left and right of 0 come from different operations \
(re-drawing matching features versus repairing mismatching ones); the two halves of the scale \
may not be directly comparable.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PerturbKind {
    FewerMatches,
    FewerMismatches,
}

impl PerturbKind {
    pub fn name(self) -> &'static str {
        match self {
            PerturbKind::FewerMatches => "fewer-matches",
            PerturbKind::FewerMismatches => "fewer-mismatches",
        }
    }

    /// Position on the proximity scale for a given rate.
    pub fn proximity(self, rate: f64) -> f64 {
        match self {
            PerturbKind::FewerMatches => -100.0 * rate,
            PerturbKind::FewerMismatches => 100.0 * rate,
        }
    }
}

impl fmt::Display for PerturbKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PerturbKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('_', "-").to_ascii_lowercase().as_str() {
            "fewer-matches" => Ok(PerturbKind::FewerMatches),
            "fewer-mismatches" => Ok(PerturbKind::FewerMismatches),
            _ => Err(Error::Evaluation(format!(
                "unknown perturbation `{s}` (expected fewer-matches or fewer-mismatches)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximitySpec {
    pub kind: PerturbKind,
    pub rate: f64,
    pub seed: u64,
    pub replicate: u64,
}

/// Index of the child of an OR node with the highest partial-match score,
/// lowest index on ties.
pub fn intended_disjunct(node: &TheoryNode, schema: &Schema, ex: &Example) -> Result<usize> {
    let NodeKind::Or { children } = &node.kind else {
        return Err(Error::Evaluation(format!(
            "`{}` is not a disjunction",
            node.path
        )));
    };
    let mut best = (0, f64::NEG_INFINITY);
    for (i, child) in children.iter().enumerate() {
        let top = tgci1(child, schema, ex)?.top;
        if top > best.1 {
            best = (i, top);
        }
    }
    Ok(best.0)
}

/// The concept that describes the positive class: the one named after it,
/// otherwise the first.
pub(crate) fn positive_concept<'a>(theory: &'a Theory, schema: &Schema) -> Result<&'a Concept> {
    let label = schema
        .positive_class()
        .map(|c| schema.classes()[c].as_str());
    label
        .and_then(|l| theory.concept(l))
        .or_else(|| theory.concepts().first())
        .ok_or(Error::EmptyTheory)
}

/// Expected value index per feature under the example's intended disjuncts,
/// `None` where the chosen rules say nothing.
pub fn expected_values(
    theory: &Theory,
    schema: &Schema,
    ex: &Example,
) -> Result<Vec<Option<usize>>> {
    let concept = positive_concept(theory, schema)?;
    let mut not_at = None;
    concept.root.walk(&mut |n| {
        if not_at.is_none() && matches!(n.kind, NodeKind::Not { .. }) {
            not_at = Some(n.path.clone());
        }
    });
    if let Some(path) = not_at {
        return Err(Error::NegationUnsupported(path));
    }
    let mut expected = vec![None; schema.features().len()];
    fix(&concept.root, schema, ex, &mut expected)?;
    Ok(expected)
}

fn fix(
    node: &TheoryNode,
    schema: &Schema,
    ex: &Example,
    expected: &mut [Option<usize>],
) -> Result<()> {
    match &node.kind {
        NodeKind::Leaf { condition } => {
            let outside = || Error::ConditionOutsideSchema {
                feature: condition.feature.clone(),
                value: condition.value.clone(),
            };
            let f = schema
                .feature_index(&condition.feature)
                .ok_or_else(outside)?;
            let v = schema.features()[f]
                .value_index(&condition.value)
                .ok_or_else(outside)?;
            match expected[f] {
                Some(prev) if prev != v => {
                    let values = &schema.features()[f].values;
                    return Err(Error::ConflictingExpectation {
                        example: ex.id.clone(),
                        feature: condition.feature.clone(),
                        first: values[prev].clone(),
                        second: values[v].clone(),
                    });
                }
                _ => expected[f] = Some(v),
            }
        }
        NodeKind::True => {}
        NodeKind::And { children } => {
            for c in children {
                fix(c, schema, ex, expected)?;
            }
        }
        NodeKind::Or { children } => {
            let k = intended_disjunct(node, schema, ex)?;
            fix(&children[k], schema, ex, expected)?;
        }
        NodeKind::Not { .. } => return Err(Error::NegationUnsupported(node.path.clone())),
    }
    Ok(())
}

/// A copy of `data` with positive examples perturbed per `spec`. Negative
/// examples are untouched.
pub fn perturb(data: &Dataset, theory: &Theory, spec: &ProximitySpec) -> Result<Dataset> {
    if !(0.0..=1.0).contains(&spec.rate) {
        return Err(Error::Evaluation(format!(
            "rate must lie in [0, 1], got {}",
            spec.rate
        )));
    }
    let schema = data.schema();
    let positive = schema.positive_class().ok_or(Error::MissingPositiveClass)?;
    let mut rng = rng::stream(spec.seed, PERTURB_STREAM_BASE.wrapping_add(spec.replicate));
    let mut out = Vec::with_capacity(data.len());
    for ex in data.examples() {
        let mut ex = ex.clone();
        if ex.class == positive {
            let expected = expected_values(theory, schema, &ex)?;
            for (f, want) in expected.into_iter().enumerate() {
                let Some(want) = want else { continue };
                match spec.kind {
                    PerturbKind::FewerMatches
                        if ex.values[f] == want && rng::unit(&mut rng) < spec.rate =>
                    {
                        let n = schema.features()[f].values.len() as u64;
                        ex.values[f] = rng::below(&mut rng, n) as usize;
                    }
                    PerturbKind::FewerMismatches
                        if ex.values[f] != want && rng::unit(&mut rng) < spec.rate =>
                    {
                        ex.values[f] = want;
                    }
                    _ => {}
                }
            }
        }
        out.push(ex);
    }
    Dataset::new(schema.clone(), out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Level {
    pub kind: PerturbKind,
    pub rate: f64,
}

impl Level {
    pub fn new(kind: PerturbKind, rate: f64) -> Self {
        Level { kind, rate }
    }
}

/// Levels of the full scale: 10, 30, 60 and 90% fewer matches and 30, 60
/// and 90% fewer mismatches.
pub fn standard_levels() -> Vec<Level> {
    let mut levels: Vec<Level> = [0.1, 0.3, 0.6, 0.9]
        .iter()
        .map(|&r| Level::new(PerturbKind::FewerMatches, r))
        .collect();
    levels.extend(
        [0.3, 0.6, 0.9]
            .iter()
            .map(|&r| Level::new(PerturbKind::FewerMismatches, r)),
    );
    levels
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPlan {
    pub levels: Vec<Level>,
    pub replicates: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub proximity: f64,
    /// `None` for the unperturbed data.
    pub kind: Option<PerturbKind>,
    pub rate: f64,
    pub method: Method,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub caveat: String,
}

/// Leave-one-out accuracy of each method on the original data and on
/// `replicates` perturbed copies per `(kind, rate)`, ordered by proximity.
pub fn proximity_sweep<L>(
    learner: &L,
    data: &Dataset,
    theory: &Theory,
    options: &InterpreterOptions,
    plan: &SweepPlan,
) -> Result<SweepTable>
where
    L: Learner + Sync,
{
    if plan.replicates == 0 {
        return Err(Error::Evaluation(
            "at least one replicate is required".into(),
        ));
    }
    if let Some(l) = plan.levels.iter().find(|l| !(0.0..=1.0).contains(&l.rate)) {
        return Err(Error::Evaluation(format!(
            "rate must lie in [0, 1], got {}",
            l.rate
        )));
    }
    let theories = std::slice::from_ref(theory);
    let loo = |d: &Dataset, m: Method| -> Result<f64> {
        Ok(leave_one_out(learner, &prepare(m, d, theories, options)?)?.accuracy)
    };
    let mut rows = Vec::new();
    for &method in &plan.methods {
        let acc = loo(data, method)?;
        rows.push(SweepRow {
            proximity: 0.0,
            kind: None,
            rate: 0.0,
            method,
            mean: acc,
            ci_low: acc,
            ci_high: acc,
            n: 1,
        });
    }
    for level in &plan.levels {
        let (kind, rate) = (level.kind, level.rate);
        if rate <= 0.0 {
            continue;
        }
        {
            let copies = (0..plan.replicates as u64)
                .map(|replicate| {
                    perturb(
                        data,
                        theory,
                        &ProximitySpec {
                            kind,
                            rate,
                            seed: plan.seed,
                            replicate,
                        },
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            for &method in &plan.methods {
                let accs = copies
                    .iter()
                    .map(|d| loo(d, method))
                    .collect::<Result<Vec<_>>>()?;
                let (mean, half) = mean_ci(&accs);
                rows.push(SweepRow {
                    proximity: kind.proximity(rate),
                    kind: Some(kind),
                    rate,
                    method,
                    mean,
                    ci_low: mean - half,
                    ci_high: mean + half,
                    n: accs.len(),
                });
            }
        }
    }
    rows.sort_by(|a, b| a.proximity.total_cmp(&b.proximity));
    Ok(SweepTable {
        rows,
        caveat: PROXIMITY_CAVEAT.to_string(),
    })
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from("proximity,kind,rate,method,mean,ci_low,ci_high,n\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            r.proximity,
            r.kind.map_or("original", PerturbKind::name),
            r.rate,
            r.method,
            r.mean,
            r.ci_low,
            r.ci_high,
            r.n
        ));
    }
    out
}

/// One gnuplot index block per method: `proximity accuracy ci_low ci_high`.
pub fn sweep_gnuplot(table: &SweepTable) -> String {
    let mut methods: Vec<Method> = Vec::new();
    for r in &table.rows {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    let mut out = format!("# {}\n", table.caveat);
    for (i, m) in methods.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        out.push_str(&format!("# {m}\n# proximity accuracy ci_low ci_high\n"));
        for r in table.rows.iter().filter(|r| r.method == *m) {
            out.push_str(&format!(
                "{} {:.4} {:.4} {:.4}\n",
                r.proximity,
                100.0 * r.mean,
                100.0 * r.ci_low,
                100.0 * r.ci_high
            ));
        }
    }
    out
}
