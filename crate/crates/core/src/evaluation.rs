//! Accuracy estimation: learning curves over random partitions, leave-one-out,
//! theory-only classification and paired significance tests.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::dataset::{partition_indices, Dataset};
use crate::error::{Error, Result};
use crate::interpreter::{InterpreterKind, InterpreterOptions, Redescriber};
use crate::learner::{Classifier, Learner, LearningSet};
use crate::par_map;
use crate::theory::Theory;

/// How examples are presented to the learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// The original nominal features.
    Plain,
    /// Partial-match redescription.
    Tgci,
    /// All-or-none redescription.
    Boolean,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Plain, Method::Tgci, Method::Boolean];

    pub fn name(self) -> &'static str {
        match self {
            Method::Plain => "plain",
            Method::Tgci => "tgci",
            Method::Boolean => "boolean",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Method> {
        match s.to_ascii_lowercase().as_str() {
            "plain" | "c4.5" | "c45" => Ok(Method::Plain),
            "tgci" | "partial" => Ok(Method::Tgci),
            "boolean" | "miro" => Ok(Method::Boolean),
            _ => Err(Error::Evaluation(format!(
                "unknown method `{s}` (expected plain, tgci or boolean)"
            ))),
        }
    }
}

/// Builds the learner input for `method`. `options.kind` is overridden by the
/// method; the remaining interpreter flags apply to both redescriptions.
pub fn prepare(
    method: Method,
    data: &Dataset,
    theories: &[Theory],
    options: &InterpreterOptions,
) -> Result<LearningSet> {
    let kind = match method {
        Method::Plain => return Ok(LearningSet::from_dataset(data)),
        Method::Tgci => InterpreterKind::PartialMatch,
        Method::Boolean => InterpreterKind::Boolean,
    };
    let options = InterpreterOptions {
        kind,
        ..options.clone()
    };
    Ok(Redescriber::new(data.schema(), theories, &options)?.learning_set(data))
}

pub fn accuracy<C: Classifier>(model: &C, data: &LearningSet) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Evaluation("accuracy of an empty test set".into()));
    }
    let mut correct = 0;
    for (row, &label) in data.rows().iter().zip(data.labels()) {
        if model.predict(row)? == label {
            correct += 1;
        }
    }
    Ok(correct as f64 / data.len() as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryScore {
    pub concept: String,
    pub accuracy: f64,
    /// Examples for which the theory's root is strictly true.
    pub exact_matches: usize,
    pub predictions: Vec<usize>,
}

/// Classifies with the theory alone: positive iff the concept's root holds
/// under boolean semantics. The concept named like the positive class is
/// used when present, otherwise the first concept.
pub fn theory_only_classify(theory: &Theory, data: &Dataset) -> Result<TheoryScore> {
    let schema = data.schema();
    let positive = schema.positive_class().ok_or(Error::MissingPositiveClass)?;
    let negative = (0..schema.classes().len())
        .find(|&c| c != positive)
        .ok_or_else(|| Error::Evaluation("theory-only classification needs two classes".into()))?;
    let label = &schema.classes()[positive];
    let concept = theory
        .concept(label)
        .or_else(|| theory.concepts().first())
        .ok_or(Error::EmptyTheory)?;
    let single = Theory::from_concepts(vec![concept.clone()]);
    let options = InterpreterOptions {
        include_original_features: true,
        ..InterpreterOptions::boolean()
    };
    let r = Redescriber::new(schema, &[single], &options)?;
    let predictions: Vec<usize> = data
        .examples()
        .iter()
        .map(|e| {
            if r.interpret(e).0[0] == 1.0 {
                positive
            } else {
                negative
            }
        })
        .collect();
    let correct = predictions
        .iter()
        .zip(data.examples())
        .filter(|(p, e)| **p == e.class)
        .count();
    Ok(TheoryScore {
        concept: concept.name.clone(),
        accuracy: correct as f64 / data.len().max(1) as f64,
        exact_matches: predictions.iter().filter(|&&p| p == positive).count(),
        predictions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePlan {
    pub sizes: Vec<usize>,
    pub test_size: usize,
    pub partitions: usize,
    pub base_seed: u64,
}

impl CurvePlan {
    pub fn seeds(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.partitions as u64).map(move |k| self.base_seed.wrapping_add(k))
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::Evaluation("no training sizes given".into()));
        }
        if self.sizes.contains(&0) {
            return Err(Error::Evaluation("training sizes must be positive".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Evaluation(
                "training sizes must be strictly increasing".into(),
            ));
        }
        if self.test_size == 0 {
            return Err(Error::Evaluation("test size must be positive".into()));
        }
        if self.partitions == 0 {
            return Err(Error::Evaluation(
                "at least one partition is required".into(),
            ));
        }
        let need = self.sizes[self.sizes.len() - 1] + self.test_size;
        if need > n {
            return Err(Error::SizeExceedsDataset {
                requested: need,
                available: n,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub seed: u64,
    pub train_size: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub train_size: usize,
    pub mean: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveResult {
    pub method: String,
    pub points: Vec<CurvePoint>,
    pub runs: Vec<RunRow>,
    #[serde(skip)]
    pub elapsed_secs: f64,
}

impl CurveResult {
    /// Accuracies at `train_size`, in seed order.
    pub fn accuracies_at(&self, train_size: usize) -> Vec<f64> {
        self.runs
            .iter()
            .filter(|r| r.train_size == train_size)
            .map(|r| r.accuracy)
            .collect()
    }
}

/// Mean and half-width of a two-sided 95% t interval.
pub fn mean_ci(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975);
    (mean, t * (var / n as f64).sqrt())
}

/// Learning curve over `plan.partitions` random partitions. Each partition
/// draws one shuffled train pool of the largest size plus a fixed test set;
/// smaller training sets are prefixes of that pool.
pub fn learning_curve<L>(
    learner: &L,
    data: &LearningSet,
    plan: &CurvePlan,
    method: &str,
) -> Result<CurveResult>
where
    L: Learner + Sync,
{
    plan.validate(data.len())?;
    let start = Instant::now();
    let max = plan.sizes[plan.sizes.len() - 1];
    let seeds: Vec<u64> = plan.seeds().collect();
    let per_seed = par_map(&seeds, |&seed| -> Result<Vec<RunRow>> {
        let (train, test) = partition_indices(data.len(), max, plan.test_size, seed)?;
        let test = data.subset(&test);
        plan.sizes
            .iter()
            .map(|&size| {
                let model = learner.train(&data.subset(&train[..size]))?;
                Ok(RunRow {
                    seed,
                    train_size: size,
                    accuracy: accuracy(&model, &test)?,
                })
            })
            .collect()
    });
    let mut runs = Vec::new();
    for r in per_seed {
        runs.extend(r?);
    }
    let points = plan
        .sizes
        .iter()
        .map(|&size| {
            let accs: Vec<f64> = runs
                .iter()
                .filter(|r| r.train_size == size)
                .map(|r| r.accuracy)
                .collect();
            let (mean, half) = mean_ci(&accs);
            CurvePoint {
                train_size: size,
                mean,
                ci_low: mean - half,
                ci_high: mean + half,
                n: accs.len(),
            }
        })
        .collect();
    Ok(CurveResult {
        method: method.to_string(),
        points,
        runs,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LooResult {
    pub accuracy: f64,
    pub correct: Vec<bool>,
}

/// Leave-one-out: train on all but one example, test on it, for every example.
pub fn leave_one_out<L>(learner: &L, data: &LearningSet) -> Result<LooResult>
where
    L: Learner + Sync,
{
    let n = data.len();
    if n < 2 {
        return Err(Error::Evaluation(
            "leave-one-out needs at least two examples".into(),
        ));
    }
    let folds: Vec<usize> = (0..n).collect();
    let correct = par_map(&folds, |&held| -> Result<bool> {
        let train: Vec<usize> = (0..n).filter(|&i| i != held).collect();
        let model = learner.train(&data.subset(&train))?;
        Ok(model.predict(&data.rows()[held])? == data.labels()[held])
    })
    .into_iter()
    .collect::<Result<Vec<bool>>>()?;
    Ok(LooResult {
        accuracy: correct.iter().filter(|&&c| c).count() as f64 / n as f64,
        correct,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedTest {
    pub n: usize,
    pub mean_difference: f64,
    pub t_statistic: Option<f64>,
    /// One-sided p-value for the alternative "a is more accurate than b".
    pub p_value: f64,
    /// Set when all differences are identical, so no t statistic exists.
    pub zero_variance: bool,
}

/// One-sided paired t-test on per-partition accuracies `a` and `b`.
pub fn paired_significance(a: &[f64], b: &[f64]) -> Result<PairedTest> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Evaluation(
            "paired test needs at least two pairs".into(),
        ));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if sd <= 1e-12 * mean.abs().max(1.0) {
        let p_value = if mean > 1e-12 {
            0.0
        } else if mean < -1e-12 {
            1.0
        } else {
            0.5
        };
        return Ok(PairedTest {
            n,
            mean_difference: mean,
            t_statistic: None,
            p_value,
            zero_variance: true,
        });
    }
    let t = mean / (sd / (n as f64).sqrt());
    let dist = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("positive degrees of freedom");
    Ok(PairedTest {
        n,
        mean_difference: mean,
        t_statistic: Some(t),
        p_value: 1.0 - dist.cdf(t),
        zero_variance: false,
    })
}

/// Learning curves for several methods over identical partitions, plus paired
/// tests of the first method against each other one at every size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub curves: Vec<CurveResult>,
    pub tests: Vec<SizeTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeTest {
    pub train_size: usize,
    pub method: String,
    pub baseline: String,
    pub test: PairedTest,
}

pub fn compare_methods<L>(
    learner: &L,
    data: &Dataset,
    theories: &[Theory],
    options: &InterpreterOptions,
    methods: &[Method],
    plan: &CurvePlan,
) -> Result<Comparison>
where
    L: Learner + Sync,
{
    let curves = methods
        .iter()
        .map(|&m| {
            learning_curve(
                learner,
                &prepare(m, data, theories, options)?,
                plan,
                m.name(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tests = Vec::new();
    if plan.partitions >= 2 {
        if let Some((first, rest)) = curves.split_first() {
            for other in rest {
                for &size in &plan.sizes {
                    tests.push(SizeTest {
                        train_size: size,
                        method: first.method.clone(),
                        baseline: other.method.clone(),
                        test: paired_significance(
                            &first.accuracies_at(size),
                            &other.accuracies_at(size),
                        )?,
                    });
                }
            }
        }
    }
    Ok(Comparison { curves, tests })
}

/// `method,train_size,mean,ci_low,ci_high,n` rows.
pub fn curve_csv(curves: &[CurveResult]) -> String {
    let mut out = String::from("method,train_size,mean,ci_low,ci_high,n\n");
    for c in curves {
        for p in &c.points {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.method, p.train_size, p.mean, p.ci_low, p.ci_high, p.n
            ));
        }
    }
    out
}

/// Per-partition accuracies: `method,seed,train_size,accuracy`.
pub fn runs_csv(curves: &[CurveResult]) -> String {
    let mut out = String::from("method,seed,train_size,accuracy\n");
    for c in curves {
        for r in &c.runs {
            out.push_str(&format!(
                "{},{},{},{}\n",
                c.method, r.seed, r.train_size, r.accuracy
            ));
        }
    }
    out
}

/// Gnuplot data file with one index block per method (`plot ... index i`),
/// columns `train_size mean_percent ci_low_percent ci_high_percent`.
pub fn curve_gnuplot(curves: &[CurveResult]) -> String {
    let mut out = String::new();
    for (i, c) in curves.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        out.push_str(&format!(
            "# {}\n# train_size accuracy ci_low ci_high\n",
            c.method
        ));
        for p in &c.points {
            out.push_str(&format!(
                "{} {:.4} {:.4} {:.4}\n",
                p.train_size,
                100.0 * p.mean,
                100.0 * p.ci_low,
                100.0 * p.ci_high
            ));
        }
    }
    out
}
