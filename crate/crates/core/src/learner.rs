//! Decision-tree induction in the C4.5 style.
//!
//! Continuous attributes are split with binary `<= t` tests at midpoints
//! between adjacent observed values; nominal attributes get one branch per
//! value. Splits are chosen by gain ratio among the candidates whose
//! information gain is at least the average gain of all positive-gain
//! candidates, and the grown tree is pruned by pessimistic error estimation
//! with subtree replacement.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AttributeKind {
    Continuous,
    /// Values are encoded as indices into `values`.
    Nominal {
        values: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attribute {
    pub name: String,
    #[serde(flatten)]
    pub kind: AttributeKind,
}

/// A learner-ready table: one numeric row per example plus a class index.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningSet {
    attributes: Vec<Attribute>,
    classes: Vec<String>,
    ids: Vec<String>,
    rows: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl LearningSet {
    pub fn new(
        attributes: Vec<Attribute>,
        classes: Vec<String>,
        rows: Vec<(String, Vec<f64>, usize)>,
    ) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::Params(
                "learning set needs at least one class".into(),
            ));
        }
        let mut set = LearningSet {
            attributes,
            classes,
            ids: Vec::with_capacity(rows.len()),
            rows: Vec::with_capacity(rows.len()),
            labels: Vec::with_capacity(rows.len()),
        };
        for (id, values, label) in rows {
            if values.len() != set.attributes.len() {
                return Err(Error::DimensionMismatch {
                    expected: set.attributes.len(),
                    actual: values.len(),
                });
            }
            if label >= set.classes.len() {
                return Err(Error::Params(format!("class index {label} out of range")));
            }
            set.ids.push(id);
            set.rows.push(values);
            set.labels.push(label);
        }
        Ok(set)
    }

    /// The original nominal features of `data`, one attribute each.
    pub fn from_dataset(data: &Dataset) -> Self {
        let attributes = data
            .schema()
            .features()
            .iter()
            .map(|f| Attribute {
                name: f.name.clone(),
                kind: AttributeKind::Nominal {
                    values: f.values.clone(),
                },
            })
            .collect();
        LearningSet {
            attributes,
            classes: data.schema().classes().to_vec(),
            ids: data.examples().iter().map(|e| e.id.clone()).collect(),
            rows: data
                .examples()
                .iter()
                .map(|e| e.values.iter().map(|&v| v as f64).collect())
                .collect(),
            labels: data.examples().iter().map(|e| e.class).collect(),
        }
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn subset(&self, indices: &[usize]) -> LearningSet {
        LearningSet {
            attributes: self.attributes.clone(),
            classes: self.classes.clone(),
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LearnerParams {
    pub min_leaf: usize,
    pub pruning_confidence: f64,
    pub use_gain_ratio: bool,
    pub prune: bool,
    /// Unused by the tree builder itself, which is deterministic; carried so a
    /// run's configuration is complete.
    pub seed: u64,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            min_leaf: 2,
            pruning_confidence: 0.25,
            use_gain_ratio: true,
            prune: true,
            seed: 0,
        }
    }
}

impl LearnerParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_leaf < 1 {
            return Err(Error::Params("min_leaf must be at least 1".into()));
        }
        if !(self.pruning_confidence > 0.0 && self.pruning_confidence <= 1.0) {
            return Err(Error::Params(format!(
                "pruning_confidence must lie in (0, 1], got {}",
                self.pruning_confidence
            )));
        }
        Ok(())
    }
}

pub trait Classifier {
    fn predict(&self, row: &[f64]) -> Result<usize>;
}

pub trait Learner {
    type Model: Classifier;
    fn train(&self, data: &LearningSet) -> Result<Self::Model>;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Test {
    /// Left branch when `value <= threshold`.
    Threshold { feature: usize, threshold: f64 },
    /// One branch per nominal value index.
    Nominal { feature: usize },
}

impl Test {
    pub fn feature(&self) -> usize {
        match *self {
            Test::Threshold { feature, .. } | Test::Nominal { feature } => feature,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum Node {
    Leaf {
        class: usize,
        counts: Vec<usize>,
    },
    Split {
        test: Test,
        class: usize,
        counts: Vec<usize>,
        children: Vec<Node>,
    },
}

impl Node {
    pub fn counts(&self) -> &[usize] {
        match self {
            Node::Leaf { counts, .. } | Node::Split { counts, .. } => counts,
        }
    }

    pub fn class(&self) -> usize {
        match *self {
            Node::Leaf { class, .. } | Node::Split { class, .. } => class,
        }
    }

    fn total(&self) -> usize {
        self.counts().iter().sum()
    }

    pub fn leaves(&self) -> usize {
        match self {
            Node::Leaf { .. } => 1,
            Node::Split { children, .. } => children.iter().map(Node::leaves).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Leaf { .. } => 0,
            Node::Split { children, .. } => 1 + children.iter().map(Node::depth).max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecisionTree {
    pub attributes: Vec<Attribute>,
    pub classes: Vec<String>,
    pub params: LearnerParams,
    pub root: Node,
}

impl DecisionTree {
    pub fn n_features(&self) -> usize {
        self.attributes.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }

    /// Text rendering using the tree's own attribute names.
    pub fn render(&self) -> String {
        let names: Vec<String> = self.attributes.iter().map(|a| a.name.clone()).collect();
        render_tree(self, &names).expect("own names match")
    }
}

impl Classifier for DecisionTree {
    fn predict(&self, row: &[f64]) -> Result<usize> {
        if row.len() != self.n_features() {
            return Err(Error::DimensionMismatch {
                expected: self.n_features(),
                actual: row.len(),
            });
        }
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf { class, .. } => return Ok(*class),
                Node::Split { test, children, .. } => {
                    node = match *test {
                        Test::Threshold { feature, threshold } => {
                            if row[feature] <= threshold {
                                &children[0]
                            } else {
                                &children[1]
                            }
                        }
                        Test::Nominal { feature } => {
                            let v = row[feature];
                            let known =
                                v >= 0.0 && v.fract() == 0.0 && (v as usize) < children.len();
                            match known
                                .then(|| &children[v as usize])
                                .filter(|c| c.total() > 0)
                            {
                                Some(c) => c,
                                None => majority_child(children),
                            }
                        }
                    }
                }
            }
        }
    }
}

/// The child that received the most training examples, lowest index on ties.
fn majority_child(children: &[Node]) -> &Node {
    let mut best = &children[0];
    for c in &children[1..] {
        if c.total() > best.total() {
            best = c;
        }
    }
    best
}

/// The C4.5-style tree learner.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct C45 {
    pub params: LearnerParams,
}

impl C45 {
    pub fn new(params: LearnerParams) -> Self {
        C45 { params }
    }
}

impl Learner for C45 {
    type Model = DecisionTree;

    fn train(&self, data: &LearningSet) -> Result<DecisionTree> {
        train(data, &self.params)
    }
}

pub fn train(data: &LearningSet, params: &LearnerParams) -> Result<DecisionTree> {
    params.validate()?;
    if data.is_empty() {
        return Err(Error::NoExamples);
    }
    if data.attributes.is_empty() {
        return Err(Error::NoFeatures);
    }
    let builder = Builder { data, params };
    let all: Vec<usize> = (0..data.len()).collect();
    let mut root = builder.grow(&all);
    if params.prune {
        prune(&mut root, params.pruning_confidence);
    }
    Ok(DecisionTree {
        attributes: data.attributes.clone(),
        classes: data.classes.clone(),
        params: params.clone(),
        root,
    })
}

pub(crate) fn entropy(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Majority class, lowest index on ties.
fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Candidate {
    pub test: Test,
    pub gain: f64,
    pub split_info: f64,
}

impl Candidate {
    fn ratio(&self) -> f64 {
        self.gain / self.split_info
    }
}

struct Builder<'a> {
    data: &'a LearningSet,
    params: &'a LearnerParams,
}

impl Builder<'_> {
    fn counts(&self, idx: &[usize]) -> Vec<usize> {
        let mut counts = vec![0; self.data.classes.len()];
        for &i in idx {
            counts[self.data.labels[i]] += 1;
        }
        counts
    }

    fn grow(&self, idx: &[usize]) -> Node {
        let counts = self.counts(idx);
        let class = majority(&counts);
        if counts[class] == idx.len() || idx.len() < 2 * self.params.min_leaf {
            return Node::Leaf { class, counts };
        }
        let candidates: Vec<Candidate> = (0..self.data.attributes.len())
            .filter_map(|f| self.candidate(f, idx, &counts))
            .collect();
        let Some(best) = select(&candidates, self.params.use_gain_ratio) else {
            return Node::Leaf { class, counts };
        };
        let children = self
            .route(&best.test, idx)
            .iter()
            .map(|branch| {
                if branch.is_empty() {
                    Node::Leaf {
                        class,
                        counts: vec![0; counts.len()],
                    }
                } else {
                    self.grow(branch)
                }
            })
            .collect();
        Node::Split {
            test: best.test,
            class,
            counts,
            children,
        }
    }

    fn route(&self, test: &Test, idx: &[usize]) -> Vec<Vec<usize>> {
        match *test {
            Test::Threshold { feature, threshold } => {
                let (l, r): (Vec<usize>, Vec<usize>) = idx
                    .iter()
                    .partition(|&&i| self.data.rows[i][feature] <= threshold);
                vec![l, r]
            }
            Test::Nominal { feature } => {
                let n = nominal_arity(&self.data.attributes[feature]);
                let mut branches = vec![Vec::new(); n];
                for &i in idx {
                    branches[self.data.rows[i][feature] as usize].push(i);
                }
                branches
            }
        }
    }

    fn candidate(&self, f: usize, idx: &[usize], counts: &[usize]) -> Option<Candidate> {
        let base = entropy(counts);
        let n = idx.len() as f64;
        let k = counts.len();
        let min_leaf = self.params.min_leaf;
        match &self.data.attributes[f].kind {
            AttributeKind::Nominal { values } => {
                let mut branches = vec![vec![0usize; k]; values.len()];
                for &i in idx {
                    branches[self.data.rows[i][f] as usize][self.data.labels[i]] += 1;
                }
                let sizes: Vec<usize> = branches.iter().map(|b| b.iter().sum()).collect();
                if sizes.iter().filter(|&&s| s >= min_leaf).count() < 2 {
                    return None;
                }
                let remainder: f64 = branches
                    .iter()
                    .zip(&sizes)
                    .map(|(b, &s)| s as f64 / n * entropy(b))
                    .sum();
                Some(Candidate {
                    test: Test::Nominal { feature: f },
                    gain: base - remainder,
                    split_info: entropy(&sizes),
                })
            }
            AttributeKind::Continuous => {
                let mut pairs: Vec<(f64, usize)> = idx
                    .iter()
                    .map(|&i| (self.data.rows[i][f], self.data.labels[i]))
                    .collect();
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                let mut left = vec![0usize; k];
                let mut best: Option<(f64, f64, usize)> = None;
                for j in 0..pairs.len() - 1 {
                    left[pairs[j].1] += 1;
                    let (v, next) = (pairs[j].0, pairs[j + 1].0);
                    let n_left = j + 1;
                    if v == next || n_left < min_leaf || pairs.len() - n_left < min_leaf {
                        continue;
                    }
                    let right: Vec<usize> = counts.iter().zip(&left).map(|(c, l)| c - l).collect();
                    let gain = base
                        - (n_left as f64 / n) * entropy(&left)
                        - ((pairs.len() - n_left) as f64 / n) * entropy(&right);
                    if best.is_none_or(|(g, _, _)| gain > g + EPS) {
                        best = Some((gain, midpoint(v, next), n_left));
                    }
                }
                best.map(|(gain, threshold, n_left)| Candidate {
                    test: Test::Threshold {
                        feature: f,
                        threshold,
                    },
                    gain,
                    split_info: entropy(&[n_left, idx.len() - n_left]),
                })
            }
        }
    }
}

fn nominal_arity(a: &Attribute) -> usize {
    match &a.kind {
        AttributeKind::Nominal { values } => values.len(),
        AttributeKind::Continuous => 2,
    }
}

/// A threshold strictly below `hi` such that `lo <= t`.
fn midpoint(lo: f64, hi: f64) -> f64 {
    let m = lo + (hi - lo) / 2.0;
    if m < hi {
        m
    } else {
        lo
    }
}

/// Picks the split among per-feature candidates. With gain ratio, only
/// candidates whose gain reaches the average positive gain compete. When no
/// candidate has positive gain, the first admissible split is taken so that
/// training can still separate classes that only interact jointly.
pub(crate) fn select(candidates: &[Candidate], use_gain_ratio: bool) -> Option<&Candidate> {
    let positive: Vec<&Candidate> = candidates.iter().filter(|c| c.gain > EPS).collect();
    if positive.is_empty() {
        return candidates.first();
    }
    let score = |c: &Candidate| if use_gain_ratio { c.ratio() } else { c.gain };
    let avg = positive.iter().map(|c| c.gain).sum::<f64>() / positive.len() as f64;
    let mut best: Option<&Candidate> = None;
    for c in positive {
        if use_gain_ratio && c.gain < avg - EPS {
            continue;
        }
        if best.is_none_or(|b| score(c) > score(b) + EPS) {
            best = Some(c);
        }
    }
    best
}

/// Upper-confidence extra errors for `e` observed errors out of `n`.
pub fn add_errs(n: f64, e: f64, cf: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    let z = Normal::standard().inverse_cdf(1.0 - cf).max(0.0);
    let coeff = z * z;
    let base = || n * (1.0 - cf.powf(1.0 / n));
    if e < 1e-6 {
        base()
    } else if e < 0.9999 {
        let v = base();
        v + e * (add_errs(n, 1.0, cf) - v)
    } else if e + 0.5 >= n {
        0.67 * (n - e)
    } else {
        let pr = (e
            + 0.5
            + coeff / 2.0
            + (coeff * ((e + 0.5) * (1.0 - (e + 0.5) / n) + coeff / 4.0)).sqrt())
            / (n + coeff);
        n * pr - e
    }
}

fn leaf_estimate(counts: &[usize], cf: f64) -> f64 {
    let n: usize = counts.iter().sum();
    let e = (n - counts[majority(counts)]) as f64;
    e + add_errs(n as f64, e, cf)
}

/// Bottom-up subtree replacement; returns the node's estimated errors.
fn prune(node: &mut Node, cf: f64) -> f64 {
    match node {
        Node::Leaf { counts, .. } => leaf_estimate(counts, cf),
        Node::Split {
            counts,
            children,
            class,
            ..
        } => {
            let subtree: f64 = children.iter_mut().map(|c| prune(c, cf)).sum();
            let as_leaf = leaf_estimate(counts, cf);
            if as_leaf <= subtree + 0.1 {
                *node = Node::Leaf {
                    class: *class,
                    counts: counts.clone(),
                };
                as_leaf
            } else {
                subtree
            }
        }
    }
}

fn format_threshold(t: f64) -> String {
    let s = format!("{t:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn leaf_label(tree: &DecisionTree, class: usize, counts: &[usize]) -> String {
    let n: usize = counts.iter().sum();
    let err = n - counts.get(class).copied().unwrap_or(0);
    if err == 0 {
        format!("{} ({n})", tree.classes[class])
    } else {
        format!("{} ({n}/{err})", tree.classes[class])
    }
}

/// Indented text rendering, one line per branch:
/// `name <= t : class (n/errors)` for leaves, `name > t :` before a subtree.
pub fn render_tree(tree: &DecisionTree, names: &[String]) -> Result<String> {
    if names.len() != tree.n_features() {
        return Err(Error::SchemaMismatch {
            tree: tree.n_features(),
            schema: names.len(),
        });
    }
    let mut out = String::new();
    match &tree.root {
        Node::Leaf { class, counts } => {
            out.push_str(&leaf_label(tree, *class, counts));
            out.push('\n');
        }
        root => render_node(tree, names, root, 0, &mut out),
    }
    Ok(out)
}

fn render_node(tree: &DecisionTree, names: &[String], node: &Node, depth: usize, out: &mut String) {
    let Node::Split { test, children, .. } = node else {
        return;
    };
    for (b, child) in children.iter().enumerate() {
        let cond = match *test {
            Test::Threshold { feature, threshold } => {
                let op = if b == 0 { "<=" } else { ">" };
                format!("{} {op} {}", names[feature], format_threshold(threshold))
            }
            Test::Nominal { feature } => {
                let value = match &tree.attributes[feature].kind {
                    AttributeKind::Nominal { values } => values[b].clone(),
                    AttributeKind::Continuous => b.to_string(),
                };
                format!("{} = {value}", names[feature])
            }
        };
        out.push_str(&"|   ".repeat(depth));
        match child {
            Node::Leaf { class, counts } => {
                out.push_str(&format!("{cond} : {}\n", leaf_label(tree, *class, counts)));
            }
            Node::Split { .. } => {
                out.push_str(&format!("{cond} :\n"));
                render_node(tree, names, child, depth + 1, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn continuous(rows: &[(&[f64], usize)]) -> LearningSet {
        let n = rows[0].0.len();
        LearningSet::new(
            (0..n)
                .map(|i| Attribute {
                    name: format!("x{i}"),
                    kind: AttributeKind::Continuous,
                })
                .collect(),
            vec!["+".into(), "-".into()],
            rows.iter()
                .enumerate()
                .map(|(i, (r, c))| (format!("r{i}"), r.to_vec(), *c))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy(&[4, 0]), 0.0);
        assert!((entropy(&[2, 2]) - 1.0).abs() < 1e-12);
        assert!((entropy(&[1, 1, 1, 1]) - 2.0).abs() < 1e-12);
        assert_eq!(entropy(&[]), 0.0);
    }

    #[test]
    fn single_threshold_split() {
        let data = continuous(&[
            (&[0.1], 0),
            (&[0.2], 0),
            (&[0.3], 0),
            (&[0.7], 1),
            (&[0.8], 1),
            (&[0.9], 1),
        ]);
        let tree = train(&data, &LearnerParams::default()).unwrap();
        let Node::Split { test, .. } = &tree.root else {
            panic!("expected split")
        };
        assert_eq!(
            *test,
            Test::Threshold {
                feature: 0,
                threshold: 0.5
            }
        );
        assert_eq!(tree.render(), "x0 <= 0.5 : + (3)\nx0 > 0.5 : - (3)\n");
        assert_eq!(tree.predict(&[0.45]).unwrap(), 0);
        assert_eq!(tree.predict(&[0.55]).unwrap(), 1);
        assert!(matches!(
            tree.predict(&[0.1, 0.2]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn xor_is_fit_without_pruning() {
        let mut rows = Vec::new();
        for _ in 0..3 {
            rows.push((&[0.0, 0.0][..], 0));
            rows.push((&[1.0, 1.0][..], 0));
            rows.push((&[0.0, 1.0][..], 1));
            rows.push((&[1.0, 0.0][..], 1));
        }
        let data = continuous(&rows);
        let params = LearnerParams {
            prune: false,
            ..Default::default()
        };
        let tree = train(&data, &params).unwrap();
        for (r, c) in &rows {
            assert_eq!(tree.predict(r).unwrap(), *c);
        }
    }

    #[test]
    fn ties_go_to_lowest_feature() {
        let data = continuous(&[
            (&[0.0, 0.0], 0),
            (&[0.0, 0.0], 0),
            (&[1.0, 1.0], 1),
            (&[1.0, 1.0], 1),
        ]);
        let tree = train(&data, &LearnerParams::default()).unwrap();
        let Node::Split { test, .. } = &tree.root else {
            panic!("expected split")
        };
        assert_eq!(test.feature(), 0);
    }

    #[test]
    fn nominal_split_and_unseen_values() {
        let attributes = vec![Attribute {
            name: "colour".into(),
            kind: AttributeKind::Nominal {
                values: vec!["red".into(), "green".into(), "blue".into()],
            },
        }];
        let rows = vec![
            ("a".into(), vec![0.0], 0),
            ("b".into(), vec![0.0], 0),
            ("c".into(), vec![0.0], 0),
            ("d".into(), vec![1.0], 1),
            ("e".into(), vec![1.0], 1),
        ];
        let data = LearningSet::new(attributes, vec!["+".into(), "-".into()], rows).unwrap();
        let params = LearnerParams {
            prune: false,
            ..Default::default()
        };
        let tree = train(&data, &params).unwrap();
        assert_eq!(tree.predict(&[1.0]).unwrap(), 1);
        // blue never reached this node; the red branch holds the most examples
        assert_eq!(tree.predict(&[2.0]).unwrap(), 0);
        assert_eq!(tree.predict(&[7.0]).unwrap(), 0);
        assert_eq!(
            tree.render(),
            "colour = red : + (3)\ncolour = green : - (2)\ncolour = blue : + (0)\n"
        );
    }

    #[test]
    fn pruning_collapses_noise() {
        // one mislabelled point among many
        let mut rows: Vec<(Vec<f64>, usize)> = (0..20).map(|i| (vec![i as f64], 0)).collect();
        rows[10].1 = 1;
        let rows: Vec<(&[f64], usize)> = rows.iter().map(|(r, c)| (r.as_slice(), *c)).collect();
        let data = continuous(&rows);
        let pruned = train(&data, &LearnerParams::default()).unwrap();
        assert_eq!(pruned.root.leaves(), 1);
        let full = train(
            &data,
            &LearnerParams {
                prune: false,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(full.root.leaves() > 1);
    }

    #[test]
    fn add_errs_reference_points() {
        // zero observed errors: N (1 - CF^(1/N))
        assert!((add_errs(6.0, 0.0, 0.25) - 6.0 * (1.0 - 0.25f64.powf(1.0 / 6.0))).abs() < 1e-12);
        assert_eq!(add_errs(0.0, 0.0, 0.25), 0.0);
        // more errors never lower the estimate
        let mut prev = 0.0;
        for e in 0..10 {
            let total = e as f64 + add_errs(20.0, e as f64, 0.25);
            assert!(total >= prev);
            prev = total;
        }
    }

    #[test]
    fn invalid_params_and_inputs() {
        let data = continuous(&[(&[0.0], 0), (&[1.0], 1)]);
        for bad in [
            LearnerParams {
                min_leaf: 0,
                ..Default::default()
            },
            LearnerParams {
                pruning_confidence: 0.0,
                ..Default::default()
            },
            LearnerParams {
                pruning_confidence: 1.5,
                ..Default::default()
            },
        ] {
            assert!(matches!(train(&data, &bad), Err(Error::Params(_))));
        }
        assert_eq!(
            train(&data.subset(&[]), &LearnerParams::default()).unwrap_err(),
            Error::NoExamples
        );
    }

    #[test]
    fn render_checks_names() {
        let data = continuous(&[(&[0.0], 0), (&[1.0], 1)]);
        let tree = train(&data, &LearnerParams::default()).unwrap();
        assert_eq!(tree.render(), "+ (2/1)\n");
        assert!(matches!(
            render_tree(&tree, &["a".into(), "b".into()]),
            Err(Error::SchemaMismatch { tree: 1, schema: 2 })
        ));
    }

    #[test]
    fn json_export() {
        let data = continuous(&[(&[0.0], 0), (&[0.1], 0), (&[1.0], 1), (&[1.1], 1)]);
        let tree = train(&data, &LearnerParams::default()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&tree.to_json()).unwrap();
        assert_eq!(v["root"]["node"], "split");
        assert_eq!(v["root"]["test"]["threshold"], 0.55);
    }
}
