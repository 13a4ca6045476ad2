//! Redescription of examples by a domain theory.
//!
//! The partial-match interpreter scores every node of a theory tree against an
//! example: a leaf condition is `+1` when it holds and `-1` otherwise, an AND
//! node takes the mean of its children, an OR node the maximum, and a NOT node
//! the negation of its child. Each AND and OR node contributes its score as one
//! constructed feature, in pre-order, so every example of a data set is mapped
//! onto the same feature vector layout. NOT nodes pass their child's features
//! through without adding their own unless [`InterpreterOptions::not_emits_feature`]
//! is set.
//!
//! The boolean interpreter has the same shape but all-or-none semantics:
//! leaves are `1`/`0`, AND is conjunction, OR disjunction, NOT complement.

use serde::Serialize;

use crate::dataset::{Dataset, Example, Schema};
use crate::error::{Error, Result};
use crate::learner::{Attribute, AttributeKind, LearningSet};
use crate::theory::{short_name, NodeKind, Theory, TheoryNode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum InterpreterKind {
    #[default]
    PartialMatch,
    Boolean,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InterpreterOptions {
    pub kind: InterpreterKind,
    pub not_emits_feature: bool,
    pub include_original_features: bool,
    pub top_feature_included: bool,
}

impl Default for InterpreterOptions {
    fn default() -> Self {
        InterpreterOptions {
            kind: InterpreterKind::PartialMatch,
            not_emits_feature: false,
            include_original_features: false,
            top_feature_included: true,
        }
    }
}

impl InterpreterOptions {
    pub fn boolean() -> Self {
        InterpreterOptions {
            kind: InterpreterKind::Boolean,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FeatureKind {
    PartialMatch,
    Boolean,
    /// An original nominal feature carried through; values are encoded as
    /// indices into `values`.
    Original {
        values: Vec<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructedFeature {
    pub name: String,
    /// Node path for constructed features, the feature name for originals.
    pub source: String,
    #[serde(flatten)]
    pub kind: FeatureKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstructedSchema {
    pub features: Vec<ConstructedFeature>,
    pub options: InterpreterOptions,
}

impl ConstructedSchema {
    pub fn names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RedescribedExample {
    pub id: String,
    pub class: usize,
    pub values: Vec<f64>,
}

/// Result of interpreting one tree against one example.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interpretation {
    pub top: f64,
    pub features: Vec<(String, f64)>,
}

#[derive(Debug, Clone)]
enum Op {
    Leaf { feature: usize, value: usize },
    True,
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
    Not(Box<Compiled>),
}

#[derive(Debug, Clone)]
struct Compiled {
    op: Op,
    slot: Option<usize>,
}

impl Compiled {
    fn eval(&self, kind: InterpreterKind, ex: &Example, out: &mut [f64]) -> f64 {
        let (hit, miss) = match kind {
            InterpreterKind::PartialMatch => (1.0, -1.0),
            InterpreterKind::Boolean => (1.0, 0.0),
        };
        let v = match &self.op {
            Op::Leaf { feature, value } => {
                if ex.values[*feature] == *value {
                    hit
                } else {
                    miss
                }
            }
            Op::True => hit,
            Op::And(children) => {
                let vals = children.iter().map(|c| c.eval(kind, ex, out));
                match kind {
                    InterpreterKind::PartialMatch => vals.sum::<f64>() / children.len() as f64,
                    InterpreterKind::Boolean => vals.fold(1.0, f64::min),
                }
            }
            Op::Or(children) => children
                .iter()
                .map(|c| c.eval(kind, ex, out))
                .fold(f64::NEG_INFINITY, f64::max),
            Op::Not(child) => {
                let c = child.eval(kind, ex, out);
                match kind {
                    InterpreterKind::PartialMatch => -c,
                    InterpreterKind::Boolean => 1.0 - c,
                }
            }
        };
        if let Some(slot) = self.slot {
            out[slot] = v;
        }
        v
    }
}

struct Compiler<'a> {
    schema: &'a Schema,
    options: &'a InterpreterOptions,
    emitted: Vec<String>,
}

impl Compiler<'_> {
    fn compile(&mut self, node: &TheoryNode, is_root: bool) -> Result<Compiled> {
        let emits = match node.kind {
            NodeKind::And { .. } | NodeKind::Or { .. } => {
                !is_root || self.options.top_feature_included
            }
            NodeKind::Not { .. } => {
                self.options.not_emits_feature && (!is_root || self.options.top_feature_included)
            }
            NodeKind::Leaf { .. } | NodeKind::True => false,
        };
        let slot = emits.then(|| {
            self.emitted.push(node.path.clone());
            self.emitted.len() - 1
        });
        let op = match &node.kind {
            NodeKind::Leaf { condition } => {
                let outside = || Error::ConditionOutsideSchema {
                    feature: condition.feature.clone(),
                    value: condition.value.clone(),
                };
                let feature = self
                    .schema
                    .feature_index(&condition.feature)
                    .ok_or_else(outside)?;
                let value = self.schema.features()[feature]
                    .value_index(&condition.value)
                    .ok_or_else(outside)?;
                Op::Leaf { feature, value }
            }
            NodeKind::True => Op::True,
            NodeKind::And { children } => Op::And(self.compile_all(children)?),
            NodeKind::Or { children } => Op::Or(self.compile_all(children)?),
            NodeKind::Not { child } => Op::Not(Box::new(self.compile(child, false)?)),
        };
        Ok(Compiled { op, slot })
    }

    fn compile_all(&mut self, nodes: &[TheoryNode]) -> Result<Vec<Compiled>> {
        nodes.iter().map(|n| self.compile(n, false)).collect()
    }
}

/// Feature names for a list of node paths: the short form (`minus_35#2`,
/// `contact`) where it is unique, the full dotted path otherwise, and a
/// theory-index prefix as a last resort.
fn feature_names(paths: &[(usize, String)]) -> Vec<String> {
    let count = |names: &[String], n: &String| names.iter().filter(|m| *m == n).count();
    let short: Vec<String> = paths.iter().map(|(_, p)| short_name(p)).collect();
    let qualified: Vec<String> = paths
        .iter()
        .zip(&short)
        .map(|((_, p), s)| {
            if count(&short, s) > 1 {
                p.replace("/#", "#").replace('/', ".")
            } else {
                s.clone()
            }
        })
        .collect();
    paths
        .iter()
        .zip(&qualified)
        .map(|((t, _), q)| {
            if count(&qualified, q) > 1 {
                format!("t{}.{q}", t + 1)
            } else {
                q.clone()
            }
        })
        .collect()
}

/// A set of theories compiled against a schema, ready to redescribe examples.
#[derive(Debug, Clone)]
pub struct Redescriber {
    roots: Vec<Compiled>,
    schema: ConstructedSchema,
    n_constructed: usize,
    originals: Vec<usize>,
}

impl Redescriber {
    pub fn new(
        schema: &Schema,
        theories: &[Theory],
        options: &InterpreterOptions,
    ) -> Result<Redescriber> {
        let mut roots = Vec::new();
        let mut paths = Vec::new();
        for (t, theory) in theories.iter().enumerate() {
            for concept in theory.concepts() {
                let mut c = Compiler {
                    schema,
                    options,
                    emitted: Vec::new(),
                };
                let mut root = c.compile(&concept.root, true)?;
                shift_slots(&mut root, paths.len());
                paths.extend(c.emitted.into_iter().map(|p| (t, p)));
                roots.push(root);
            }
        }
        let n_constructed = paths.len();
        if n_constructed == 0 && !options.include_original_features {
            return Err(Error::NoConstructedFeatures);
        }
        let kind = match options.kind {
            InterpreterKind::PartialMatch => FeatureKind::PartialMatch,
            InterpreterKind::Boolean => FeatureKind::Boolean,
        };
        let mut features: Vec<ConstructedFeature> = feature_names(&paths)
            .into_iter()
            .zip(paths)
            .map(|(name, (_, source))| ConstructedFeature {
                name,
                source,
                kind: kind.clone(),
            })
            .collect();
        let mut originals = Vec::new();
        if options.include_original_features {
            for (i, f) in schema.features().iter().enumerate() {
                let mut name = f.name.clone();
                while features.iter().any(|c| c.name == name) {
                    name.push_str("@orig");
                }
                features.push(ConstructedFeature {
                    name,
                    source: f.name.clone(),
                    kind: FeatureKind::Original {
                        values: f.values.clone(),
                    },
                });
                originals.push(i);
            }
        }
        Ok(Redescriber {
            roots,
            schema: ConstructedSchema {
                features,
                options: options.clone(),
            },
            n_constructed,
            originals,
        })
    }

    pub fn schema(&self) -> &ConstructedSchema {
        &self.schema
    }

    /// Top values of each concept root (in theory then concept order) plus the
    /// full feature vector.
    pub fn interpret(&self, ex: &Example) -> (Vec<f64>, Vec<f64>) {
        let mut values = vec![0.0; self.schema.features.len()];
        let kind = self.schema.options.kind;
        let tops = self
            .roots
            .iter()
            .map(|r| r.eval(kind, ex, &mut values[..self.n_constructed]))
            .collect();
        for (k, &f) in self.originals.iter().enumerate() {
            values[self.n_constructed + k] = ex.values[f] as f64;
        }
        (tops, values)
    }

    pub fn redescribe_example(&self, ex: &Example) -> RedescribedExample {
        RedescribedExample {
            id: ex.id.clone(),
            class: ex.class,
            values: self.interpret(ex).1,
        }
    }

    pub fn redescribe(&self, data: &Dataset) -> Vec<RedescribedExample> {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            data.examples()
                .par_iter()
                .map(|e| self.redescribe_example(e))
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            data.examples()
                .iter()
                .map(|e| self.redescribe_example(e))
                .collect()
        }
    }

    /// Redescribes `data` into a learner-ready set: constructed features are
    /// continuous, carried-through originals nominal.
    pub fn learning_set(&self, data: &Dataset) -> LearningSet {
        let attributes = self
            .schema
            .features
            .iter()
            .map(|f| Attribute {
                name: f.name.clone(),
                kind: match &f.kind {
                    FeatureKind::Original { values } => AttributeKind::Nominal {
                        values: values.clone(),
                    },
                    _ => AttributeKind::Continuous,
                },
            })
            .collect();
        let rows = self.redescribe(data);
        LearningSet::new(
            attributes,
            data.schema().classes().to_vec(),
            rows.into_iter()
                .map(|r| (r.id, r.values, r.class))
                .collect(),
        )
        .expect("redescribed rows match their schema")
    }
}

fn shift_slots(node: &mut Compiled, by: usize) {
    if let Some(s) = node.slot.as_mut() {
        *s += by;
    }
    match &mut node.op {
        Op::And(cs) | Op::Or(cs) => cs.iter_mut().for_each(|c| shift_slots(c, by)),
        Op::Not(c) => shift_slots(c, by),
        Op::Leaf { .. } | Op::True => {}
    }
}

/// Redescribes every example of `data` with the constructed features of all
/// `theories`, concatenated in theory order then concept order.
pub fn redescribe(
    data: &Dataset,
    theories: &[Theory],
    options: &InterpreterOptions,
) -> Result<(ConstructedSchema, Vec<RedescribedExample>)> {
    let r = Redescriber::new(data.schema(), theories, options)?;
    let rows = r.redescribe(data);
    Ok((r.schema, rows))
}

/// `id,<feature names>,class` rows. Carried-through originals are written as
/// their value names.
pub fn redescribed_csv(
    schema: &ConstructedSchema,
    rows: &[RedescribedExample],
    classes: &[String],
) -> String {
    let mut out = String::from("id");
    for f in &schema.features {
        out.push(',');
        out.push_str(&f.name);
    }
    out.push_str(",class\n");
    for r in rows {
        out.push_str(&r.id);
        for (f, v) in schema.features.iter().zip(&r.values) {
            out.push(',');
            match &f.kind {
                FeatureKind::Original { values } => out.push_str(&values[*v as usize]),
                _ => out.push_str(&v.to_string()),
            }
        }
        out.push(',');
        out.push_str(&classes[r.class]);
        out.push('\n');
    }
    out
}

fn interpret_node(
    node: &TheoryNode,
    schema: &Schema,
    ex: &Example,
    options: &InterpreterOptions,
) -> Result<Interpretation> {
    let mut c = Compiler {
        schema,
        options,
        emitted: Vec::new(),
    };
    let compiled = c.compile(node, true)?;
    let mut values = vec![0.0; c.emitted.len()];
    let top = compiled.eval(options.kind, ex, &mut values);
    let paths: Vec<(usize, String)> = c.emitted.into_iter().map(|p| (0, p)).collect();
    Ok(Interpretation {
        top,
        features: feature_names(&paths).into_iter().zip(values).collect(),
    })
}

/// Partial-match interpretation of one tree: the node's own score and the
/// constructed features of it and its descendants in pre-order.
pub fn tgci1(node: &TheoryNode, schema: &Schema, ex: &Example) -> Result<Interpretation> {
    interpret_node(node, schema, ex, &InterpreterOptions::default())
}

pub fn tgci1_with(
    node: &TheoryNode,
    schema: &Schema,
    ex: &Example,
    not_emits_feature: bool,
) -> Result<Interpretation> {
    let options = InterpreterOptions {
        not_emits_feature,
        ..Default::default()
    };
    interpret_node(node, schema, ex, &options)
}

/// All-or-none interpretation with the same feature layout as [`tgci1`].
pub fn boolean_interpret(
    node: &TheoryNode,
    schema: &Schema,
    ex: &Example,
) -> Result<Interpretation> {
    interpret_node(node, schema, ex, &InterpreterOptions::boolean())
}

/// Score of every node (leaves included) in pre-order, as `(path, value)`.
pub fn trace(
    node: &TheoryNode,
    schema: &Schema,
    ex: &Example,
    kind: InterpreterKind,
) -> Result<Vec<(String, f64)>> {
    let options = InterpreterOptions {
        kind,
        ..Default::default()
    };
    let mut out = Vec::new();
    trace_into(node, schema, ex, &options, &mut out)?;
    Ok(out)
}

fn trace_into(
    node: &TheoryNode,
    schema: &Schema,
    ex: &Example,
    options: &InterpreterOptions,
    out: &mut Vec<(String, f64)>,
) -> Result<f64> {
    let at = out.len();
    out.push((node.path.clone(), 0.0));
    for child in node.children() {
        trace_into(child, schema, ex, options, out)?;
    }
    let top = interpret_node(node, schema, ex, options)?.top;
    out[at].1 = top;
    Ok(top)
}
