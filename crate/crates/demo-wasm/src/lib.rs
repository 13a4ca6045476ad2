//! Browser bindings. Each exported function takes plain strings and numbers
//! and returns a JSON document; the `*_json` functions hold the logic and are
//! usable natively.

use serde::Serialize;
use tgci::evaluation::{learning_curve, prepare};
use tgci::interpreter::trace;
use tgci::perturbation::{expected_values, intended_disjunct};
use tgci::synthetic::{theory_shaped, SyntheticSpec};
use tgci::theory::NodeKind;
use tgci::{
    perturb, CurvePlan, Dataset, Example, InterpreterKind, Method, PerturbKind, ProximitySpec,
    Schema, Theory, TheoryNode, C45, PROMOTER_THEORY,
};
use wasm_bindgen::prelude::*;

type Out = Result<String, String>;

fn theory_or_builtin(text: &str) -> Result<Theory, String> {
    let src = if text.trim().is_empty() {
        PROMOTER_THEORY
    } else {
        text
    };
    Theory::parse(src).map_err(|e| e.to_string())
}

/// A promoter-schema example from a 57-character sequence.
fn sequence_example(seq: &str, schema: &Schema) -> Result<Example, String> {
    let chars: Vec<char> = seq.chars().filter(|c| !c.is_whitespace()).collect();
    let n = schema.features().len();
    if chars.len() != n {
        return Err(format!(
            "sequence has {} characters, expected {n}",
            chars.len()
        ));
    }
    let values = chars
        .iter()
        .zip(schema.features())
        .map(|(c, f)| {
            f.value_index(&c.to_ascii_lowercase().to_string())
                .ok_or_else(|| format!("illegal character `{c}` at {}", f.name))
        })
        .collect::<Result<_, _>>()?;
    Ok(Example {
        id: "query".into(),
        class: schema.positive_class().unwrap_or(0),
        values,
    })
}

fn json<T: Serialize>(v: &T) -> Out {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct NodeScore {
    path: String,
    depth: usize,
    kind: &'static str,
    partial: f64,
    boolean: f64,
}

fn kind_name(node: &TheoryNode) -> &'static str {
    match node.kind {
        NodeKind::Leaf { .. } => "leaf",
        NodeKind::True => "true",
        NodeKind::And { .. } => "and",
        NodeKind::Or { .. } => "or",
        NodeKind::Not { .. } => "not",
    }
}

/// Partial-match and boolean scores of every node of the theory's first
/// concept for one sequence.
pub fn interpret_json(sequence: &str, theory: &str) -> Out {
    let theory = theory_or_builtin(theory)?;
    let schema = Schema::promoter();
    let ex = sequence_example(sequence, &schema)?;
    let root = &theory.concepts()[0].root;
    let partial =
        trace(root, &schema, &ex, InterpreterKind::PartialMatch).map_err(|e| e.to_string())?;
    let boolean = trace(root, &schema, &ex, InterpreterKind::Boolean).map_err(|e| e.to_string())?;
    let mut nodes = Vec::new();
    let mut kinds = Vec::new();
    root.walk(&mut |n| kinds.push(kind_name(n)));
    for (((path, p), (_, b)), kind) in partial.into_iter().zip(boolean).zip(kinds) {
        nodes.push(NodeScore {
            depth: path.matches('/').count(),
            path,
            kind,
            partial: p,
            boolean: b,
        });
    }
    json(&nodes)
}

#[derive(Serialize)]
struct Preview {
    before: String,
    after: String,
    /// Per position: the value the intended disjuncts expect, or `.`.
    expected: String,
    changed: Vec<usize>,
    intended: Vec<(String, usize)>,
    top_before: f64,
    top_after: f64,
}

/// One positive sequence perturbed toward (`fewer-mismatches`) or away from
/// (`fewer-matches`) the theory.
pub fn perturb_json(sequence: &str, theory: &str, kind: &str, rate: f64, seed: u64) -> Out {
    let theory = theory_or_builtin(theory)?;
    let schema = Schema::promoter();
    let ex = sequence_example(sequence, &schema)?;
    let kind: PerturbKind = kind.parse().map_err(|e: tgci::Error| e.to_string())?;
    let data = Dataset::new(schema.clone(), vec![ex.clone()]).map_err(|e| e.to_string())?;
    let spec = ProximitySpec {
        kind,
        rate,
        seed,
        replicate: 0,
    };
    let after = perturb(&data, &theory, &spec).map_err(|e| e.to_string())?;
    let after_ex = &after.examples()[0];
    let expected = expected_values(&theory, &schema, &ex).map_err(|e| e.to_string())?;
    let render = |e: &Example| -> String {
        (0..e.values.len())
            .map(|f| data.value(e, f).to_string())
            .collect()
    };
    let root = &theory.concepts()[0].root;
    let mut intended = Vec::new();
    let mut failure = None;
    root.walk(&mut |n| {
        if matches!(n.kind, NodeKind::Or { .. }) {
            match intended_disjunct(n, &schema, &ex) {
                Ok(k) => intended.push((n.path.clone(), k)),
                Err(e) => failure = Some(e.to_string()),
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let top = |e: &Example| {
        tgci::tgci1(root, &schema, e)
            .map(|r| r.top)
            .map_err(|e| e.to_string())
    };
    json(&Preview {
        before: render(&ex),
        after: render(after_ex),
        expected: expected
            .iter()
            .zip(schema.features())
            .map(|(v, f)| v.map_or(".".to_string(), |v| f.values[v].clone()))
            .collect(),
        changed: (0..ex.values.len())
            .filter(|&f| ex.values[f] != after_ex.values[f])
            .collect(),
        intended,
        top_before: top(&ex)?,
        top_after: top(after_ex)?,
    })
}

#[derive(Serialize)]
struct CurveLine {
    method: String,
    sizes: Vec<usize>,
    mean: Vec<f64>,
    ci_low: Vec<f64>,
    ci_high: Vec<f64>,
}

/// Learning curves of plain, tgci and boolean trees on synthetic data whose
/// positives plant each theory condition with probability `match_prob`.
pub fn curve_json(match_prob: f64, partitions: usize, seed: u64) -> Out {
    let theory = theory_or_builtin("")?;
    let schema = Schema::promoter();
    let spec = SyntheticSpec {
        match_prob,
        seed,
        ..Default::default()
    };
    let data = theory_shaped(&theory, &schema, &spec).map_err(|e| e.to_string())?;
    let plan = CurvePlan {
        sizes: (8..=80).step_by(8).collect(),
        test_size: 26,
        partitions: partitions.max(1),
        base_seed: seed,
    };
    let mut lines = Vec::new();
    for m in Method::ALL {
        let set = prepare(m, &data, std::slice::from_ref(&theory), &Default::default())
            .map_err(|e| e.to_string())?;
        let c =
            learning_curve(&C45::default(), &set, &plan, m.name()).map_err(|e| e.to_string())?;
        lines.push(CurveLine {
            method: c.method,
            sizes: c.points.iter().map(|p| p.train_size).collect(),
            mean: c.points.iter().map(|p| p.mean).collect(),
            ci_low: c.points.iter().map(|p| p.ci_low).collect(),
            ci_high: c.points.iter().map(|p| p.ci_high).collect(),
        });
    }
    json(&lines)
}

/// A synthetic positive sequence for seeding the page.
pub fn sample_sequence(seed: u64) -> Out {
    let theory = theory_or_builtin("")?;
    let schema = Schema::promoter();
    let spec = SyntheticSpec {
        positives: 1,
        negatives: 0,
        match_prob: 0.8,
        seed,
    };
    let data = theory_shaped(&theory, &schema, &spec).map_err(|e| e.to_string())?;
    let ex = &data.examples()[0];
    Ok((0..ex.values.len()).map(|f| data.value(ex, f)).collect())
}

#[wasm_bindgen]
pub fn interpret(sequence: &str, theory: &str) -> Result<String, JsError> {
    interpret_json(sequence, theory).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn perturb_preview(
    sequence: &str,
    theory: &str,
    kind: &str,
    rate: f64,
    seed: u32,
) -> Result<String, JsError> {
    perturb_json(sequence, theory, kind, rate, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn synthetic_curve(match_prob: f64, partitions: u32, seed: u32) -> Result<String, JsError> {
    curve_json(match_prob, partitions as usize, seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sample(seed: u32) -> Result<String, JsError> {
    sample_sequence(seed.into()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn builtin_theory() -> String {
    PROMOTER_THEORY.to_string()
}
