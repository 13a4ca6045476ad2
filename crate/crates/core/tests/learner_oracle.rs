//! Tree growth checked against a from-scratch entropy oracle on small random
//! data sets, plus prediction checked by walking the exported JSON.

mod common;

use common::tree::{check_tree, random_set};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use tgci::learner::{train, AttributeKind, LearnerParams};
use tgci::Classifier;

#[test]
fn unpruned_trees_match_entropy_oracle() {
    for seed in 0..2000 {
        check_tree(seed);
    }
}

fn walk(node: &Value, row: &[f64]) -> usize {
    if node["node"] == "leaf" {
        return node["class"].as_u64().unwrap() as usize;
    }
    let children = node["children"].as_array().unwrap();
    let test = &node["test"];
    let f = test["feature"].as_u64().unwrap() as usize;
    if test["kind"] == "threshold" {
        let t = test["threshold"].as_f64().unwrap();
        return walk(&children[usize::from(row[f] > t)], row);
    }
    let v = row[f] as usize;
    let total = |c: &Value| {
        c["counts"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_u64().unwrap())
            .sum::<u64>()
    };
    if v < children.len() && total(&children[v]) > 0 {
        walk(&children[v], row)
    } else {
        let mut best = 0;
        for (i, c) in children.iter().enumerate() {
            if total(c) > total(&children[best]) {
                best = i;
            }
        }
        walk(&children[best], row)
    }
}

proptest! {
    #[test]
    fn predictions_match_json_walk(seed in any::<u64>(), probe in any::<u64>()) {
        let data = random_set(seed);
        let tree = train(&data, &LearnerParams::default()).unwrap();
        let json: Value = serde_json::from_str(&tree.to_json()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(probe);
        for _ in 0..20 {
            let row: Vec<f64> = data
                .attributes()
                .iter()
                .map(|a| match &a.kind {
                    AttributeKind::Continuous => rng.random_range(-0.5..1.5),
                    AttributeKind::Nominal { values } => rng.random_range(0..values.len() + 1) as f64,
                })
                .collect();
            prop_assert_eq!(tree.predict(&row).unwrap(), walk(&json["root"], &row));
        }
    }

    #[test]
    fn consistent_data_is_fit_exactly(seed in any::<u64>()) {
        let data = random_set(seed);
        // drop rows that repeat an earlier row with a different label
        let mut keep = Vec::new();
        for i in 0..data.len() {
            let clash = keep.iter().any(|&j: &usize| data.rows()[j] == data.rows()[i] && data.labels()[j] != data.labels()[i]);
            if !clash {
                keep.push(i);
            }
        }
        let data = data.subset(&keep);
        let params = LearnerParams { min_leaf: 1, prune: false, ..Default::default() };
        let tree = train(&data, &params).unwrap();
        for (row, &label) in data.rows().iter().zip(data.labels()) {
            prop_assert_eq!(tree.predict(row).unwrap(), label);
        }
    }

    #[test]
    fn pruning_never_adds_leaves(seed in any::<u64>()) {
        let data = random_set(seed);
        let full = train(&data, &LearnerParams { prune: false, ..Default::default() }).unwrap();
        let pruned = train(&data, &LearnerParams::default()).unwrap();
        prop_assert!(pruned.root.leaves() <= full.root.leaves());
    }
}
