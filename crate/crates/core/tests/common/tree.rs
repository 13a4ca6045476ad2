//! From-scratch entropy oracle for tree growth on small random data sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgci::learner::{train, Attribute, AttributeKind, LearnerParams, LearningSet, Node, Test};

pub fn h(labels: &[usize], k: usize) -> f64 {
    let n = labels.len() as f64;
    (0..k)
        .map(|c| labels.iter().filter(|&&l| l == c).count() as f64)
        .filter(|&c| c > 0.0)
        .map(|c| -(c / n) * (c / n).log2())
        .sum()
}

/// Information gain and split information of a partition of `labels`.
pub fn score(groups: &[Vec<usize>], k: usize) -> (f64, f64) {
    let all: Vec<usize> = groups.concat();
    let n = all.len() as f64;
    let rem: f64 = groups.iter().map(|g| g.len() as f64 / n * h(g, k)).sum();
    let split: f64 = groups
        .iter()
        .filter(|g| !g.is_empty())
        .map(|g| {
            let p = g.len() as f64 / n;
            -p * p.log2()
        })
        .sum();
    (h(&all, k) - rem, split)
}

#[derive(Debug, Clone, Copy)]
pub struct Cand {
    feature: usize,
    threshold: Option<f64>,
    gain: f64,
    split: f64,
}

#[derive(Debug, PartialEq)]
pub enum Oracle {
    Leaf(usize),
    Split(usize, Option<f64>, Vec<Oracle>),
}

struct Setup<'a> {
    data: &'a LearningSet,
    min_leaf: usize,
    ratio: bool,
}

impl Setup<'_> {
    fn k(&self) -> usize {
        self.data.classes().len()
    }

    fn candidates(&self, idx: &[usize]) -> Vec<Cand> {
        let rows = self.data.rows();
        let labels = self.data.labels();
        let mut out = Vec::new();
        for (f, attr) in self.data.attributes().iter().enumerate() {
            match &attr.kind {
                AttributeKind::Continuous => {
                    let mut vals: Vec<f64> = idx.iter().map(|&i| rows[i][f]).collect();
                    vals.sort_by(f64::total_cmp);
                    vals.dedup();
                    let mut best: Option<Cand> = None;
                    for w in vals.windows(2) {
                        let t = (w[0] + w[1]) / 2.0;
                        let left: Vec<usize> = idx
                            .iter()
                            .filter(|&&i| rows[i][f] <= t)
                            .map(|&i| labels[i])
                            .collect();
                        let right: Vec<usize> = idx
                            .iter()
                            .filter(|&&i| rows[i][f] > t)
                            .map(|&i| labels[i])
                            .collect();
                        if left.len() < self.min_leaf || right.len() < self.min_leaf {
                            continue;
                        }
                        let (gain, split) = score(&[left, right], self.k());
                        if best.is_none_or(|b| gain > b.gain + 1e-9) {
                            best = Some(Cand {
                                feature: f,
                                threshold: Some(t),
                                gain,
                                split,
                            });
                        }
                    }
                    out.extend(best);
                }
                AttributeKind::Nominal { values } => {
                    let groups: Vec<Vec<usize>> = (0..values.len())
                        .map(|v| {
                            idx.iter()
                                .filter(|&&i| rows[i][f] as usize == v)
                                .map(|&i| labels[i])
                                .collect()
                        })
                        .collect();
                    if groups.iter().filter(|g| g.len() >= self.min_leaf).count() < 2 {
                        continue;
                    }
                    let (gain, split) = score(&groups, self.k());
                    out.push(Cand {
                        feature: f,
                        threshold: None,
                        gain,
                        split,
                    });
                }
            }
        }
        out
    }

    fn choose(&self, cands: &[Cand]) -> Option<Cand> {
        let pos: Vec<Cand> = cands.iter().copied().filter(|c| c.gain > 1e-9).collect();
        if pos.is_empty() {
            return cands.first().copied();
        }
        let avg = pos.iter().map(|c| c.gain).sum::<f64>() / pos.len() as f64;
        let key = |c: &Cand| if self.ratio { c.gain / c.split } else { c.gain };
        let mut best: Option<Cand> = None;
        for c in pos {
            if self.ratio && c.gain < avg - 1e-9 {
                continue;
            }
            if best.is_none_or(|b| key(&c) > key(&b) + 1e-9) {
                best = Some(c);
            }
        }
        best
    }

    fn grow(&self, idx: &[usize], parent_majority: usize) -> Oracle {
        if idx.is_empty() {
            return Oracle::Leaf(parent_majority);
        }
        let labels = self.data.labels();
        let counts: Vec<usize> = (0..self.k())
            .map(|c| idx.iter().filter(|&&i| labels[i] == c).count())
            .collect();
        let maj = (0..self.k()).rev().max_by_key(|&c| counts[c]).unwrap();
        if counts[maj] == idx.len() || idx.len() < 2 * self.min_leaf {
            return Oracle::Leaf(maj);
        }
        let Some(c) = self.choose(&self.candidates(idx)) else {
            return Oracle::Leaf(maj);
        };
        let rows = self.data.rows();
        let branches: Vec<Vec<usize>> = match c.threshold {
            Some(t) => vec![
                idx.iter()
                    .copied()
                    .filter(|&i| rows[i][c.feature] <= t)
                    .collect(),
                idx.iter()
                    .copied()
                    .filter(|&i| rows[i][c.feature] > t)
                    .collect(),
            ],
            None => {
                let AttributeKind::Nominal { values } = &self.data.attributes()[c.feature].kind
                else {
                    unreachable!()
                };
                (0..values.len())
                    .map(|v| {
                        idx.iter()
                            .copied()
                            .filter(|&i| rows[i][c.feature] as usize == v)
                            .collect()
                    })
                    .collect()
            }
        };
        Oracle::Split(
            c.feature,
            c.threshold,
            branches.iter().map(|b| self.grow(b, maj)).collect(),
        )
    }
}

pub fn to_oracle(node: &Node) -> Oracle {
    match node {
        Node::Leaf { class, .. } => Oracle::Leaf(*class),
        Node::Split { test, children, .. } => {
            let threshold = match test {
                Test::Threshold { threshold, .. } => Some(*threshold),
                Test::Nominal { .. } => None,
            };
            Oracle::Split(
                test.feature(),
                threshold,
                children.iter().map(to_oracle).collect(),
            )
        }
    }
}

pub fn random_set(seed: u64) -> LearningSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=16);
    let n_cont = rng.random_range(0..=3);
    let n_nom = rng.random_range(usize::from(n_cont == 0)..=2);
    let k = rng.random_range(2..=3);
    let mut attributes = Vec::new();
    for i in 0..n_cont {
        attributes.push(Attribute {
            name: format!("c{i}"),
            kind: AttributeKind::Continuous,
        });
    }
    for i in 0..n_nom {
        let arity = rng.random_range(2..=4);
        attributes.push(Attribute {
            name: format!("n{i}"),
            kind: AttributeKind::Nominal {
                values: (0..arity).map(|v| format!("v{v}")).collect(),
            },
        });
    }
    let rows = (0..n)
        .map(|r| {
            let values = attributes
                .iter()
                .map(|a| match &a.kind {
                    // few distinct levels so that ties and repeats occur
                    AttributeKind::Continuous => rng.random_range(0..5) as f64 / 4.0,
                    AttributeKind::Nominal { values } => rng.random_range(0..values.len()) as f64,
                })
                .collect();
            (format!("r{r}"), values, rng.random_range(0..k))
        })
        .collect();
    LearningSet::new(attributes, (0..k).map(|c| format!("k{c}")).collect(), rows).unwrap()
}

/// Grows unpruned trees on the random set for `seed` under several settings
/// and compares each with the oracle.
pub fn check_tree(seed: u64) {
    let data = random_set(seed);
    for (min_leaf, ratio) in [(1, true), (2, true), (2, false), (3, true)] {
        let params = LearnerParams {
            min_leaf,
            use_gain_ratio: ratio,
            prune: false,
            ..Default::default()
        };
        let tree = train(&data, &params).unwrap();
        let setup = Setup {
            data: &data,
            min_leaf,
            ratio,
        };
        let all: Vec<usize> = (0..data.len()).collect();
        assert_eq!(
            to_oracle(&tree.root),
            setup.grow(&all, 0),
            "seed {seed} min_leaf {min_leaf} ratio {ratio}"
        );
    }
}
