//! Random clause-level theories and a direct evaluator of the clause
//! semantics over every example of a 6-feature binary domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tgci::dataset::{Example, Feature, Schema};
use tgci::interpreter::{redescribe, InterpreterKind, InterpreterOptions};
use tgci::{Dataset, Theory};

pub const FEATURES: usize = 6;

#[derive(Debug, Clone)]
pub enum Cond {
    Test(usize, bool),
    Head(Head),
    Not(Box<Cond>),
}

#[derive(Debug, Clone)]
pub struct Head {
    pub name: String,
    pub clauses: Vec<Vec<Cond>>,
}

pub fn schema() -> Schema {
    let features = (0..FEATURES)
        .map(|i| Feature::new(format!("f{i}"), ["y", "n"]))
        .collect();
    Schema::new(features, vec!["+".into(), "-".into()], Some("+")).unwrap()
}

pub fn all_examples() -> Dataset {
    let examples = (0..1usize << FEATURES)
        .map(|bits| Example {
            id: format!("e{bits}"),
            class: bits % 2,
            values: (0..FEATURES).map(|f| (bits >> f) & 1).collect(),
        })
        .collect();
    Dataset::new(schema(), examples).unwrap()
}

pub struct Gen {
    rng: ChaCha8Rng,
    next: usize,
    negation: bool,
}

impl Gen {
    fn head(&mut self, depth: usize) -> Head {
        self.next += 1;
        let name = format!("h{}", self.next);
        let n_clauses = self.rng.random_range(1..=3);
        let clauses = (0..n_clauses).map(|_| self.body(depth)).collect();
        Head { name, clauses }
    }

    fn body(&mut self, depth: usize) -> Vec<Cond> {
        let n = self.rng.random_range(1..=4);
        let mut used = Vec::new();
        let mut body = Vec::new();
        for _ in 0..n {
            let c = if depth > 0 && self.rng.random_bool(0.4) {
                let h = self.head(depth - 1);
                if self.negation && self.rng.random_bool(0.3) {
                    Cond::Not(Box::new(Cond::Head(h)))
                } else {
                    Cond::Head(h)
                }
            } else {
                let f = self.rng.random_range(0..FEATURES);
                if used.contains(&f) {
                    continue;
                }
                used.push(f);
                let t = Cond::Test(f, self.rng.random_bool(0.5));
                if self.negation && self.rng.random_bool(0.2) {
                    Cond::Not(Box::new(t))
                } else {
                    t
                }
            };
            body.push(c);
        }
        body
    }
}

pub fn cond_text(c: &Cond, out: &mut Vec<String>) -> String {
    match c {
        Cond::Test(f, v) => format!("f{f}={}", if *v { "y" } else { "n" }),
        Cond::Head(h) => {
            head_text(h, out);
            h.name.clone()
        }
        Cond::Not(inner) => format!("not({})", cond_text(inner, out)),
    }
}

pub fn head_text(h: &Head, out: &mut Vec<String>) {
    for body in &h.clauses {
        let conds: Vec<String> = body.iter().map(|c| cond_text(c, out)).collect();
        out.push(format!("{} :- {}.", h.name, conds.join(", ")));
    }
}

/// Direct evaluation of the clause semantics. `out` receives one value per
/// conjunction or disjunction, parent before children.
pub fn eval_head(h: &Head, x: &[bool], partial: bool, out: &mut Vec<f64>) -> f64 {
    if h.clauses.len() == 1 {
        return eval_body(&h.clauses[0], x, partial, out);
    }
    let slot = out.len();
    out.push(f64::NAN);
    let v = h
        .clauses
        .iter()
        .map(|b| eval_body(b, x, partial, out))
        .fold(f64::NEG_INFINITY, f64::max);
    out[slot] = v;
    v
}

pub fn eval_body(body: &[Cond], x: &[bool], partial: bool, out: &mut Vec<f64>) -> f64 {
    if body.len() == 1 {
        return eval_cond(&body[0], x, partial, out);
    }
    let slot = out.len();
    out.push(f64::NAN);
    let vals: Vec<f64> = body.iter().map(|c| eval_cond(c, x, partial, out)).collect();
    let v = if partial {
        vals.iter().sum::<f64>() / vals.len() as f64
    } else if vals.iter().all(|&v| v == 1.0) {
        1.0
    } else {
        0.0
    };
    out[slot] = v;
    v
}

pub fn eval_cond(c: &Cond, x: &[bool], partial: bool, out: &mut Vec<f64>) -> f64 {
    match c {
        Cond::Test(f, want) => match (x[*f] == *want, partial) {
            (true, _) => 1.0,
            (false, true) => -1.0,
            (false, false) => 0.0,
        },
        Cond::Head(h) => eval_head(h, x, partial, out),
        Cond::Not(inner) => {
            let v = eval_cond(inner, x, partial, out);
            if partial {
                -v
            } else {
                1.0 - v
            }
        }
    }
}

pub fn random_theory(seed: u64, negation: bool) -> (Head, String) {
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(seed),
        next: 0,
        negation,
    };
    // the root must be composite so at least one feature exists
    let mut root = g.head(2);
    while root.clauses.len() == 1 && root.clauses[0].len() == 1 {
        root = g.head(2);
    }
    let mut lines = Vec::new();
    head_text(&root, &mut lines);
    (root, lines.join("\n"))
}

pub fn check(seed: u64, negation: bool) {
    let (root, text) = random_theory(seed, negation);
    let theory = Theory::parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let data = all_examples();
    for kind in [InterpreterKind::PartialMatch, InterpreterKind::Boolean] {
        let options = InterpreterOptions {
            kind,
            ..Default::default()
        };
        let (_, rows) = redescribe(&data, std::slice::from_ref(&theory), &options).unwrap();
        for (ex, row) in data.examples().iter().zip(&rows) {
            let x: Vec<bool> = ex.values.iter().map(|&v| v == 0).collect();
            let mut want = Vec::new();
            eval_head(&root, &x, kind == InterpreterKind::PartialMatch, &mut want);
            assert_eq!(row.values.len(), want.len(), "{text}");
            for (g, w) in row.values.iter().zip(&want) {
                assert!(
                    (g - w).abs() < 1e-12,
                    "{kind:?} {g} vs {w} on {}\n{text}",
                    ex.id
                );
            }
        }
    }
}
