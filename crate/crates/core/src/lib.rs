//! Theory-guided constructive induction.
//!
//! A domain theory, written as propositional Horn clauses, is used to
//! redescribe examples with one continuous feature per internal theory node.
//! A decision-tree learner is then trained on the redescribed examples.
//!
//! ```no_run
//! use tgci::evaluation::prepare;
//! use tgci::{learning_curve, CurvePlan, Learner, Method, Theory, C45, PROMOTER_THEORY};
//!
//! # fn main() -> Result<(), Box<dyn std::error::Error>> {
//! let text = std::fs::read_to_string("data/promoters.data")?;
//! let data = tgci::dataset::load_sequence_format(&text, &Default::default())?;
//! let theory = Theory::parse(PROMOTER_THEORY)?;
//!
//! let set = prepare(Method::Tgci, &data, &[theory], &Default::default())?;
//! let tree = C45::default().train(&set)?;
//! println!("{}", tree.render());
//!
//! let plan = CurvePlan { sizes: vec![20, 40, 80], test_size: 26, partitions: 50, base_seed: 0 };
//! let curve = learning_curve(&C45::default(), &set, &plan, "tgci")?;
//! # let _ = curve;
//! # Ok(())
//! # }
//! ```

pub mod dataset;
pub mod error;
pub mod interpreter;
pub mod learner;
pub mod rng;
pub mod theory;

pub use dataset::{Dataset, Example, Feature, PositionsSpec, Schema};
pub use error::{Error, Result};
pub use interpreter::{
    boolean_interpret, redescribe, tgci1, ConstructedSchema, InterpreterKind, InterpreterOptions,
    Redescriber,
};
pub use learner::{
    render_tree, Classifier, DecisionTree, Learner, LearnerParams, LearningSet, C45,
};
pub use theory::{parse_theory, Theory, TheoryNode, PROMOTER_THEORY};

pub mod evaluation;
pub mod perturbation;
pub mod synthetic;

pub use evaluation::{
    learning_curve, leave_one_out, paired_significance, theory_only_classify, CurvePlan, Method,
};
pub use perturbation::{perturb, proximity_sweep, Level, PerturbKind, ProximitySpec, SweepPlan};

/// Order-preserving map, parallel when the `parallel` feature is on.
pub(crate) fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
