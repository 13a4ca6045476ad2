use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    // theory DSL
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: reference to undefined head `{head}`")]
    UndefinedHead { line: usize, head: String },
    #[error("line {line}: cyclic reference through `{head}` ({cycle})")]
    CyclicReference {
        line: usize,
        head: String,
        cycle: String,
    },
    #[error("line {line}: duplicate condition `{condition}` in the body of `{head}`")]
    DuplicateCondition {
        line: usize,
        head: String,
        condition: String,
    },
    #[error("theory source contains no clauses")]
    EmptyTheory,
    #[error("no node or head named `{0}` in theory")]
    UnknownHead(String),

    // datasets
    #[error("input contains no records")]
    EmptyDataset,
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("requested {requested} examples but the dataset holds {available}")]
    SizeExceedsDataset { requested: usize, available: usize },
    #[error("dataset has no positive class; set one for binary tasks")]
    MissingPositiveClass,

    // interpretation
    #[error("condition `{feature}={value}` does not match the dataset schema")]
    ConditionOutsideSchema { feature: String, value: String },
    #[error("redescription produced no constructed features; enable include_original_features or use a richer theory")]
    NoConstructedFeatures,

    // learning
    #[error("cannot train on an empty data set")]
    NoExamples,
    #[error("cannot train with zero features")]
    NoFeatures,
    #[error("expected {expected} feature values, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("tree was trained on {tree} features but the schema names {schema}")]
    SchemaMismatch { tree: usize, schema: usize },
    #[error("invalid learner parameter: {0}")]
    Params(String),

    // evaluation / perturbation
    #[error("invalid evaluation setup: {0}")]
    Evaluation(String),
    #[error("paired samples differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("theory contains a NOT node at `{0}`; perturbation needs a NOT-free theory")]
    NegationUnsupported(String),
    #[error("example {example}: intended disjuncts demand both `{feature}={first}` and `{feature}={second}`")]
    ConflictingExpectation {
        example: String,
        feature: String,
        first: String,
        second: String,
    },
}
