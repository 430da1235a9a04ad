use thiserror::Error;

/// Errors raised by the model, the mechanism and the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("tuple has {found} values, schema has {expected} attributes")]
    ArityMismatch { expected: usize, found: usize },
    #[error("value for attribute `{attribute}` is not of kind {expected}")]
    KindMismatch { attribute: String, expected: String },
    #[error("cannot derive active domain from an empty relation")]
    EmptyRelation,
    #[error("active domain of attribute `{0}` is empty")]
    EmptyActiveDomain(String),
    #[error("active domain of attribute `{0}` is not sorted and deduplicated")]
    UnsortedActiveDomain(String),
    #[error("domain size overflows a 64-bit count")]
    DomainOverflow,
    #[error("schemas of the operands differ")]
    SchemaMismatch,
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
    #[error("invalid predicate: {0}")]
    InvalidPredicate(String),
    #[error("query syntax error at byte {pos}: {msg}")]
    QueryParse { pos: usize, msg: String },
    #[error("tuple lies outside the published domain")]
    TupleOutsideDomain,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("budget requires d < gamma (got d = {d}, gamma = {gamma})")]
    BudgetOrder { d: f64, gamma: f64 },
    #[error("budget too aggressive for alpha = 1/2 plan: d = {d} must be below gamma/2 = {half_gamma}")]
    BudgetTooAggressive { d: f64, half_gamma: f64 },
    #[error("budget degenerate: gamma = d * e^delta = {0} is not below 1")]
    DegenerateBudget(f64),
    #[error("estimator undefined (division by zero): alpha must exceed beta")]
    EstimatorUndefined,
    #[error("event has zero probability")]
    ZeroProbabilityEvent,
    #[error("the exclusive-prior check requires alpha = 1/2 (got {0})")]
    HypothesisViolated(f64),
    #[error("oracle domain too large: m = {m} exceeds {max}")]
    OracleDomainTooLarge { m: u64, max: u64 },
    #[error("view impossible under prior")]
    ViewImpossible,
    #[error("distributions are defined over different view universes")]
    UniverseMismatch,
    #[error("no admissible query for the experiment")]
    NoAdmissibleQuery,
    #[error("invalid prior: {0}")]
    InvalidPrior(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
