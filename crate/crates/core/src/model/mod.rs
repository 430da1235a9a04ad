//! Schemas, relations, domains and counting queries.

mod domain;
mod parse;
mod query;
mod relation;
mod schema;
mod value;

pub use domain::{build_domain, domain_size, DomainDescriptor};
pub use parse::parse_query;
pub use query::{eval_query_domain, eval_query_instance, ConjunctiveQuery, Predicate, QueryMask};
pub use relation::Relation;
pub use schema::{AttrKind, Attribute, Schema};
pub use value::{Tuple, Value};

/// The six-row table of English test scores (age, nationality, score) used
/// throughout the documentation and tests.
pub fn test_scores() -> Relation {
    let schema = Schema::from_pairs([
        ("age", AttrKind::Integer),
        ("nationality", AttrKind::Categorical),
        ("score", AttrKind::Integer),
    ])
    .expect("static schema");
    let rows = [
        (25, "British", 99),
        (27, "British", 97),
        (21, "Indian", 82),
        (32, "Indian", 90),
        (33, "American", 94),
        (36, "American", 94),
    ];
    Relation::from_tuples(schema, rows.into_iter().map(|(a, n, s)| crate::tuple![a, n, s])).expect("static rows")
}
