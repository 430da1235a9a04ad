use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::schema::Schema;
use super::value::Tuple;

/// A finite set of tuples over a fixed schema.
///
/// Inserting a tuple that is already present is a no-op, so `len()` is the
/// deduplicated size `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    schema: Schema,
    tuples: BTreeSet<Tuple>,
}

impl Relation {
    pub fn new(schema: Schema) -> Self {
        Relation { schema, tuples: BTreeSet::new() }
    }

    pub fn from_tuples(schema: Schema, tuples: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        let mut r = Relation::new(schema);
        for t in tuples {
            r.insert(t)?;
        }
        Ok(r)
    }

    /// Adds `tuple`, returning `false` when it was already present.
    pub fn insert(&mut self, tuple: Tuple) -> Result<bool> {
        self.check(&tuple)?;
        Ok(self.tuples.insert(tuple))
    }

    /// Validates arity and per-attribute kinds against the schema.
    pub fn check(&self, tuple: &Tuple) -> Result<()> {
        if tuple.arity() != self.schema.arity() {
            return Err(Error::ArityMismatch { expected: self.schema.arity(), found: tuple.arity() });
        }
        for (v, a) in tuple.values().iter().zip(self.schema.attributes()) {
            if v.kind() != a.kind {
                return Err(Error::KindMismatch { attribute: a.name.clone(), expected: a.kind.to_string() });
            }
        }
        Ok(())
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, tuple: &Tuple) -> bool {
        self.tuples.contains(tuple)
    }

    /// Tuples in ascending order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Tuple> {
        self.tuples.iter()
    }
}

impl<'a> IntoIterator for &'a Relation {
    type Item = &'a Tuple;
    type IntoIter = std::collections::btree_set::Iter<'a, Tuple>;

    fn into_iter(self) -> Self::IntoIter {
        self.tuples.iter()
    }
}
