use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

use super::domain::{domain_size, DomainDescriptor};
use super::relation::Relation;
use super::schema::{AttrKind, Schema};
use super::value::{Tuple, Value};

/// A condition on a single attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Predicate {
    /// Value membership in a finite set.
    OneOf(BTreeSet<Value>),
    /// Inclusive integer range `lo..=hi`.
    Range { lo: i64, hi: i64 },
}

impl Predicate {
    pub fn eq(v: impl Into<Value>) -> Self {
        Predicate::OneOf(BTreeSet::from([v.into()]))
    }

    pub fn one_of<V: Into<Value>>(values: impl IntoIterator<Item = V>) -> Self {
        Predicate::OneOf(values.into_iter().map(Into::into).collect())
    }

    pub fn range(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidPredicate(format!("range [{lo}, {hi}] has lo > hi")));
        }
        Ok(Predicate::Range { lo, hi })
    }

    pub fn matches(&self, v: &Value) -> bool {
        match self {
            Predicate::OneOf(set) => set.contains(v),
            Predicate::Range { lo, hi } => v.as_int().is_some_and(|x| (*lo..=*hi).contains(&x)),
        }
    }

    fn check_kind(&self, attr: &str, kind: AttrKind) -> Result<()> {
        match self {
            Predicate::Range { lo, hi } => {
                if kind != AttrKind::Integer {
                    return Err(Error::InvalidPredicate(format!("range on categorical attribute `{attr}`")));
                }
                if lo > hi {
                    return Err(Error::InvalidPredicate(format!("range [{lo}, {hi}] has lo > hi")));
                }
            }
            Predicate::OneOf(set) => {
                if let Some(v) = set.iter().find(|v| v.kind() != kind) {
                    return Err(Error::InvalidPredicate(format!(
                        "value `{v}` is not of kind {kind} required by `{attr}`"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A counting query: a conjunction of optional per-attribute predicates.
/// Absent predicates match any value, so the empty query selects all of `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjunctiveQuery {
    schema: Schema,
    predicates: Vec<Option<Predicate>>,
}

impl ConjunctiveQuery {
    pub fn all(schema: &Schema) -> Self {
        ConjunctiveQuery { schema: schema.clone(), predicates: vec![None; schema.arity()] }
    }

    /// Adds (or replaces) the predicate on attribute `name`.
    pub fn with(mut self, name: &str, predicate: Predicate) -> Result<Self> {
        let idx = self.schema.index_of(name).ok_or_else(|| Error::UnknownAttribute(name.to_owned()))?;
        self.set(idx, predicate)?;
        Ok(self)
    }

    pub fn set(&mut self, attr: usize, predicate: Predicate) -> Result<()> {
        let a = self.schema.attribute(attr);
        predicate.check_kind(&a.name, a.kind)?;
        self.predicates[attr] = Some(predicate);
        Ok(())
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn predicates(&self) -> &[Option<Predicate>] {
        &self.predicates
    }

    /// Number of attributes the query constrains.
    pub fn arity(&self) -> usize {
        self.predicates.iter().flatten().count()
    }

    pub fn matches(&self, tuple: &Tuple) -> bool {
        self.predicates.iter().zip(tuple.values()).all(|(p, v)| p.as_ref().is_none_or(|p| p.matches(v)))
    }

    /// Per-attribute match masks over the active domains of `domain`.
    pub fn mask(&self, domain: &DomainDescriptor) -> Result<QueryMask> {
        if domain.schema() != &self.schema {
            return Err(Error::SchemaMismatch);
        }
        let masks = self
            .predicates
            .iter()
            .enumerate()
            .map(|(attr, p)| p.as_ref().map(|p| domain.values(attr).iter().map(|v| p.matches(v)).collect()))
            .collect();
        Ok(QueryMask { masks })
    }
}

impl fmt::Display for ConjunctiveQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (attr, p) in self.predicates.iter().enumerate() {
            let Some(p) = p else { continue };
            if !first {
                f.write_str(" and ")?;
            }
            first = false;
            let name = &self.schema.attribute(attr).name;
            match p {
                Predicate::Range { lo, hi } => write!(f, "{name} in [{lo},{hi}]")?,
                Predicate::OneOf(set) if set.len() == 1 => {
                    write!(f, "{name}={}", super::parse::quote(set.first().unwrap()))?
                }
                Predicate::OneOf(set) => {
                    write!(f, "{name} in {{")?;
                    for (i, v) in set.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{}", super::parse::quote(v))?;
                    }
                    f.write_str("}")?;
                }
            }
        }
        Ok(())
    }
}

/// A query compiled against one domain: for every constrained attribute, which
/// entries of `D_i` match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryMask {
    masks: Vec<Option<Vec<bool>>>,
}

impl QueryMask {
    pub fn attribute(&self, attr: usize) -> Option<&[bool]> {
        self.masks[attr].as_deref()
    }

    /// `|Q|`, the number of domain cells selected.
    pub fn domain_count(&self, domain: &DomainDescriptor) -> Result<u64> {
        let counts: Vec<u64> = self
            .masks
            .iter()
            .zip(domain.sizes())
            .map(|(m, size)| m.as_ref().map_or(size, |m| m.iter().filter(|&&b| b).count() as u64))
            .collect();
        domain_size(&counts)
    }

    #[inline]
    pub fn matches_code(&self, domain: &DomainDescriptor, code: u64) -> bool {
        self.masks.iter().enumerate().all(|(attr, m)| m.as_ref().is_none_or(|m| m[domain.coordinate(code, attr)]))
    }
}

/// `Q(I) = |Q ∩ I|`.
pub fn eval_query_instance(q: &ConjunctiveQuery, r: &Relation) -> Result<u64> {
    if q.schema() != r.schema() {
        return Err(Error::SchemaMismatch);
    }
    Ok(r.iter().filter(|t| q.matches(t)).count() as u64)
}

/// `n_D = |Q ∩ D|`, by multiplying per-attribute match counts.
pub fn eval_query_domain(q: &ConjunctiveQuery, d: &DomainDescriptor) -> Result<u64> {
    q.mask(d)?.domain_count(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::test_scores;

    fn scores_query() -> ConjunctiveQuery {
        ConjunctiveQuery::all(test_scores().schema())
    }

    #[test]
    fn empty_query_counts_everything() {
        let i = test_scores();
        let d = DomainDescriptor::from_relation(&i).unwrap();
        assert_eq!(eval_query_instance(&scores_query(), &i), Ok(6));
        assert_eq!(eval_query_domain(&scores_query(), &d), Ok(90));
    }

    #[test]
    fn age_and_score_window() {
        // Brute-force scan of the six rows: only (27, British, 97) has age in
        // 26..=32 and score > 90; (32, Indian, 90) fails the strict bound.
        let i = test_scores();
        let strict = scores_query()
            .with("age", Predicate::range(26, 32).unwrap())
            .unwrap()
            .with("score", Predicate::range(91, i64::MAX).unwrap())
            .unwrap();
        let brute = i
            .iter()
            .filter(|t| {
                let age = t.values()[0].as_int().unwrap();
                let score = t.values()[2].as_int().unwrap();
                (26..=32).contains(&age) && score > 90
            })
            .count() as u64;
        assert_eq!(brute, 1);
        assert_eq!(eval_query_instance(&strict, &i), Ok(brute));
        let inclusive = strict.clone().with("score", Predicate::range(90, i64::MAX).unwrap()).unwrap();
        assert_eq!(eval_query_instance(&inclusive, &i), Ok(2));
    }

    #[test]
    fn absent_value_matches_nothing() {
        let q = scores_query().with("nationality", Predicate::eq("French")).unwrap();
        assert_eq!(eval_query_instance(&q, &test_scores()), Ok(0));
        let d = DomainDescriptor::from_relation(&test_scores()).unwrap();
        assert_eq!(eval_query_domain(&q, &d), Ok(0));
    }

    #[test]
    fn domain_count_is_product_of_matches() {
        let schema = Schema::from_pairs([("a", AttrKind::Integer), ("b", AttrKind::Integer)]).unwrap();
        let d = DomainDescriptor::new(
            schema.clone(),
            vec![(1..=4).map(Value::Int).collect(), (1..=5).map(Value::Int).collect()],
        )
        .unwrap();
        let q = ConjunctiveQuery::all(&schema)
            .with("a", Predicate::range(2, 3).unwrap())
            .unwrap()
            .with("b", Predicate::one_of([1i64, 3, 5]))
            .unwrap();
        assert_eq!(eval_query_domain(&q, &d), Ok(6));
    }

    #[test]
    fn kind_and_schema_errors() {
        assert!(scores_query().with("nationality", Predicate::Range { lo: 1, hi: 2 }).is_err());
        assert!(scores_query().with("age", Predicate::eq("old")).is_err());
        assert!(scores_query().with("height", Predicate::eq(1i64)).is_err());
        assert!(Predicate::range(31, 26).is_err());
        let other = Relation::new(Schema::from_pairs([("x", AttrKind::Integer)]).unwrap());
        assert_eq!(eval_query_instance(&scores_query(), &other), Err(Error::SchemaMismatch));
    }
}
