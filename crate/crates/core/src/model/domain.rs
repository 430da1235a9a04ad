use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::relation::Relation;
use super::schema::Schema;
use super::value::{Tuple, Value};

/// Exact product of per-attribute domain sizes, failing on 64-bit overflow.
pub fn domain_size(sizes: &[u64]) -> Result<u64> {
    sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s).ok_or(Error::DomainOverflow))
}

/// Cross product of the active domains of `relation`.
pub fn build_domain(relation: &Relation) -> Result<DomainDescriptor> {
    DomainDescriptor::from_relation(relation)
}

/// The published domain `D = D_1 x ... x D_a`, kept as per-attribute value lists.
///
/// Tuples of the cross product are addressed by a mixed-radix *cell code* in
/// `0..size()`, the first attribute being the most significant digit. Code
/// order therefore coincides with lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DomainRepr", into = "DomainRepr")]
pub struct DomainDescriptor {
    schema: Schema,
    values: Vec<Vec<Value>>,
    strides: Vec<u64>,
    size: u64,
}

impl DomainDescriptor {
    /// Each list must be nonempty, strictly ascending and of the attribute's kind.
    pub fn new(schema: Schema, values: Vec<Vec<Value>>) -> Result<Self> {
        if values.len() != schema.arity() {
            return Err(Error::ArityMismatch { expected: schema.arity(), found: values.len() });
        }
        for (attr, list) in schema.attributes().iter().zip(&values) {
            if list.is_empty() {
                return Err(Error::EmptyActiveDomain(attr.name.clone()));
            }
            if list.iter().any(|v| v.kind() != attr.kind) {
                return Err(Error::KindMismatch { attribute: attr.name.clone(), expected: attr.kind.to_string() });
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::UnsortedActiveDomain(attr.name.clone()));
            }
        }
        let sizes: Vec<u64> = values.iter().map(|l| l.len() as u64).collect();
        let size = domain_size(&sizes)?;
        let mut strides = vec![1u64; sizes.len()];
        for i in (0..sizes.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        Ok(DomainDescriptor { schema, values, strides, size })
    }

    /// Active domain of every attribute: its sorted distinct values in `relation`.
    pub fn from_relation(relation: &Relation) -> Result<Self> {
        if relation.is_empty() {
            return Err(Error::EmptyRelation);
        }
        let arity = relation.schema().arity();
        let mut values: Vec<Vec<Value>> = vec![Vec::new(); arity];
        for t in relation {
            for (list, v) in values.iter_mut().zip(t.values()) {
                list.push(v.clone());
            }
        }
        for list in &mut values {
            list.sort_unstable();
            list.dedup();
        }
        DomainDescriptor::new(relation.schema().clone(), values)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    /// Active domain `D_i` of attribute `attr`.
    pub fn values(&self, attr: usize) -> &[Value] {
        &self.values[attr]
    }

    pub fn all_values(&self) -> &[Vec<Value>] {
        &self.values
    }

    /// Per-attribute sizes `m_i`.
    pub fn sizes(&self) -> Vec<u64> {
        self.values.iter().map(|l| l.len() as u64).collect()
    }

    /// Domain size `m`.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn index_of(&self, attr: usize, value: &Value) -> Option<usize> {
        self.values[attr].binary_search(value).ok()
    }

    pub fn contains(&self, tuple: &Tuple) -> bool {
        self.encode(tuple).is_some()
    }

    /// Cell code of `tuple`, or `None` when it lies outside the cross product.
    pub fn encode(&self, tuple: &Tuple) -> Option<u64> {
        if tuple.arity() != self.values.len() {
            return None;
        }
        let mut code = 0;
        for (attr, v) in tuple.values().iter().enumerate() {
            code += self.index_of(attr, v)? as u64 * self.strides[attr];
        }
        Some(code)
    }

    /// Index into `D_attr` of the value that cell `code` carries.
    #[inline]
    pub fn coordinate(&self, code: u64, attr: usize) -> usize {
        ((code / self.strides[attr]) % self.values[attr].len() as u64) as usize
    }

    pub fn decode(&self, code: u64) -> Tuple {
        assert!(code < self.size, "cell code {code} outside domain of size {}", self.size);
        Tuple::new((0..self.values.len()).map(|a| self.values[a][self.coordinate(code, a)].clone()).collect())
    }

    /// Every tuple of the cross product, in code order. Only sensible for small domains.
    pub fn iter_tuples(&self) -> impl Iterator<Item = Tuple> + '_ {
        (0..self.size).map(|c| self.decode(c))
    }
}

#[derive(Serialize, Deserialize)]
struct DomainRepr {
    attributes: Vec<AttributeDomain>,
}

#[derive(Serialize, Deserialize)]
struct AttributeDomain {
    #[serde(flatten)]
    attribute: super::schema::Attribute,
    values: Vec<Value>,
}

impl TryFrom<DomainRepr> for DomainDescriptor {
    type Error = Error;

    fn try_from(r: DomainRepr) -> Result<Self> {
        let (attrs, values): (Vec<_>, Vec<_>) = r.attributes.into_iter().map(|a| (a.attribute, a.values)).unzip();
        let schema = Schema::new(attrs)?;
        // JSON cannot tell an integer-looking category from an integer.
        let values = values
            .into_iter()
            .zip(schema.attributes())
            .map(|(list, attr)| {
                list.into_iter()
                    .map(|v| match (v, attr.kind) {
                        (Value::Int(i), super::AttrKind::Categorical) => Value::Str(i.to_string()),
                        (v, _) => v,
                    })
                    .collect()
            })
            .collect();
        DomainDescriptor::new(schema, values)
    }
}

impl From<DomainDescriptor> for DomainRepr {
    fn from(d: DomainDescriptor) -> Self {
        DomainRepr {
            attributes: d
                .schema
                .attributes()
                .iter()
                .cloned()
                .zip(d.values)
                .map(|(attribute, values)| AttributeDomain { attribute, values })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{test_scores, AttrKind};
    use crate::tuple;

    #[test]
    fn domain_size_examples() {
        assert_eq!(domain_size(&[1, 1, 1]), Ok(1));
        assert_eq!(domain_size(&[6, 3, 5]), Ok(90));
        assert_eq!(domain_size(&[1 << 32, 1 << 32, 1 << 32]), Err(Error::DomainOverflow));
        assert_eq!(domain_size(&[]), Ok(1));
    }

    #[test]
    fn singleton_relation() {
        let schema = Schema::from_pairs([("age", AttrKind::Integer), ("nat", AttrKind::Categorical)]).unwrap();
        let r = Relation::from_tuples(schema, [tuple![25, "British"]]).unwrap();
        let d = DomainDescriptor::from_relation(&r).unwrap();
        assert_eq!(d.values(0), &[Value::Int(25)]);
        assert_eq!(d.values(1), &[Value::from("British")]);
        assert_eq!(d.size(), 1);
    }

    #[test]
    fn census_active_domain_sizes() {
        let d = DomainDescriptor::from_relation(&test_scores()).unwrap();
        assert_eq!(d.sizes(), vec![6, 3, 5]);
        assert_eq!(d.size(), 90);
        for t in &test_scores() {
            assert!(d.contains(t));
        }
    }

    #[test]
    fn empty_relation_has_no_domain() {
        let r = Relation::new(test_scores().schema().clone());
        assert_eq!(DomainDescriptor::from_relation(&r), Err(Error::EmptyRelation));
    }

    #[test]
    fn encode_decode_agree_with_lexicographic_order() {
        let d = DomainDescriptor::from_relation(&test_scores()).unwrap();
        let tuples: Vec<Tuple> = d.iter_tuples().collect();
        assert!(tuples.windows(2).all(|w| w[0] < w[1]));
        for (code, t) in tuples.iter().enumerate() {
            assert_eq!(d.encode(t), Some(code as u64));
        }
        assert_eq!(d.encode(&tuple![99, "British", 99]), None);
    }

    #[test]
    fn rejects_malformed_lists() {
        let schema = Schema::from_pairs([("a", AttrKind::Integer)]).unwrap();
        assert!(DomainDescriptor::new(schema.clone(), vec![vec![]]).is_err());
        assert!(DomainDescriptor::new(schema.clone(), vec![vec![2.into(), 1.into()]]).is_err());
        assert!(DomainDescriptor::new(schema, vec![vec!["x".into()]]).is_err());
    }
}
