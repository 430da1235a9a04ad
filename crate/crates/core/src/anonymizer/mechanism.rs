use rand::distr::{Bernoulli, Distribution};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Binomial;

use crate::error::{Error, Result};
use crate::model::{DomainDescriptor, Relation, Tuple};

use super::params::MechanismParams;

/// Stream of the seeded generator that drives retention decisions.
pub const RETENTION_STREAM: u64 = 0;
/// Stream that drives the insertion count and the inserted tuples.
pub const INSERTION_STREAM: u64 = 1;
/// Stream reserved for shuffling the published rows.
pub const SHUFFLE_STREAM: u64 = 2;

/// Seeded generator positioned on one of the independent streams above.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The released artifact: the domain lists, the view and the parameters.
///
/// The view is held as the sorted cell codes of its tuples in `domain`;
/// [`PublishedView::to_relation`] materializes it. `seed` is kept for
/// reproducibility and is not part of the public release.
#[derive(Debug, Clone, PartialEq)]
pub struct PublishedView {
    domain: DomainDescriptor,
    cells: Vec<u64>,
    params: MechanismParams,
    seed: u64,
}

impl PublishedView {
    /// Assembles a view from its parts, e.g. after reading published files.
    pub fn new(domain: DomainDescriptor, view: &Relation, params: MechanismParams, seed: u64) -> Result<Self> {
        if view.schema() != domain.schema() {
            return Err(Error::SchemaMismatch);
        }
        let cells =
            view.iter().map(|t| domain.encode(t).ok_or(Error::TupleOutsideDomain)).collect::<Result<Vec<_>>>()?;
        // Relation iteration is in tuple order, which is code order.
        debug_assert!(cells.windows(2).all(|w| w[0] < w[1]));
        Ok(PublishedView { domain, cells, params, seed })
    }

    pub fn domain(&self) -> &DomainDescriptor {
        &self.domain
    }

    pub fn params(&self) -> &MechanismParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sorted cell codes of the view tuples.
    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, tuple: &Tuple) -> bool {
        self.domain.encode(tuple).is_some_and(|c| self.cells.binary_search(&c).is_ok())
    }

    pub fn tuples(&self) -> impl ExactSizeIterator<Item = Tuple> + '_ {
        self.cells.iter().map(|&c| self.domain.decode(c))
    }

    pub fn to_relation(&self) -> Relation {
        Relation::from_tuples(self.domain.schema().clone(), self.tuples())
            .expect("decoded tuples conform to the schema")
    }
}

/// An input instance prepared against its domain, ready to be released any
/// number of times with different parameters or seeds.
#[derive(Debug, Clone)]
pub struct Anonymizer {
    domain: DomainDescriptor,
    /// Sorted codes of the input tuples.
    input: Vec<u64>,
}

impl Anonymizer {
    pub fn new(instance: &Relation, domain: &DomainDescriptor) -> Result<Self> {
        if instance.schema() != domain.schema() {
            return Err(Error::SchemaMismatch);
        }
        let input =
            instance.iter().map(|t| domain.encode(t).ok_or(Error::TupleOutsideDomain)).collect::<Result<Vec<_>>>()?;
        Ok(Anonymizer { domain: domain.clone(), input })
    }

    pub fn domain(&self) -> &DomainDescriptor {
        &self.domain
    }

    pub fn input_cells(&self) -> &[u64] {
        &self.input
    }

    /// Keeps every input tuple independently with probability `alpha`, then
    /// inserts `Binomial(m - n, beta)` distinct tuples drawn uniformly without
    /// replacement from `D \ I`.
    pub fn release(&self, params: MechanismParams, seed: u64) -> Result<PublishedView> {
        let mut cells = Vec::new();

        let mut rng = stream_rng(seed, RETENTION_STREAM);
        let keep = Bernoulli::new(params.alpha()).expect("alpha validated in [0, 1]");
        cells.extend(self.input.iter().copied().filter(|_| keep.sample(&mut rng)));

        let outside = self.domain.size() - self.input.len() as u64;
        let mut rng = stream_rng(seed, INSERTION_STREAM);
        let count = Binomial::new(outside, params.beta()).expect("beta validated in [0, 1]").sample(&mut rng);
        if count > 0 {
            let outside = usize::try_from(outside).map_err(|_| Error::DomainOverflow)?;
            let ranks = index::sample(&mut rng, outside, count as usize);
            cells.extend(ranks.into_iter().map(|r| self.cell_of_outside_rank(r as u64)));
        }

        cells.sort_unstable();
        Ok(PublishedView { domain: self.domain.clone(), cells, params, seed })
    }

    /// Cell code of the `rank`-th (0-based, ascending) domain cell not in the input.
    fn cell_of_outside_rank(&self, rank: u64) -> u64 {
        // Before input[j] there are input[j] - j outside cells; that count is
        // nondecreasing in j.
        let (mut lo, mut hi) = (0, self.input.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.input[mid] - mid as u64 <= rank {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let below = lo;
        rank + below as u64
    }
}

/// One release of the insert-remove mechanism on `instance`.
pub fn anonymize(
    instance: &Relation,
    domain: &DomainDescriptor,
    params: MechanismParams,
    seed: u64,
) -> Result<PublishedView> {
    Anonymizer::new(instance, domain)?.release(params, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{test_scores, AttrKind, Schema, Value};

    fn scores() -> (Relation, DomainDescriptor) {
        let i = test_scores();
        let d = DomainDescriptor::from_relation(&i).unwrap();
        (i, d)
    }

    #[test]
    fn identity_and_empty_mechanisms() {
        let (i, d) = scores();
        for seed in 0..20 {
            let v = anonymize(&i, &d, MechanismParams::new(1.0, 0.0).unwrap(), seed).unwrap();
            assert_eq!(v.to_relation(), i);
            let v = anonymize(&i, &d, MechanismParams::new(0.0, 0.0).unwrap(), seed).unwrap();
            assert!(v.is_empty());
        }
    }

    #[test]
    fn full_insertion_fills_the_domain() {
        let (i, d) = scores();
        let v = anonymize(&i, &d, MechanismParams::new(1.0, 1.0).unwrap(), 7).unwrap();
        assert_eq!(v.cells(), (0..90).collect::<Vec<_>>().as_slice());
        let v = anonymize(&i, &d, MechanismParams::new(0.0, 1.0).unwrap(), 7).unwrap();
        assert_eq!(v.len(), 84);
        assert!(i.iter().all(|t| !v.contains(t)));
    }

    #[test]
    fn same_seed_same_view() {
        let (i, d) = scores();
        let p = MechanismParams::new(0.5, 0.3).unwrap();
        assert_eq!(anonymize(&i, &d, p, 42).unwrap(), anonymize(&i, &d, p, 42).unwrap());
        let differs = (0..10).any(|s| anonymize(&i, &d, p, s).unwrap() != anonymize(&i, &d, p, 42).unwrap());
        assert!(differs);
    }

    #[test]
    fn retention_decisions_independent_of_beta() {
        let (i, d) = scores();
        let a = anonymize(&i, &d, MechanismParams::new(0.5, 0.0).unwrap(), 3).unwrap();
        let b = anonymize(&i, &d, MechanismParams::new(0.5, 0.4).unwrap(), 3).unwrap();
        for t in &i {
            assert_eq!(a.contains(t), b.contains(t));
        }
    }

    #[test]
    fn outside_rank_enumerates_complement() {
        let schema = Schema::from_pairs([("x", AttrKind::Integer)]).unwrap();
        let d = DomainDescriptor::new(schema.clone(), vec![(0..10).map(Value::Int).collect()]).unwrap();
        let i = Relation::from_tuples(schema, [0i64, 2, 5, 6, 9].map(|x| crate::tuple![x])).unwrap();
        let a = Anonymizer::new(&i, &d).unwrap();
        let got: Vec<u64> = (0..5).map(|r| a.cell_of_outside_rank(r)).collect();
        assert_eq!(got, vec![1, 3, 4, 7, 8]);
    }

    #[test]
    fn rejects_tuples_outside_domain() {
        let (mut i, d) = scores();
        i.insert(crate::tuple![40, "British", 99]).unwrap();
        assert_eq!(Anonymizer::new(&i, &d).unwrap_err(), Error::TupleOutsideDomain);
    }

    #[test]
    fn published_view_round_trips_through_relation() {
        let (i, d) = scores();
        let v = anonymize(&i, &d, MechanismParams::new(0.5, 0.2).unwrap(), 11).unwrap();
        let back = PublishedView::new(d, &v.to_relation(), *v.params(), v.seed()).unwrap();
        assert_eq!(back, v);
    }
}
