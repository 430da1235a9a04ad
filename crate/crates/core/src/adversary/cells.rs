use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DomainDescriptor, Relation, Tuple};

/// Largest domain the exhaustive oracle accepts.
pub const MAX_ORACLE_CELLS: usize = 20;

/// A subset of a tiny domain, one bit per cell code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
pub struct CellSet(u32);

impl CellSet {
    pub const EMPTY: CellSet = CellSet(0);

    pub fn from_bits(bits: u32) -> Self {
        CellSet(bits)
    }

    /// All cells `0..m`.
    pub fn full(m: usize) -> Self {
        assert!(m <= 32);
        CellSet(if m == 32 { u32::MAX } else { (1u32 << m) - 1 })
    }

    pub fn from_cells(cells: impl IntoIterator<Item = usize>) -> Self {
        cells.into_iter().fold(CellSet::EMPTY, CellSet::with)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, cell: usize) -> bool {
        self.0 >> cell & 1 == 1
    }

    pub fn with(self, cell: usize) -> Self {
        CellSet(self.0 | 1 << cell)
    }

    pub fn without(self, cell: usize) -> Self {
        CellSet(self.0 & !(1 << cell))
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersection(self, other: CellSet) -> Self {
        CellSet(self.0 & other.0)
    }

    pub fn difference(self, other: CellSet) -> Self {
        CellSet(self.0 & !other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            (bits != 0).then(|| {
                let c = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                c
            })
        })
    }
}

impl fmt::Display for CellSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

/// Every subset of `0..m` with exactly `k` cells, in increasing bit order.
pub fn subsets_of_size(m: usize, k: usize) -> impl Iterator<Item = CellSet> {
    subsets_within(CellSet::full(m), k)
}

/// Every `k`-subset of `within`.
pub fn subsets_within(within: CellSet, k: usize) -> impl Iterator<Item = CellSet> {
    let cells: Vec<usize> = within.iter().collect();
    let n = cells.len();
    let mut idx: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let cur = idx.as_mut()?;
        let out = CellSet::from_cells(cur.iter().map(|&i| cells[i]));
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                idx = None;
                break;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

pub(crate) fn check_oracle_size(m: u64) -> Result<usize> {
    if m > MAX_ORACLE_CELLS as u64 {
        return Err(Error::OracleDomainTooLarge { m, max: MAX_ORACLE_CELLS as u64 });
    }
    Ok(m as usize)
}

/// Cell-set form of `relation` within a domain of at most [`MAX_ORACLE_CELLS`] cells.
pub fn cell_set(domain: &DomainDescriptor, relation: &Relation) -> Result<CellSet> {
    check_oracle_size(domain.size())?;
    if relation.schema() != domain.schema() {
        return Err(Error::SchemaMismatch);
    }
    relation.iter().try_fold(CellSet::EMPTY, |s, t| Ok(s.with(cell_of(domain, t)?)))
}

pub fn cell_of(domain: &DomainDescriptor, tuple: &Tuple) -> Result<usize> {
    check_oracle_size(domain.size())?;
    domain.encode(tuple).map(|c| c as usize).ok_or(Error::TupleOutsideDomain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_complete() {
        for m in 0..8 {
            for k in 0..=m + 1 {
                let all: Vec<CellSet> = subsets_of_size(m, k).collect();
                let expect = (0u32..1 << m).filter(|b| b.count_ones() as usize == k).count();
                assert_eq!(all.len(), expect, "m={m} k={k}");
                assert!(all.iter().all(|s| s.len() as usize == k && s.bits() < 1 << m));
                assert!(all.windows(2).all(|w| w[0] != w[1]));
            }
        }
    }

    #[test]
    fn set_operations() {
        let s = CellSet::from_cells([0, 3, 5]);
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(4));
        assert_eq!(s.without(3).iter().collect::<Vec<_>>(), vec![0, 5]);
        assert_eq!(s.to_string(), "{0,3,5}");
        assert_eq!(CellSet::full(4).difference(s), CellSet::from_cells([1, 2]));
    }
}
