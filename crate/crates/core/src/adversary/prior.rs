use std::collections::BTreeMap;

use crate::error::{Error, Result};

use super::cells::{check_oracle_size, CellSet};

const MASS_TOLERANCE: f64 = 1e-12;

/// One exclusion set: exactly one of `members` occurs, with the given probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExclusionSet {
    pub members: Vec<(usize, f64)>,
}

/// An adversary's belief about the hidden instance, over cells `0..m` of a tiny domain.
#[derive(Debug, Clone, PartialEq)]
pub enum PriorModel {
    /// Each cell is present independently with its own probability; a
    /// probability of 1 marks a tuple the adversary already knows.
    Independent(Vec<f64>),
    /// Mutually independent exclusion sets. Cells outside every set never occur.
    Exclusive { m: usize, sets: Vec<ExclusionSet> },
    /// An explicit distribution over instances.
    Explicit { m: usize, masses: BTreeMap<CellSet, f64> },
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidPrior(format!("probability {p} outside [0, 1]")))
    }
}

impl PriorModel {
    pub fn independent(probs: Vec<f64>) -> Result<Self> {
        check_oracle_size(probs.len() as u64)?;
        probs.iter().try_for_each(|&p| check_prob(p))?;
        Ok(PriorModel::Independent(probs))
    }

    /// Every one of the `m` cells with the same probability `p`.
    pub fn uniform_independent(m: usize, p: f64) -> Result<Self> {
        PriorModel::independent(vec![p; m])
    }

    pub fn exclusive(m: usize, sets: Vec<ExclusionSet>) -> Result<Self> {
        check_oracle_size(m as u64)?;
        let mut seen = CellSet::EMPTY;
        for s in &sets {
            if s.members.is_empty() {
                return Err(Error::InvalidPrior("empty exclusion set".into()));
            }
            let mut total = 0.0;
            for &(cell, p) in &s.members {
                check_prob(p)?;
                if cell >= m || seen.contains(cell) {
                    return Err(Error::InvalidPrior(format!("cell {cell} out of range or in two sets")));
                }
                seen = seen.with(cell);
                total += p;
            }
            if (total - 1.0).abs() > MASS_TOLERANCE {
                return Err(Error::InvalidPrior(format!("exclusion set masses sum to {total}, not 1")));
            }
        }
        Ok(PriorModel::Exclusive { m, sets })
    }

    pub fn explicit(m: usize, masses: BTreeMap<CellSet, f64>) -> Result<Self> {
        check_oracle_size(m as u64)?;
        let full = CellSet::full(m);
        let mut total = 0.0;
        for (&s, &p) in &masses {
            if !(p >= 0.0) || s.difference(full) != CellSet::EMPTY {
                return Err(Error::InvalidPrior(format!("bad entry {s} -> {p}")));
            }
            total += p;
        }
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidPrior(format!("masses sum to {total}, not 1")));
        }
        Ok(PriorModel::Explicit { m, masses })
    }

    /// Number of domain cells.
    pub fn cells(&self) -> usize {
        match self {
            PriorModel::Independent(p) => p.len(),
            PriorModel::Exclusive { m, .. } | PriorModel::Explicit { m, .. } => *m,
        }
    }

    /// Marginal prior `Pr[t ∈ I]` of every cell.
    pub fn marginals(&self) -> Vec<f64> {
        match self {
            PriorModel::Independent(p) => p.clone(),
            PriorModel::Exclusive { m, sets } => {
                let mut out = vec![0.0; *m];
                for s in sets {
                    for &(c, p) in &s.members {
                        out[c] = p;
                    }
                }
                out
            }
            PriorModel::Explicit { m, masses } => {
                let mut out = vec![0.0; *m];
                for (s, p) in masses {
                    for c in s.iter() {
                        out[c] += p;
                    }
                }
                out
            }
        }
    }

    /// `d`-bounded: every marginal is at most `d` or exactly 1.
    pub fn is_bounded_by(&self, d: f64) -> bool {
        self.marginals().iter().all(|&p| p <= d || p == 1.0)
    }

    /// Every instance with positive prior mass.
    pub fn instances(&self) -> Vec<(CellSet, f64)> {
        match self {
            PriorModel::Independent(probs) => {
                // Build the product distribution one cell at a time.
                let mut dist = vec![(CellSet::EMPTY, 1.0)];
                for (c, &p) in probs.iter().enumerate() {
                    let mut next = Vec::with_capacity(dist.len() * 2);
                    for &(s, q) in &dist {
                        if p < 1.0 {
                            next.push((s, q * (1.0 - p)));
                        }
                        if p > 0.0 {
                            next.push((s.with(c), q * p));
                        }
                    }
                    dist = next;
                }
                dist.retain(|&(_, q)| q > 0.0);
                dist
            }
            PriorModel::Exclusive { sets, .. } => {
                let mut dist = vec![(CellSet::EMPTY, 1.0)];
                for s in sets {
                    dist = dist
                        .iter()
                        .flat_map(|&(i, q)| {
                            s.members.iter().filter(|(_, p)| *p > 0.0).map(move |&(c, p)| (i.with(c), q * p))
                        })
                        .collect();
                }
                dist
            }
            PriorModel::Explicit { masses, .. } => {
                masses.iter().filter(|(_, &p)| p > 0.0).map(|(&s, &p)| (s, p)).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn independent_instances_sum_to_one() {
        let prior = PriorModel::independent(vec![0.1, 0.5, 1.0, 0.0]).unwrap();
        let inst = prior.instances();
        assert_eq!(inst.len(), 4);
        assert!((inst.iter().map(|x| x.1).sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(inst.iter().all(|(s, _)| s.contains(2) && !s.contains(3)));
        assert!(prior.is_bounded_by(0.5));
        assert!(!prior.is_bounded_by(0.2));
    }

    #[test]
    fn exclusive_instances_pick_one_per_set() {
        let prior = PriorModel::exclusive(
            5,
            vec![
                ExclusionSet { members: vec![(0, 0.5), (1, 0.25), (2, 0.25)] },
                ExclusionSet { members: vec![(3, 0.4), (4, 0.6)] },
            ],
        )
        .unwrap();
        let inst = prior.instances();
        assert_eq!(inst.len(), 6);
        assert!(inst.iter().all(|(s, _)| s.len() == 2));
        let m = prior.marginals();
        assert_eq!(m, vec![0.5, 0.25, 0.25, 0.4, 0.6]);
    }

    #[test]
    fn validation() {
        assert!(PriorModel::independent(vec![1.5]).is_err());
        assert!(PriorModel::independent(vec![0.1; 21]).is_err());
        assert!(PriorModel::exclusive(3, vec![ExclusionSet { members: vec![(0, 0.5), (1, 0.4)] }]).is_err());
        assert!(PriorModel::exclusive(
            3,
            vec![ExclusionSet { members: vec![(0, 0.5), (1, 0.5)] }, ExclusionSet { members: vec![(1, 1.0)] }]
        )
        .is_err());
        let mut masses = BTreeMap::new();
        masses.insert(CellSet::from_cells([0]), 0.5);
        masses.insert(CellSet::EMPTY, 0.4);
        assert!(PriorModel::explicit(2, masses.clone()).is_err());
        masses.insert(CellSet::EMPTY, 0.5);
        assert!(PriorModel::explicit(2, masses.clone()).is_ok());
        masses.insert(CellSet::from_cells([3]), 0.0);
        assert!(PriorModel::explicit(2, masses).is_err());
    }
}
