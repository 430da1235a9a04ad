use crate::anonymizer::MechanismParams;
use crate::error::{Error, Result};
use crate::model::{DomainDescriptor, Relation, Tuple};

use super::cells::{cell_of, cell_set, check_oracle_size, CellSet};
use super::prior::PriorModel;

const MASS_TOLERANCE: f64 = 1e-12;

/// `Pr^I[V]` for a domain of `m` cells.
pub fn view_probability(instance: CellSet, view: CellSet, m: usize, params: &MechanismParams) -> f64 {
    let (a, b) = (params.alpha(), params.beta());
    let kept = instance.intersection(view).len() as i32;
    let dropped = instance.difference(view).len() as i32;
    let inserted = view.difference(instance).len() as i32;
    let absent = m as i32 - kept - dropped - inserted;
    a.powi(kept) * (1.0 - a).powi(dropped) * b.powi(inserted) * (1.0 - b).powi(absent)
}

/// A probability distribution over every subset of a tiny domain, indexed by bitmask.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewDistribution {
    m: usize,
    probs: Vec<f64>,
}

impl ViewDistribution {
    /// Validates length `2^m`, non-negative entries and total mass 1 within 1e-12.
    pub fn new(m: usize, probs: Vec<f64>) -> Result<Self> {
        check_oracle_size(m as u64)?;
        if probs.len() != 1 << m {
            return Err(Error::InvalidParameter(format!("expected {} probabilities, got {}", 1u64 << m, probs.len())));
        }
        if probs.iter().any(|p| !(*p >= 0.0)) {
            return Err(Error::InvalidParameter("negative or NaN probability".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidParameter(format!("probabilities sum to {total}")));
        }
        Ok(ViewDistribution { m, probs })
    }

    /// Output distribution of the mechanism on a fixed instance.
    pub fn of_instance(instance: CellSet, m: usize, params: &MechanismParams) -> Result<Self> {
        check_oracle_size(m as u64)?;
        // Tensor product, one cell at a time; keeps rounding error at O(m) ulps.
        let mut probs = Vec::with_capacity(1 << m);
        probs.push(1.0);
        for c in 0..m {
            let q = if instance.contains(c) { params.alpha() } else { params.beta() };
            let len = probs.len();
            probs.extend_from_within(..);
            for p in &mut probs[..len] {
                *p *= 1.0 - q;
            }
            for p in &mut probs[len..] {
                *p *= q;
            }
        }
        Ok(ViewDistribution { m, probs })
    }

    /// Average of the view distributions of `instances`, each with weight `1/len`.
    pub fn uniform_mixture(instances: &[CellSet], m: usize, params: &MechanismParams) -> Result<Self> {
        if instances.is_empty() {
            return Err(Error::InvalidParameter("empty mixture".into()));
        }
        let w = 1.0 / instances.len() as f64;
        let mut probs = vec![0.0; 1 << m];
        for &i in instances {
            let d = ViewDistribution::of_instance(i, m, params)?;
            for (acc, p) in probs.iter_mut().zip(&d.probs) {
                *acc += w * p;
            }
        }
        Ok(ViewDistribution { m, probs })
    }

    pub fn cells(&self) -> usize {
        self.m
    }

    pub fn probability(&self, view: CellSet) -> f64 {
        self.probs[view.bits() as usize]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Distribution of the published view when the mechanism runs on `i` over domain `d`.
pub fn exact_view_distribution(
    i: &Relation,
    d: &DomainDescriptor,
    params: &MechanismParams,
) -> Result<ViewDistribution> {
    let instance = cell_set(d, i)?;
    ViewDistribution::of_instance(instance, d.size() as usize, params)
}

/// `SD = Σ_V |Pr_a[V] − Pr_b[V]|`, ranging over [0, 2].
pub fn statistical_difference(a: &ViewDistribution, b: &ViewDistribution) -> Result<f64> {
    if a.m != b.m {
        return Err(Error::UniverseMismatch);
    }
    Ok(a.probs.iter().zip(&b.probs).map(|(x, y)| (x - y).abs()).sum())
}

/// `Pr[event(I) | V]` under `prior`, by enumerating every instance.
pub fn exact_event_posterior(
    prior: &PriorModel,
    params: &MechanismParams,
    view: CellSet,
    event: impl Fn(CellSet) -> bool,
) -> Result<f64> {
    let m = prior.cells();
    let (mut joint, mut total) = (0.0, 0.0);
    for (i, p) in prior.instances() {
        let w = p * view_probability(i, view, m, params);
        total += w;
        if event(i) {
            joint += w;
        }
    }
    if total == 0.0 {
        return Err(Error::ViewImpossible);
    }
    Ok(joint / total)
}

/// `Pr[t ∈ I | V]` for every cell `t`.
pub fn exact_posteriors(prior: &PriorModel, params: &MechanismParams, view: CellSet) -> Result<Vec<f64>> {
    let m = prior.cells();
    let mut joint = vec![0.0; m];
    let mut total = 0.0;
    for (i, p) in prior.instances() {
        let w = p * view_probability(i, view, m, params);
        total += w;
        for c in i.iter() {
            joint[c] += w;
        }
    }
    if total == 0.0 {
        return Err(Error::ViewImpossible);
    }
    Ok(joint.into_iter().map(|j| j / total).collect())
}

/// `Pr[t ∈ I | V]` for a single cell.
pub fn exact_posterior(prior: &PriorModel, params: &MechanismParams, view: CellSet, cell: usize) -> Result<f64> {
    if cell >= prior.cells() {
        return Err(Error::TupleOutsideDomain);
    }
    exact_event_posterior(prior, params, view, |i| i.contains(cell))
}

/// [`exact_posterior`] with the view and tuple given as relation data over `d`.
pub fn exact_posterior_of(
    prior: &PriorModel,
    params: &MechanismParams,
    d: &DomainDescriptor,
    view: &Relation,
    t: &Tuple,
) -> Result<f64> {
    if prior.cells() as u64 != d.size() {
        return Err(Error::UniverseMismatch);
    }
    exact_posterior(prior, params, cell_set(d, view)?, cell_of(d, t)?)
}
