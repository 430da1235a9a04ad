use std::collections::BTreeMap;

use serde::Serialize;

use crate::anonymizer::{Anonymizer, MechanismParams};
use crate::error::{Error, Result};
use crate::model::{DomainDescriptor, Relation};

use super::cells::{cell_set, check_oracle_size, subsets_of_size, subsets_within, CellSet};
use super::exact::{exact_event_posterior, statistical_difference, view_probability, ViewDistribution};
use super::prior::PriorModel;

/// Largest domain the meaningfulness experiment enumerates.
pub const MAX_MEANINGFULNESS_CELLS: usize = 12;
/// Largest domain the indistinguishability search enumerates.
pub const MAX_INDIST_CELLS: usize = 10;

/// Cut-offs for labelling a configuration meaningless: at least `fraction`
/// of the admissible queries have SD below `sd`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeaningfulnessThresholds {
    pub sd: f64,
    pub fraction: f64,
}

impl Default for MeaningfulnessThresholds {
    fn default() -> Self {
        MeaningfulnessThresholds { sd: 0.5, fraction: 2.0 / 3.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuerySd {
    pub query: CellSet,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeaningfulnessReport {
    pub per_query: Vec<QuerySd>,
    pub fraction_below: f64,
    pub meaningless: bool,
    pub thresholds: MeaningfulnessThresholds,
}

/// [`meaningfulness_experiment_with`] at the default thresholds.
pub fn meaningfulness_experiment(m: usize, n: usize, params: &MechanismParams, f: f64) -> Result<MeaningfulnessReport> {
    meaningfulness_experiment_with(m, n, params, f, MeaningfulnessThresholds::default())
}

/// For every query `Q` with `(1-f)/2 <= |Q|/m <= (1+f)/2`, compares the view
/// distribution given "I is a uniform n-subset of Q" against "I is a uniform
/// n-subset of D \ Q".
pub fn meaningfulness_experiment_with(
    m: usize,
    n: usize,
    params: &MechanismParams,
    f: f64,
    thresholds: MeaningfulnessThresholds,
) -> Result<MeaningfulnessReport> {
    if m > MAX_MEANINGFULNESS_CELLS {
        return Err(Error::OracleDomainTooLarge { m: m as u64, max: MAX_MEANINGFULNESS_CELLS as u64 });
    }
    if !(0.0..1.0).contains(&f) {
        return Err(Error::InvalidParameter(format!("query fraction f = {f} must lie in [0, 1)")));
    }
    let lo = 0.5 * (1.0 - f) * m as f64;
    let hi = 0.5 * (1.0 + f) * m as f64;
    let full = CellSet::full(m);
    let mut per_query = Vec::new();
    for size in 0..=m {
        let s = size as f64;
        if s < lo - 1e-9 || s > hi + 1e-9 || n > size || n > m - size {
            continue;
        }
        for q in subsets_of_size(m, size) {
            let inside: Vec<CellSet> = subsets_within(q, n).collect();
            let outside: Vec<CellSet> = subsets_within(full.difference(q), n).collect();
            let a = ViewDistribution::uniform_mixture(&inside, m, params)?;
            let b = ViewDistribution::uniform_mixture(&outside, m, params)?;
            per_query.push(QuerySd { query: q, sd: statistical_difference(&a, &b)? });
        }
    }
    if per_query.is_empty() {
        return Err(Error::NoAdmissibleQuery);
    }
    let below = per_query.iter().filter(|q| q.sd < thresholds.sd).count();
    let fraction_below = below as f64 / per_query.len() as f64;
    Ok(MeaningfulnessReport {
        per_query,
        fraction_below,
        meaningless: fraction_below >= thresholds.fraction,
        thresholds,
    })
}

/// `ln max Pr^I[V] / Pr^I'[V]` over all size-`n` instance pairs differing in
/// one swapped tuple and all views. Infinite when some view is possible under
/// one instance and impossible under the other.
pub fn indistinguishability_epsilon(params: &MechanismParams, m: usize, n: usize) -> Result<f64> {
    if m > MAX_INDIST_CELLS {
        return Err(Error::OracleDomainTooLarge { m: m as u64, max: MAX_INDIST_CELLS as u64 });
    }
    if n == 0 || n >= m {
        return Err(Error::InvalidParameter(format!("need 1 <= n < m (got n = {n}, m = {m})")));
    }
    let full = CellSet::full(m);
    let mut worst: f64 = 1.0;
    for i in subsets_of_size(m, n) {
        let base: Vec<f64> = (0..1u32 << m).map(|v| view_probability(i, CellSet::from_bits(v), m, params)).collect();
        for out in i.iter() {
            for inn in full.difference(i).iter() {
                let j = i.without(out).with(inn);
                for (v, &num) in base.iter().enumerate() {
                    if num == 0.0 {
                        continue;
                    }
                    let den = view_probability(j, CellSet::from_bits(v as u32), m, params);
                    if den == 0.0 {
                        return Ok(f64::INFINITY);
                    }
                    worst = worst.max(num / den);
                }
            }
        }
    }
    Ok(worst.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BreachReport {
    pub view: CellSet,
    pub posterior_of_set: f64,
}

fn two_point_prior(i: &Relation, d: &DomainDescriptor) -> Result<(PriorModel, CellSet)> {
    let s = cell_set(d, i)?;
    if s.is_empty() {
        return Err(Error::InvalidParameter("breach demo needs a nonempty instance".into()));
    }
    let m = check_oracle_size(d.size())?;
    let masses = BTreeMap::from([(s, 0.5), (CellSet::EMPTY, 0.5)]);
    Ok((PriorModel::explicit(m, masses)?, s))
}

/// Runs the mechanism on `i` and computes the exact posterior that the whole
/// of `i` is present, for an adversary who believes all of `i` or none of it
/// is present, each with probability 1/2.
pub fn correlated_breach_demo(
    i: &Relation,
    d: &DomainDescriptor,
    params: &MechanismParams,
    seed: u64,
) -> Result<BreachReport> {
    let (prior, s) = two_point_prior(i, d)?;
    let view = Anonymizer::new(i, d)?.release(*params, seed)?;
    let v = CellSet::from_cells(view.cells().iter().map(|&c| c as usize));
    let posterior_of_set = exact_event_posterior(&prior, params, v, |inst| inst == s)?;
    Ok(BreachReport { view: v, posterior_of_set })
}

/// Mean of the breach posterior over every view, weighted by its probability
/// when the mechanism runs on `i`.
pub fn expected_breach_posterior(i: &Relation, d: &DomainDescriptor, params: &MechanismParams) -> Result<f64> {
    let (prior, s) = two_point_prior(i, d)?;
    let m = prior.cells();
    let dist = ViewDistribution::of_instance(s, m, params)?;
    let mut total = 0.0;
    for (v, &w) in dist.probs().iter().enumerate() {
        if w > 0.0 {
            total += w * exact_event_posterior(&prior, params, CellSet::from_bits(v as u32), |inst| inst == s)?;
        }
    }
    Ok(total)
}
