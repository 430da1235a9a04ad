//! The accuracy experiment: a fixed family of selection queries, each
//! answered exactly on the input and estimated from the view.

use std::collections::HashMap;
use std::path::Path;

use rand::seq::index;
use relpriv::anonymizer::{stream_rng, MechanismParams, PublishedView, UtilityBudget};
use relpriv::estimator::{error_bound, estimate, estimate_count, guarantee_radius};
use relpriv::model::{eval_query_instance, AttrKind, ConjunctiveQuery, DomainDescriptor, Predicate, Relation};
use serde::{Deserialize, Serialize};

use crate::config::{implied_utility, ExperimentSpec, RunConfig};
use crate::error::{HarnessError, Result};
use crate::io::{create_file, finish, load_relation_with, read_view_bundle, write_json};
use crate::publish::release;

pub const SCATTER_FILE: &str = "scatter.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// RNG stream for sampling the query family; streams 0 to 2 belong to the mechanism.
pub const QUERY_SAMPLE_STREAM: u64 = 3;

/// Histograms up to this many cells are dense arrays; larger ones are sparse.
const DENSE_LIMIT: u64 = 1 << 22;

/// One query of the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRecord {
    pub query: String,
    pub q_of_i: u64,
    pub est: f64,
    pub abs_error: f64,
    pub n_d: u64,
}

/// A single-attribute predicate and the domain positions it selects.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub predicate: Predicate,
    pub indices: Vec<usize>,
}

/// Every conjunction of candidate predicates over at most `max_arity` attributes.
#[derive(Debug, Clone)]
pub struct QueryFamily {
    domain: DomainDescriptor,
    candidates: Vec<Vec<Candidate>>,
    /// (attribute, candidate) pairs per query, attributes ascending; queries
    /// over the same attributes are contiguous.
    queries: Vec<Vec<(usize, usize)>>,
}

/// Edges of `buckets` equal-count buckets of the sorted `values`, deduplicated.
pub fn quantile_edges(values: &mut [i64], buckets: usize) -> Vec<i64> {
    values.sort_unstable();
    let mut edges: Vec<i64> = (0..=buckets).map(|j| values[j * (values.len() - 1) / buckets]).collect();
    edges.dedup();
    edges
}

fn candidates_for(instance: &Relation, domain: &DomainDescriptor, attr: usize, buckets: usize) -> Vec<Candidate> {
    let values = domain.values(attr);
    let select = |p: Predicate| {
        let indices = (0..values.len()).filter(|&i| p.matches(&values[i])).collect();
        Candidate { predicate: p, indices }
    };
    match domain.schema().attribute(attr).kind {
        AttrKind::Categorical => values.iter().map(|v| select(Predicate::eq(v.clone()))).collect(),
        AttrKind::Integer => {
            let mut col: Vec<i64> = instance.iter().filter_map(|t| t.values()[attr].as_int()).collect();
            let edges = quantile_edges(&mut col, buckets.max(1));
            if edges.len() == 1 {
                return vec![select(Predicate::eq(edges[0]))];
            }
            let mut out = Vec::new();
            for i in 0..edges.len() {
                for j in i + 1..edges.len() {
                    out.push(select(Predicate::range(edges[i], edges[j]).expect("edges ascend")));
                }
            }
            out
        }
    }
}

fn attribute_subsets(arity: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for size in 1..=max.min(arity) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            out.push(idx.clone());
            let Some(i) = (0..size).rev().find(|&i| idx[i] < arity - size + i) else { break };
            idx[i] += 1;
            for j in i + 1..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    out
}

impl QueryFamily {
    /// Categorical attributes contribute one equality per domain value;
    /// integer attributes contribute every range between two quantile edges
    /// of the instance's values.
    pub fn build(instance: &Relation, domain: &DomainDescriptor, max_arity: usize, buckets: usize) -> Result<Self> {
        if instance.is_empty() || max_arity == 0 {
            return Err(HarnessError::Config("query family is empty".into()));
        }
        let arity = domain.schema().arity();
        let candidates: Vec<Vec<Candidate>> =
            (0..arity).map(|a| candidates_for(instance, domain, a, buckets)).collect();
        let mut queries = Vec::new();
        for attrs in attribute_subsets(arity, max_arity) {
            let mut choice = vec![0usize; attrs.len()];
            'product: loop {
                queries.push(attrs.iter().zip(&choice).map(|(&a, &c)| (a, c)).collect());
                for pos in (0..attrs.len()).rev() {
                    choice[pos] += 1;
                    if choice[pos] < candidates[attrs[pos]].len() {
                        continue 'product;
                    }
                    choice[pos] = 0;
                }
                break;
            }
        }
        Ok(QueryFamily { domain: domain.clone(), candidates, queries })
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    pub fn query(&self, i: usize) -> ConjunctiveQuery {
        let mut q = ConjunctiveQuery::all(self.domain.schema());
        for &(a, c) in &self.queries[i] {
            q.set(a, self.candidates[a][c].predicate.clone()).expect("predicate kinds follow the schema");
        }
        q
    }

    fn n_domain(&self, i: usize) -> u64 {
        let spec = &self.queries[i];
        (0..self.domain.schema().arity())
            .map(|a| match spec.iter().find(|(x, _)| *x == a) {
                Some(&(_, c)) => self.candidates[a][c].indices.len() as u64,
                None => self.domain.values(a).len() as u64,
            })
            .product()
    }
}

/// Per-attribute value positions of each tuple, row-major.
struct Coords {
    arity: usize,
    data: Vec<u32>,
}

impl Coords {
    fn of_codes(domain: &DomainDescriptor, codes: impl Iterator<Item = u64>) -> Self {
        let arity = domain.schema().arity();
        let data = codes.flat_map(|c| (0..arity).map(move |a| domain.coordinate(c, a) as u32)).collect();
        Coords { arity, data }
    }

    fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.data.chunks_exact(self.arity)
    }
}

/// Joint counts of the instance and the view over one attribute subset.
enum Histogram {
    Dense { sizes: Vec<usize>, inst: Vec<u32>, view: Vec<u32> },
    Sparse { entries: Vec<(Vec<u32>, u32, u32)> },
}

impl Histogram {
    fn build(domain: &DomainDescriptor, attrs: &[usize], inst: &Coords, view: &Coords) -> Self {
        let sizes: Vec<usize> = attrs.iter().map(|&a| domain.values(a).len()).collect();
        let cells = sizes.iter().try_fold(1u64, |acc, &s| acc.checked_mul(s as u64));
        match cells {
            Some(total) if total <= DENSE_LIMIT => {
                let key = |row: &[u32]| attrs.iter().zip(&sizes).fold(0usize, |k, (&a, &s)| k * s + row[a] as usize);
                let mut h_inst = vec![0u32; total as usize];
                let mut h_view = vec![0u32; total as usize];
                inst.rows().for_each(|r| h_inst[key(r)] += 1);
                view.rows().for_each(|r| h_view[key(r)] += 1);
                Histogram::Dense { sizes, inst: h_inst, view: h_view }
            }
            _ => {
                let mut map: HashMap<Vec<u32>, (u32, u32)> = HashMap::new();
                for r in inst.rows() {
                    map.entry(attrs.iter().map(|&a| r[a]).collect()).or_default().0 += 1;
                }
                for r in view.rows() {
                    map.entry(attrs.iter().map(|&a| r[a]).collect()).or_default().1 += 1;
                }
                let mut entries: Vec<_> = map.into_iter().map(|(k, (i, v))| (k, i, v)).collect();
                entries.sort_unstable();
                Histogram::Sparse { entries }
            }
        }
    }

    /// `(Q(I), Q(V))` where `selected[j]` lists the positions allowed on the j-th attribute.
    fn count(&self, selected: &[&[usize]]) -> (u64, u64) {
        match self {
            Histogram::Dense { sizes, inst, view } => {
                fn walk(dim: usize, base: usize, sizes: &[usize], sel: &[&[usize]], h: (&[u32], &[u32])) -> (u64, u64) {
                    if dim == sizes.len() {
                        return (h.0[base] as u64, h.1[base] as u64);
                    }
                    sel[dim].iter().fold((0, 0), |acc, &i| {
                        let (a, b) = walk(dim + 1, base * sizes[dim] + i, sizes, sel, h);
                        (acc.0 + a, acc.1 + b)
                    })
                }
                walk(0, 0, sizes, selected, (inst, view))
            }
            Histogram::Sparse { entries } => entries
                .iter()
                .filter(|(k, _, _)| k.iter().zip(selected).all(|(x, s)| s.binary_search(&(*x as usize)).is_ok()))
                .fold((0, 0), |acc, (_, i, v)| (acc.0 + *i as u64, acc.1 + *v as u64)),
        }
    }
}

/// Exact and estimated answers of `which` queries of the family.
pub fn evaluate_family(
    family: &QueryFamily,
    which: &[usize],
    instance: &Relation,
    view: &PublishedView,
) -> Result<Vec<ScatterRecord>> {
    let domain = &family.domain;
    if view.domain() != domain {
        return Err(HarnessError::Data("view was published over a different domain".into()));
    }
    let inst_codes = instance
        .iter()
        .map(|t| domain.encode(t).ok_or(relpriv::Error::TupleOutsideDomain))
        .collect::<Result<Vec<u64>, _>>()?;
    let inst = Coords::of_codes(domain, inst_codes.into_iter());
    let vcoords = Coords::of_codes(domain, view.cells().iter().copied());
    let params: &MechanismParams = view.params();

    let mut out = Vec::with_capacity(which.len());
    let mut start = 0;
    while start < which.len() {
        let attrs: Vec<usize> = family.queries[which[start]].iter().map(|x| x.0).collect();
        let mut end = start;
        while end < which.len() && family.queries[which[end]].iter().map(|x| x.0).eq(attrs.iter().copied()) {
            end += 1;
        }
        let hist = Histogram::build(domain, &attrs, &inst, &vcoords);
        for &qi in &which[start..end] {
            let selected: Vec<&[usize]> =
                family.queries[qi].iter().map(|&(a, c)| family.candidates[a][c].indices.as_slice()).collect();
            let (q_of_i, n_view) = hist.count(&selected);
            let n_d = family.n_domain(qi);
            let est = estimate_count(n_view, n_d, params)?;
            out.push(ScatterRecord {
                query: family.query(qi).to_string(),
                q_of_i,
                est,
                abs_error: (q_of_i as f64 - est).abs(),
                n_d,
            });
        }
        start = end;
    }

    // spot-check the histogram path against the direct evaluators
    let step = (which.len() / 12).max(1);
    for pos in (0..which.len()).step_by(step) {
        let q = family.query(which[pos]);
        let direct = estimate(&q, view)?;
        let rec = &out[pos];
        assert_eq!((direct.n_domain, direct.estimate), (rec.n_d, rec.est), "query {}", rec.query);
        assert_eq!(eval_query_instance(&q, instance)?, rec.q_of_i, "query {}", rec.query);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandCoverage {
    pub width: f64,
    pub fraction: f64,
    /// Coverage among queries with `Q(I)` at or above the threshold.
    pub fraction_above_threshold: Option<f64>,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub queries: usize,
    pub family_size: usize,
    pub n: u64,
    pub m: u64,
    pub alpha: f64,
    pub beta: f64,
    pub bands: Vec<BandCoverage>,
    pub threshold: u64,
    pub queries_above_threshold: usize,
    /// Mean of `est - Q(I)` over queries at or above the threshold.
    pub mean_signed_error_above_threshold: Option<f64>,
    pub r: f64,
    pub failure_prob: f64,
    pub rho: f64,
    pub rho_sqrt_n: f64,
    /// Fraction of queries with error below `rho * sqrt(n)`.
    pub within_rho_sqrt_n: f64,
}

fn coverage(records: &[&ScatterRecord], width: f64) -> Option<f64> {
    (!records.is_empty()).then(|| records.iter().filter(|r| r.abs_error <= width).count() as f64 / records.len() as f64)
}

pub fn summarize_run(
    records: &[ScatterRecord],
    family_size: usize,
    n: u64,
    view: &PublishedView,
    utility: &UtilityBudget,
    spec: &ExperimentSpec,
) -> ExperimentSummary {
    let all: Vec<&ScatterRecord> = records.iter().collect();
    let above: Vec<&ScatterRecord> = records.iter().filter(|r| r.q_of_i >= spec.threshold).collect();
    let bands = spec
        .bands
        .iter()
        .map(|&w| BandCoverage {
            width: w,
            fraction: coverage(&all, w).unwrap_or(0.0),
            fraction_above_threshold: coverage(&above, w),
        })
        .collect();
    let mean_signed =
        (!above.is_empty()).then(|| above.iter().map(|r| r.est - r.q_of_i as f64).sum::<f64>() / above.len() as f64);
    let rho = error_bound(utility);
    let radius = guarantee_radius(rho, n);
    ExperimentSummary {
        queries: records.len(),
        family_size,
        n,
        m: view.domain().size(),
        alpha: view.params().alpha(),
        beta: view.params().beta(),
        bands,
        threshold: spec.threshold,
        queries_above_threshold: above.len(),
        mean_signed_error_above_threshold: mean_signed,
        r: utility.r(),
        failure_prob: utility.failure_prob(),
        rho,
        rho_sqrt_n: radius,
        within_rho_sqrt_n: coverage(&all, radius).unwrap_or(0.0),
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub records: Vec<ScatterRecord>,
    pub summary: ExperimentSummary,
}

/// Builds the family for `instance`, evaluates it (or a seeded sample of
/// it) on `view` and summarizes the errors.
pub fn experiment_on(
    instance: &Relation,
    view: &PublishedView,
    utility: &UtilityBudget,
    spec: &ExperimentSpec,
    seed: u64,
) -> Result<ExperimentResult> {
    let family = QueryFamily::build(instance, view.domain(), spec.max_arity, spec.buckets)?;
    let which: Vec<usize> = match spec.sample {
        Some(s) if s < family.len() => {
            let mut v = index::sample(&mut stream_rng(seed, QUERY_SAMPLE_STREAM), family.len(), s).into_vec();
            v.sort_unstable();
            v
        }
        _ => (0..family.len()).collect(),
    };
    if which.is_empty() {
        return Err(HarnessError::Config("query family is empty".into()));
    }
    let records = evaluate_family(&family, &which, instance, view)?;
    let summary = summarize_run(&records, family.len(), instance.len() as u64, view, utility, spec);
    Ok(ExperimentResult { records, summary })
}

pub fn write_scatter(path: &Path, records: &[ScatterRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(create_file(path)?);
    for r in records {
        w.serialize(r)?;
    }
    let inner = w.into_inner().map_err(|e| HarnessError::io(path, e.into_error()))?;
    finish(path, inner)
}

/// Runs the experiment described by `config` and writes `scatter.csv` and
/// `summary.json` to `out_dir`. With `view_dir`, the view is read from a
/// published bundle instead of being released afresh.
pub fn run_experiment(config: &RunConfig, out_dir: &Path, view_dir: Option<&Path>) -> Result<ExperimentResult> {
    let (instance, view, utility) = match view_dir {
        Some(dir) => {
            let (view, pf) = read_view_bundle(dir)?;
            let loaded = load_relation_with(&config.input, &config.schema, config.missing_token.as_deref())?;
            let n = loaded.relation.len() as u64;
            let utility = match pf.planner {
                Some(p) => UtilityBudget::new(p.r, p.failure_prob)?,
                None => implied_utility(pf.beta, n, view.domain().size())?,
            };
            (loaded.relation, view, utility)
        }
        None => {
            let rel = release(config)?;
            (rel.loaded.relation, rel.view, rel.resolved.utility)
        }
    };
    let spec = &config.experiment;
    let utility = UtilityBudget::new(utility.r(), spec.failure_prob)?;
    let result = experiment_on(&instance, &view, &utility, spec, config.seed)?;
    std::fs::create_dir_all(out_dir).map_err(|e| HarnessError::io(out_dir, e))?;
    write_scatter(&out_dir.join(SCATTER_FILE), &result.records)?;
    write_json(&out_dir.join(SUMMARY_FILE), &result.summary)?;
    Ok(result)
}
