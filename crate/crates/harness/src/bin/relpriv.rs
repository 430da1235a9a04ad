use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relpriv::adversary::{
    check_exclusive_safe, classify_leakage, delta_from_absolute, epsilon_from_relative, impossibility_frontier,
    meaningfulness_experiment_with, posterior_exclusive_worstcase, posterior_independent, MeaningfulnessThresholds,
};
use relpriv::anonymizer::{
    check_privacy_params, plan_parameters, view_size_ratio, BetaPolicy, MechanismParams, PrivacyBudget, UtilityBudget,
};
use relpriv::estimator::{error_bound, estimate_with_guarantee, guarantee_radius};
use relpriv::model::{build_domain, parse_query, Schema};
use relpriv_harness::config::{implied_utility, ExperimentSpec, ParamSource, RunConfig};
use relpriv_harness::experiment::run_experiment;
use relpriv_harness::io::{load_relation_with, read_params_file, read_view_bundle, write_relation_csv};
use relpriv_harness::publish::publish;
use relpriv_harness::summarize::summarize_errors;
use relpriv_harness::surrogate::{adults_surrogate, ADULTS_N, ADULTS_SCHEMA};
use relpriv_harness::{HarnessError, Result};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "relpriv",
    version,
    about = "Publish relations through the insert-remove mechanism and study the result"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Choose alpha and beta for a privacy budget
    Plan(PlanArgs),
    /// Anonymize a CSV file into view.csv, domain.json and params.json
    Publish(PublishArgs),
    /// Estimate a counting query from a published view
    Estimate(EstimateArgs),
    /// Posterior and leakage analysis for one prior
    Attack(AttackArgs),
    /// Run the query-family accuracy experiment
    Experiment(ExperimentArgs),
    /// Band coverage of a scatter.csv by Q(I) decile
    Summarize(SummarizeArgs),
    /// Prior threshold above which no meaningful algorithm is private
    Frontier(FrontierArgs),
    /// Statistical-difference experiment on a tiny domain
    SdDemo(SdDemoArgs),
    /// Write a synthetic census-like relation
    Surrogate(SurrogateArgs),
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    input: PathBuf,
    /// Attribute declarations, e.g. `age:int,nationality:cat`
    #[arg(long)]
    schema: Schema,
    /// Drop rows holding this value in any column
    #[arg(long)]
    drop_missing: Option<String>,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    policy: Option<BetaPolicy>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
}

impl ParamArgs {
    fn source(&self) -> Result<ParamSource> {
        ParamSource::from_flags(self.k, self.gamma, self.policy, self.alpha, self.beta)
    }
}

#[derive(Args)]
struct PlanArgs {
    /// Instance size; or give --input and --schema
    #[arg(long)]
    n: Option<u64>,
    /// Domain size
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    schema: Option<Schema>,
    #[arg(long)]
    k: f64,
    #[arg(long)]
    gamma: f64,
    #[arg(long, default_value = "minimal-beta")]
    policy: BetaPolicy,
}

#[derive(Args)]
struct PublishArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    /// Directory written by `publish`
    #[arg(long)]
    view_dir: PathBuf,
    /// e.g. `age in [26,31] and score >= 91`
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = 0.05)]
    failure_prob: f64,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    d: f64,
    #[arg(long)]
    gamma: f64,
    /// Prior of the attacked tuple; defaults to d
    #[arg(long)]
    prior: Option<f64>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    seed: Option<u64>,
    /// Read the view from a published bundle instead of releasing a new one
    #[arg(long)]
    view_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 3)]
    arity: usize,
    #[arg(long, default_value_t = 8)]
    buckets: usize,
    /// Evaluate a seeded sample of this many queries
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "100,500,1000")]
    bands: Vec<f64>,
    #[arg(long, default_value_t = 500)]
    threshold: u64,
    #[arg(long, default_value_t = 0.05)]
    failure_prob: f64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct SummarizeArgs {
    #[arg(long)]
    scatter: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "100,500,1000")]
    bands: Vec<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FrontierArgs {
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u64,
    #[arg(long)]
    gamma: f64,
    /// The unspecified constant of the bound
    #[arg(long)]
    c: f64,
}

#[derive(Args)]
struct SdDemoArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    /// Admissible queries have |Q|/m within (1 +- f)/2
    #[arg(long, default_value_t = 0.2)]
    f: f64,
    #[arg(long, default_value_t = 0.5)]
    sd_threshold: f64,
    #[arg(long, default_value_t = 2.0 / 3.0)]
    fraction_threshold: f64,
    /// Include every query's SD in the output
    #[arg(long)]
    per_query: bool,
}

#[derive(Args)]
struct SurrogateArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = ADULTS_N)]
    n: usize,
    #[arg(long)]
    out: PathBuf,
}

fn need_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| HarnessError::Config("--seed is required for randomized runs".into()))
}

fn print(value: &serde_json::Value) {
    emit(&format!("{}\n", serde_json::to_string_pretty(value).expect("json values serialize")));
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
}

fn run_config(data: DataArgs, params: &ParamArgs, seed: Option<u64>) -> Result<RunConfig> {
    let mut cfg = RunConfig::new(data.input, data.schema, params.source()?, seed)?;
    cfg.missing_token = data.drop_missing;
    Ok(cfg)
}

fn plan(a: PlanArgs) -> Result<()> {
    let (n, m) = match (a.n, a.m, a.input, a.schema) {
        (Some(n), Some(m), None, None) => (n, m),
        (None, None, Some(input), Some(schema)) => {
            let loaded = load_relation_with(&input, &schema, None)?;
            let d = build_domain(&loaded.relation)?;
            (loaded.relation.len() as u64, d.size())
        }
        _ => return Err(HarnessError::Config("give --n and --m, or --input and --schema".into())),
    };
    let plan = plan_parameters(n, m, a.k, a.gamma, a.policy)?;
    let rho = error_bound(&plan.utility);
    print(&json!({
        "n": n,
        "m": m,
        "policy": a.policy.to_string(),
        "alpha": plan.params.alpha(),
        "beta": plan.params.beta(),
        "d": plan.privacy.d(),
        "gamma": plan.privacy.gamma(),
        "r": plan.utility.r(),
        "failure_prob": plan.utility.failure_prob(),
        "expected_view_size": plan.params.expected_view_size(n, m),
        "view_size_ratio_limit": view_size_ratio(a.k, a.gamma),
        "rho": rho,
        "rho_sqrt_n": guarantee_radius(rho, n),
    }));
    Ok(())
}

fn publish_cmd(a: PublishArgs) -> Result<()> {
    let cfg = run_config(a.data, &a.params, a.seed)?;
    let (rel, pf) = publish(&cfg, &a.out_dir)?;
    print(&json!({
        "rows": rel.loaded.rows,
        "duplicates": rel.loaded.duplicates,
        "dropped": rel.loaded.dropped,
        "n": pf.n,
        "m": pf.m,
        "alpha": pf.alpha,
        "beta": pf.beta,
        "view_size": pf.view_size,
        "expected_view_size": pf.expected_view_size,
        "out_dir": a.out_dir,
    }));
    Ok(())
}

fn estimate_cmd(a: EstimateArgs) -> Result<()> {
    let (view, pf) = read_view_bundle(&a.view_dir)?;
    let q = parse_query(&a.query, view.domain().schema())?;
    let r = match &pf.planner {
        Some(p) => p.r,
        None => implied_utility(pf.beta, pf.n, pf.m)?.r(),
    };
    let report = estimate_with_guarantee(&q, &view, &UtilityBudget::new(r, a.failure_prob)?, pf.n)?;
    print(&json!({
        "query": q.to_string(),
        "estimate": report.estimate,
        "clamped": report.clamped(pf.n),
        "n_view": report.n_view,
        "n_domain": report.n_domain,
        "guarantee_radius": report.guarantee_radius,
        "failure_prob": a.failure_prob,
    }));
    Ok(())
}

fn attack(a: AttackArgs) -> Result<()> {
    let params = MechanismParams::new(a.alpha, a.beta)?;
    let budget = PrivacyBudget::new(a.d, a.gamma)?;
    let prior = a.prior.unwrap_or(a.d);
    let present = posterior_independent(prior, &params, true).ok();
    let absent = posterior_independent(prior, &params, false).ok();
    let verdict = |post: Option<f64>| post.map(|p| classify_leakage(prior, p, &budget)).transpose();
    let exclusive = match check_exclusive_safe(&params, &budget) {
        Ok(v) => json!(v),
        Err(e) => json!({ "not_applicable": e.to_string() }),
    };
    let delta = delta_from_absolute(a.d, a.gamma)?;
    print(&json!({
        "privacy_check": check_privacy_params(&params, &budget),
        "exclusive_check": exclusive,
        "prior": prior,
        "posterior_present": present,
        "posterior_absent": absent,
        "leakage_present": verdict(present)?,
        "leakage_absent": verdict(absent)?,
        "exclusive_worstcase_posterior": posterior_exclusive_worstcase(prior, &params).ok(),
        "relative_delta": delta,
        "indist_epsilon": epsilon_from_relative(delta),
    }));
    Ok(())
}

fn experiment_cmd(a: ExperimentArgs) -> Result<()> {
    let source = match &a.view_dir {
        Some(dir) => {
            let p = &a.params;
            if [p.k, p.gamma, p.alpha, p.beta].iter().any(Option::is_some) || p.policy.is_some() {
                return Err(HarnessError::Config("with --view-dir the parameters come from params.json".into()));
            }
            let pf = read_params_file(dir)?;
            ParamSource::Explicit { alpha: pf.alpha, beta: pf.beta }
        }
        None => a.params.source()?,
    };
    let mut cfg = RunConfig::new(a.data.input, a.data.schema, source, a.seed)?;
    cfg.missing_token = a.data.drop_missing;
    cfg.experiment = ExperimentSpec {
        max_arity: a.arity,
        buckets: a.buckets,
        sample: a.sample,
        bands: a.bands,
        threshold: a.threshold,
        failure_prob: a.failure_prob,
    };
    let result = run_experiment(&cfg, &a.out_dir, a.view_dir.as_deref())?;
    print(&serde_json::to_value(&result.summary)?);
    Ok(())
}

fn summarize(a: SummarizeArgs) -> Result<()> {
    let table = summarize_errors(&a.scatter, &a.bands)?;
    if a.json {
        print(&serde_json::to_value(&table)?);
    } else {
        emit(&table.render());
    }
    Ok(())
}

fn frontier(a: FrontierArgs) -> Result<()> {
    if !(a.c > 0.0) || !(a.gamma > 0.0 && a.gamma < 1.0) || a.m == 0 {
        return Err(HarnessError::Config("need c > 0, 0 < gamma < 1 and m >= 1".into()));
    }
    print(&json!({
        "n": a.n,
        "m": a.m,
        "gamma": a.gamma,
        "c": a.c,
        "d_threshold": impossibility_frontier(a.n, a.m, a.gamma, a.c),
    }));
    Ok(())
}

fn sd_demo(a: SdDemoArgs) -> Result<()> {
    let params = MechanismParams::new(a.alpha, a.beta)?;
    let thresholds = MeaningfulnessThresholds { sd: a.sd_threshold, fraction: a.fraction_threshold };
    let report = meaningfulness_experiment_with(a.m, a.n, &params, a.f, thresholds)?;
    let sds = report.per_query.iter().map(|q| q.sd);
    let mut out = json!({
        "m": a.m,
        "n": a.n,
        "alpha": a.alpha,
        "beta": a.beta,
        "f": a.f,
        "queries": report.per_query.len(),
        "min_sd": sds.clone().fold(f64::INFINITY, f64::min),
        "max_sd": sds.fold(0.0, f64::max),
        "fraction_below": report.fraction_below,
        "meaningless": report.meaningless,
        "thresholds": report.thresholds,
    });
    if a.per_query {
        out["per_query"] = serde_json::to_value(&report.per_query)?;
    }
    print(&out);
    Ok(())
}

fn surrogate(a: SurrogateArgs) -> Result<()> {
    let seed = need_seed(a.seed)?;
    if a.n < 72 {
        return Err(HarnessError::Config("--n must be at least 72".into()));
    }
    let r = adults_surrogate(a.n, seed);
    write_relation_csv(Path::new(&a.out), r.schema(), r.iter())?;
    print(&json!({ "n": r.len(), "schema": ADULTS_SCHEMA, "out": a.out }));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan(a) => plan(a),
        Command::Publish(a) => publish_cmd(a),
        Command::Estimate(a) => estimate_cmd(a),
        Command::Attack(a) => attack(a),
        Command::Experiment(a) => experiment_cmd(a),
        Command::Summarize(a) => summarize(a),
        Command::Frontier(a) => frontier(a),
        Command::SdDemo(a) => sd_demo(a),
        Command::Surrogate(a) => surrogate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
