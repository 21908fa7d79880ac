//! Subcommands and their runners.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gse_core::det::Tolerance;
use gse_core::gof::{gof_test, two_sample_test};
use gse_core::inverse::{recover, recover_binary, recover_multiplicity, RecoverOptions, RecoveryResult};
use gse_core::tp::{all_minors, fiedler_ptak_check, jacobian, principal_minors, sweep_pmatrix, Orientation, OrderSource, SweepOptions};
use gse_core::witness::{find_collision, level_set_trace};
use gse_core::{gse, gse_gradient, gse_signature, scalar_profile, GseSignature, OrderSet, ScalarProfile, SortedDistribution};
use serde::{Deserialize, Serialize};

use crate::io::{self, parse_counts_list, parse_floats, parse_orders, CliError, CliResult};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Parser, Debug)]
#[command(name = "gse-lab", version, about = "Generalized Shannon entropy signatures: evaluation, inversion, collisions and tests")]
pub struct Cli {
    /// Seed for every random stream.
    #[arg(long, global = true, env = "GSE_LAB_SEED", default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Per-component signature tolerance for recovery.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Relative determinant tolerance: minors below `det_tol * max|entry|^k` are indeterminate.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub det_tol: f64,
    /// Include the per-iteration solver trace.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Signature of a distribution.
    Compute(PointArgs),
    /// Signature with per-order scalar profiles and gradients.
    Signature(PointArgs),
    /// Chart Jacobian with its minor reports.
    Jacobian(JacobianArgs),
    /// Randomized P-matrix sweep.
    Verify(VerifyArgs),
    /// Distribution from a signature.
    Recover(RecoverArgs),
    /// Two distinct distributions with equal signatures.
    Witness(WitnessArgs),
    /// Goodness-of-fit of counts against a null distribution.
    Gof(GofArgs),
    /// Two-sample test across possibly different alphabets.
    Twosample(TwoSampleArgs),
}

#[derive(Args, Debug)]
pub struct PointArgs {
    /// JSON file: {"probs": [...]} or a bare array.
    #[arg(long)]
    pub probs: PathBuf,
    #[arg(long, value_parser = parse_orders)]
    pub orders: OrderSet,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OrientationArg {
    Natural,
    SignTrue,
}

impl From<OrientationArg> for Orientation {
    fn from(o: OrientationArg) -> Self {
        match o {
            OrientationArg::Natural => Orientation::Natural,
            OrientationArg::SignTrue => Orientation::SignTrue,
        }
    }
}

#[derive(Args, Debug)]
pub struct JacobianArgs {
    #[command(flatten)]
    pub point: PointArgs,
    #[arg(long, value_enum, default_value = "sign-true")]
    pub orientation: OrientationArg,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long = "K")]
    pub k: usize,
    /// Fixed orders, exactly K-1 of them.
    #[arg(long, value_parser = parse_orders, conflicts_with = "random_orders")]
    pub orders: Option<OrderSet>,
    /// Fresh orders per point, uniform in LO,HI.
    #[arg(long, value_parser = parse_floats)]
    pub random_orders: Option<::std::vec::Vec<f64>>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "sign-true")]
    pub orientation: OrientationArg,
    /// Skip the scan over every square minor.
    #[arg(long)]
    pub principal_only: bool,
}

#[derive(Args, Debug)]
pub struct RecoverArgs {
    /// JSON file: {"K", "orders", "values", "multiplicity"?}; flags override its fields.
    #[arg(long)]
    pub signature: Option<PathBuf>,
    #[arg(long = "K")]
    pub k: Option<usize>,
    #[arg(long, value_parser = parse_orders)]
    pub orders: Option<OrderSet>,
    #[arg(long, value_parser = parse_floats, allow_hyphen_values = true)]
    pub values: Option<::std::vec::Vec<f64>>,
    /// Known group sizes n_1,...,n_s of a tied distribution.
    #[arg(long, value_parser = parse_counts_list)]
    pub multiplicity: Option<::std::vec::Vec<usize>>,
    #[arg(long, default_value_t = 20)]
    pub max_restarts: usize,
}

#[derive(Args, Debug)]
pub struct WitnessArgs {
    #[arg(long = "K")]
    pub k: usize,
    #[arg(long, value_parser = parse_orders)]
    pub orders: OrderSet,
    #[arg(long, default_value_t = 0.05)]
    pub min_sep: f64,
    /// Trace the level set through this point instead of searching for a pair.
    #[arg(long)]
    pub start: Option<PathBuf>,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[arg(long, default_value_t = 1e-2)]
    pub step_size: f64,
}

#[derive(Args, Debug)]
pub struct GofArgs {
    /// Counts as CSV or JSON.
    #[arg(long)]
    pub counts: PathBuf,
    /// Null distribution as JSON.
    #[arg(long)]
    pub null: PathBuf,
    #[arg(long, value_parser = parse_orders)]
    pub orders: Option<OrderSet>,
    #[arg(long = "B", default_value_t = 999)]
    pub b: usize,
}

#[derive(Args, Debug)]
pub struct TwoSampleArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_parser = parse_orders)]
    pub orders: Option<OrderSet>,
    #[arg(long = "B", default_value_t = 999)]
    pub b_reps: usize,
}

/// A report and the exit code it carries.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub code: i32,
}

impl Outcome {
    fn ok<T: Serialize>(v: &T) -> Self {
        Outcome { json: io::to_json(v), code: 0 }
    }
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct SignatureReport {
    pub point: SortedDistribution,
    pub orders: OrderSet,
    pub values: Vec<f64>,
    pub profiles: Vec<ScalarProfile>,
    /// Gradient of each order's entropy at the sorted point.
    pub gradients: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize, Debug, PartialEq)]
pub struct JacobianReport {
    pub jacobian: gse_core::tp::JacobianMatrix,
    pub orientation: Orientation,
    pub principal: Option<gse_core::tp::MinorReport>,
    pub all_minors: Option<gse_core::tp::MinorReport>,
    pub fiedler_ptak: Option<gse_core::tp::FiedlerPtak>,
}

#[derive(Deserialize, Debug, Default)]
pub struct RecoverRequest {
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub orders: Option<OrderSet>,
    pub values: Option<::std::vec::Vec<f64>>,
    pub multiplicity: Option<::std::vec::Vec<usize>>,
}

#[derive(Serialize, Debug)]
struct NotConverged {
    converged: bool,
    residual_norm: f64,
    restarts_used: usize,
}

#[derive(Serialize, Debug)]
struct TraceReport {
    orders: OrderSet,
    values: Vec<f64>,
    path: Vec<SortedDistribution>,
}

fn check_positive(field: &str, v: f64) -> CliResult<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Input(format!("--{field}: must be positive, got {v}")))
    }
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    check_positive("tol", cli.tol)?;
    check_positive("det-tol", cli.det_tol)?;
    let tolerance = Tolerance { rel: cli.det_tol, ..Tolerance::default() };
    match &cli.command {
        Command::Compute(a) => {
            let p = io::read_probs(&a.probs)?;
            Ok(Outcome::ok(&gse_signature(&p, &a.orders)?))
        }
        Command::Signature(a) => {
            let p = io::read_probs(&a.probs)?.sorted();
            let m = a.orders.as_slice();
            let report = SignatureReport {
                values: m.iter().map(|&o| gse(&p, o)).collect::<Result<_, _>>()?,
                profiles: m.iter().map(|&o| scalar_profile(&p, o)).collect::<Result<_, _>>()?,
                gradients: m.iter().map(|&o| gse_gradient(&p, o)).collect::<Result<_, _>>()?,
                orders: a.orders.clone(),
                point: p,
            };
            Ok(Outcome::ok(&report))
        }
        Command::Jacobian(a) => {
            let p = io::read_probs(&a.point.probs)?.sorted();
            let j = jacobian(&p, &a.point.orders)?;
            let o = a.orientation.into();
            let square = j.nrows() == j.ncols();
            let report = JacobianReport {
                principal: if square { Some(principal_minors(&j, o, &tolerance)?) } else { None },
                all_minors: if j.nrows().min(j.ncols()) <= gse_core::tp::ALL_MINORS_GUARD {
                    Some(all_minors(&j, o, &tolerance)?)
                } else {
                    None
                },
                fiedler_ptak: if square { Some(fiedler_ptak_check(&j, o, 256, cli.seed)?) } else { None },
                orientation: o,
                jacobian: j,
            };
            Ok(Outcome::ok(&report))
        }
        Command::Verify(a) => verify(cli, a, tolerance),
        Command::Recover(a) => recover_cmd(cli, a),
        Command::Witness(a) => {
            check_positive("min-sep", a.min_sep)?;
            match &a.start {
                None => Ok(Outcome::ok(&find_collision(a.k, &a.orders, a.min_sep, cli.seed)?)),
                Some(path) => {
                    let start = io::read_probs(path)?.sorted();
                    let path = level_set_trace(a.k, &a.orders, &start, a.steps, a.step_size)?;
                    let values = gse_signature(&start, &a.orders)?.values;
                    Ok(Outcome::ok(&TraceReport { orders: a.orders.clone(), values, path }))
                }
            }
        }
        Command::Gof(a) => {
            let c = io::read_counts(&a.counts)?;
            let q = io::read_probs(&a.null)?;
            let m = a.orders.clone().unwrap_or_else(OrderSet::default_inference);
            Ok(Outcome::ok(&gof_test(&c, &q, &m, a.b, cli.seed)?))
        }
        Command::Twosample(a) => {
            let x = io::read_counts(&a.a)?;
            let y = io::read_counts(&a.b)?;
            let m = a.orders.clone().unwrap_or_else(OrderSet::default_inference);
            Ok(Outcome::ok(&two_sample_test(&x, &y, &m, a.b_reps, cli.seed)?))
        }
    }
}

fn verify(cli: &Cli, a: &VerifyArgs, tolerance: Tolerance) -> CliResult<Outcome> {
    let source = match (&a.orders, &a.random_orders) {
        (Some(o), _) => {
            if o.len() + 1 != a.k {
                return Err(CliError::Input(format!("--orders: need exactly K-1 = {} orders, got {}", a.k.saturating_sub(1), o.len())));
            }
            OrderSource::Fixed(o.clone())
        }
        (None, Some(r)) => match r.as_slice() {
            &[lo, hi] => OrderSource::Random { lo, hi },
            _ => return Err(CliError::Input("--random-orders: expected LO,HI".into())),
        },
        (None, None) => return Err(CliError::Input("--orders: required unless --random-orders is given".into())),
    };
    if a.samples == 0 {
        return Err(CliError::Input("--samples: must be at least 1".into()));
    }
    if a.k > gse_core::tp::PRINCIPAL_GUARD + 1 {
        return Err(gse_core::Error::Guard { dim: a.k - 1, max: gse_core::tp::PRINCIPAL_GUARD }.into());
    }
    let opts = SweepOptions {
        tolerance,
        orientation: a.orientation.into(),
        all_minors: !a.principal_only,
        ..SweepOptions::default()
    };
    let report = sweep_pmatrix(a.k, &source, a.samples, cli.seed, &opts)?;
    // the exit code tracks the P-matrix claim; the all-minors scan is reported only
    let pass = report.principal.negative == 0 && report.principal.indeterminate == 0;
    Ok(Outcome { json: io::to_json(&report), code: if pass { 0 } else { 1 } })
}

fn recover_cmd(cli: &Cli, a: &RecoverArgs) -> CliResult<Outcome> {
    let file = match &a.signature {
        Some(path) => io::read_json::<RecoverRequest>(path)?,
        None => RecoverRequest::default(),
    };
    let orders = a.orders.clone().or(file.orders).ok_or_else(|| CliError::Input("orders: missing".into()))?;
    let values = a.values.clone().or(file.values).ok_or_else(|| CliError::Input("values: missing".into()))?;
    let target = GseSignature::new(orders.clone(), values)?;
    let multiplicity = a.multiplicity.clone().or(file.multiplicity);
    let opts = RecoverOptions {
        tol: cli.tol,
        seed: cli.seed,
        trace: cli.trace,
        max_restarts: a.max_restarts,
        ..RecoverOptions::default()
    };
    let not_converged = |e: gse_core::Error| match e {
        gse_core::Error::NoConvergence { best_residual, starts } => Ok(Outcome {
            json: io::to_json(&NotConverged { converged: false, residual_norm: best_residual, restarts_used: starts }),
            code: 1,
        }),
        other => Err(CliError::from(other)),
    };
    if let Some(counts) = multiplicity {
        let k: usize = counts.iter().sum();
        if let Some(given) = a.k.or(file.k) {
            if given != k {
                return Err(CliError::Input(format!("K: {given} disagrees with multiplicity total {k}")));
            }
        }
        return match recover_multiplicity(&counts, &orders, &target, &opts) {
            Ok(r) => Ok(Outcome::ok(&r)),
            Err(e) => not_converged(e),
        };
    }
    let k = a.k.or(file.k).ok_or_else(|| CliError::Input("K: missing".into()))?;
    if k == 2 && orders.len() == 1 {
        let m = orders.as_slice()[0];
        let p = recover_binary(m, target.values[0])?;
        let residual = (gse(&p, m)? - target.values[0]).abs();
        let result = RecoveryResult {
            multiplicity: p.has_multiplicity(),
            distribution: p,
            residual_norm: residual,
            iterations: 0,
            restarts_used: 0,
            converged: residual <= cli.tol,
            sigma_min: None,
            trace: None,
        };
        let code = if result.converged { 0 } else { 1 };
        return Ok(Outcome { json: io::to_json(&result), code });
    }
    match recover(k, &orders, &target, &opts) {
        Ok(r) => Ok(Outcome::ok(&r)),
        Err(e) => not_converged(e),
    }
}
