//! Command-line front end. Output records are plain serde structs so that
//! JSON output parses back to the same value; CSV numbers carry 17
//! significant digits.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{c_alpha, focal_drift, limit_interval, Direction};
use crate::error::{FabError, Result};
use crate::exec::Execution;
use crate::fab_gaussian::{confidence_region_with, p_value_curve, z_interval, PValueCurve, RegionOptions};
use crate::fab_nef::{Estimate, GridSpec, NefModel, DEFAULT_RESOLUTION};
use crate::priors::{PriorKind, PriorModel};
use crate::regression::{fit, load_csv, sort_by_z_width, MarginalRow, Noise, Preprocess};
use crate::simulate::{run_experiment, ExperimentConfig, ExperimentResult};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "FABCR_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "fabcr", version, about = "FAB confidence regions, focal points and p-value functions")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Region, focal point and p-values for a Gaussian observation.
    Region(RegionArgs),
    /// Region for a discrete exponential-family observation.
    Nef(NefArgs),
    /// Large-|y| limits of the region for a prior with exponential tails.
    Limits(LimitsArgs),
    /// Per-coefficient regions for a linear regression read from CSV.
    Regress(RegressArgs),
    /// Monte Carlo width and coverage study.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long)]
    pub prior: String,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub y: f64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Prior location (center of symmetry).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub location: f64,
    /// p-value curve over θ₀ = LO, LO+STEP, ..., HI.
    #[arg(long, value_name = "LO:HI:STEP", allow_hyphen_values = true)]
    pub pvalue_grid: Option<String>,
    /// Step of a membership scan that reports disconnected regions.
    #[arg(long)]
    pub scan_step: Option<f64>,
}

#[derive(Debug, Args)]
pub struct NefArgs {
    /// e.g. binom:n=8,a=1,b=1, pois:a=1,p=0.5, multinom:n=15,a=1;1;1
    #[arg(long)]
    pub family: String,
    /// Observed counts, comma separated for the multinomial.
    #[arg(long)]
    pub y: String,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    pub resolution: f64,
    /// Multiplies the Poisson support bound.
    #[arg(long, default_value_t = 1.0)]
    pub truncation_factor: f64,
    /// With --format csv, print the region summary instead of the grid.
    #[arg(long)]
    pub summary: bool,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[arg(long)]
    pub prior: String,
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
}

#[derive(Debug, Args)]
pub struct RegressArgs {
    #[arg(long)]
    pub csv: PathBuf,
    #[arg(long)]
    pub response: String,
    /// Covariate columns, comma separated; defaults to all other columns.
    #[arg(long, value_delimiter = ',')]
    pub covariates: Option<Vec<String>>,
    #[arg(long)]
    pub impute_median: bool,
    #[arg(long)]
    pub standardize: bool,
    #[arg(long)]
    pub intercept: bool,
    /// Known noise variance, or `estimate`.
    #[arg(long, default_value = "estimate")]
    pub sigma2: String,
    #[arg(long, default_value = "horseshoe")]
    pub prior: String,
    #[arg(long, default_value_t = 0.1)]
    pub alpha: f64,
    /// Order rows by z-interval width instead of column order.
    #[arg(long)]
    pub sort: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides the replication count in the config file.
    #[arg(long)]
    pub reps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub schema: String,
    pub prior: String,
    pub sigma: f64,
    pub y: f64,
    pub alpha: f64,
    pub focal: f64,
    pub lo: f64,
    pub hi: f64,
    pub width: f64,
    pub intervals: Vec<(f64, f64)>,
    pub disconnected: bool,
    pub z_lo: f64,
    pub z_hi: f64,
    pub pvalues: Option<PValueCurve>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NefRecord {
    pub schema: String,
    pub family: String,
    pub y: Vec<u32>,
    pub alpha: f64,
    pub resolution: f64,
    pub grid_points: usize,
    pub members: usize,
    pub intervals: Vec<(f64, f64)>,
    pub components: usize,
    pub estimate: Estimate,
    pub estimate_member: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitsRecord {
    pub schema: String,
    pub prior: String,
    pub sigma: f64,
    pub alpha: f64,
    pub c_alpha: f64,
    /// Offsets of `C(y) - y` as `y → +∞`.
    pub plus: (f64, f64),
    /// Offsets of `C(y) - y` as `y → -∞`.
    pub minus: (f64, f64),
    pub focal_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressRow {
    pub name: String,
    #[serde(flatten)]
    pub row: MarginalRow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressRecord {
    pub schema: String,
    pub prior: String,
    pub alpha: f64,
    pub n: usize,
    pub p: usize,
    /// Noise variance, absent when a full covariance was supplied.
    pub sigma2: Option<f64>,
    pub approximate: bool,
    pub condition: f64,
    pub rows: Vec<RegressRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRecord {
    pub schema: String,
    #[serde(flatten)]
    pub result: ExperimentResult,
}

/// Any subcommand's output.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    Region(RegionRecord),
    Nef(NefRecord, NefGrid),
    Limits(LimitsRecord),
    Regress(RegressRecord),
    Simulate(SimulateRecord),
}

/// θ grid and membership flags, kept out of the JSON summary.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NefGrid {
    pub theta: Vec<Vec<f64>>,
    pub member: Vec<bool>,
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || FabError::Parse(format!("p-value grid '{spec}' is not LO:HI:STEP"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let [lo, hi, step] = parts[..] else { return Err(bad()) };
    if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 10_000_000 {
        return Err(FabError::InvalidInput(format!("p-value grid has {count} points")));
    }
    Ok((0..count).map(|i| lo + i as f64 * step).collect())
}

fn parse_counts(s: &str) -> Result<Vec<u32>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| FabError::Parse(format!("bad count '{t}'"))))
        .collect()
}

pub fn region(args: &RegionArgs, exec: Execution) -> Result<RegionRecord> {
    let model = PriorModel::parse(&args.prior, args.sigma)?.with_location(args.location);
    let opts = RegionOptions { scan_step: args.scan_step };
    let reg = confidence_region_with(&model, args.y, args.alpha, opts)?;
    let pvalues = match &args.pvalue_grid {
        Some(g) => Some(p_value_curve(&model, args.y, &parse_grid(g)?, exec)?),
        None => None,
    };
    let (z_lo, z_hi) = z_interval(args.y, args.sigma, args.alpha);
    Ok(RegionRecord {
        schema: "fabcr.region.v1".into(),
        prior: model.spec(),
        sigma: args.sigma,
        y: args.y,
        alpha: args.alpha,
        focal: reg.focal,
        lo: reg.lo(),
        hi: reg.hi(),
        width: reg.width(),
        intervals: reg.intervals.clone(),
        disconnected: reg.disconnected,
        z_lo,
        z_hi,
        pvalues,
    })
}

pub fn nef(args: &NefArgs, exec: Execution) -> Result<(NefRecord, NefGrid)> {
    let model: NefModel = args.family.parse()?;
    let y = parse_counts(&args.y)?;
    let grid = GridSpec { resolution: args.resolution, truncation_factor: args.truncation_factor };
    let reg = model.confidence_region(&y, args.alpha, grid, exec)?;
    let record = NefRecord {
        schema: "fabcr.nef.v1".into(),
        family: model.to_string(),
        y: reg.y.clone(),
        alpha: args.alpha,
        resolution: args.resolution,
        grid_points: reg.grid.len(),
        members: reg.member.iter().filter(|&&m| m).count(),
        intervals: reg.intervals.clone(),
        components: reg.components,
        estimate: reg.estimate.clone(),
        estimate_member: reg.estimate_member,
    };
    Ok((record, NefGrid { theta: reg.grid, member: reg.member }))
}

pub fn limits(args: &LimitsArgs) -> Result<LimitsRecord> {
    let model = PriorModel::parse(&args.prior, args.sigma)?;
    let plus = limit_interval(&model, args.alpha, Direction::PlusInfinity)?;
    let minus = limit_interval(&model, args.alpha, Direction::MinusInfinity)?;
    Ok(LimitsRecord {
        schema: "fabcr.limits.v1".into(),
        prior: model.spec(),
        sigma: args.sigma,
        alpha: args.alpha,
        c_alpha: c_alpha(&model, args.alpha)?,
        plus: (plus.lo_offset, plus.hi_offset),
        minus: (minus.lo_offset, minus.hi_offset),
        focal_drift: focal_drift(&model)?,
    })
}

pub fn regress(args: &RegressArgs, exec: Execution) -> Result<RegressRecord> {
    let kind: PriorKind = args.prior.parse()?;
    let noise = if args.sigma2.trim().eq_ignore_ascii_case("estimate") {
        Noise::Estimate
    } else {
        let v: f64 = args
            .sigma2
            .trim()
            .parse()
            .map_err(|_| FabError::Parse(format!("--sigma2 '{}' is neither a number nor 'estimate'", args.sigma2)))?;
        Noise::Known(v)
    };
    let prep = Preprocess {
        impute_median: args.impute_median,
        standardize: args.standardize,
        intercept: args.intercept,
    };
    let data = load_csv(&args.csv, &args.response, args.covariates.as_deref(), prep)?;
    let n = data.x.nrows();
    let prob = fit(data.x, data.y, noise)?;
    let mut rows = prob.all_marginal_regions(kind, args.alpha, exec)?;
    if args.sort {
        sort_by_z_width(&mut rows);
    }
    let rows = rows
        .into_iter()
        .map(|row| RegressRow { name: data.names[row.coef].clone(), row })
        .collect();
    Ok(RegressRecord {
        schema: "fabcr.regress.v1".into(),
        prior: kind.to_string(),
        alpha: args.alpha,
        n,
        p: prob.p(),
        sigma2: prob.sigma2,
        approximate: prob.approximate,
        condition: prob.condition,
        rows,
    })
}

pub fn simulate(args: &SimulateArgs, exec: Execution) -> Result<SimulateRecord> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| FabError::InvalidInput(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(reps) = args.reps {
        cfg.reps = reps;
    }
    Ok(SimulateRecord { schema: "fabcr.simulate.v1".into(), result: run_experiment(&cfg, exec)? })
}

impl Output {
    pub fn to_json(&self) -> String {
        let v = match self {
            Output::Region(r) => serde_json::to_string_pretty(r),
            Output::Nef(r, _) => serde_json::to_string_pretty(r),
            Output::Limits(r) => serde_json::to_string_pretty(r),
            Output::Regress(r) => serde_json::to_string_pretty(r),
            Output::Simulate(r) => serde_json::to_string_pretty(r),
        };
        v.expect("output records serialize") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        match self {
            Output::Region(r) => {
                out.push_str("prior,sigma,y,alpha,focal,lo,hi,width,z_lo,z_hi,disconnected\n");
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    r.prior,
                    num(r.sigma),
                    num(r.y),
                    num(r.alpha),
                    num(r.focal),
                    num(r.lo),
                    num(r.hi),
                    num(r.width),
                    num(r.z_lo),
                    num(r.z_hi),
                    r.disconnected as u8
                );
                if let Some(c) = &r.pvalues {
                    out.push_str("\ntheta0,p_value\n");
                    for (t, p) in c.grid.iter().zip(&c.pvals) {
                        let _ = writeln!(out, "{},{}", num(*t), num(*p));
                    }
                }
            }
            Output::Nef(r, g) => {
                let d = g.theta.first().map_or(1, Vec::len);
                let cols: Vec<String> = if d == 1 {
                    vec!["theta".into()]
                } else {
                    (1..=d).map(|j| format!("theta{j}")).collect()
                };
                let _ = writeln!(out, "{},member", cols.join(","));
                for (t, &m) in g.theta.iter().zip(&g.member) {
                    let vals: Vec<String> = t.iter().map(|&v| num(v)).collect();
                    let _ = writeln!(out, "{},{}", vals.join(","), m as u8);
                }
                let _ = r;
            }
            Output::Limits(r) => {
                out.push_str("prior,sigma,alpha,direction,c_alpha,lo_offset,hi_offset,focal_drift\n");
                for (dir, (lo, hi), drift) in [("plus", r.plus, r.focal_drift), ("minus", r.minus, -r.focal_drift)] {
                    let _ = writeln!(
                        out,
                        "{},{},{},{dir},{},{},{},{}",
                        r.prior,
                        num(r.sigma),
                        num(r.alpha),
                        num(r.c_alpha),
                        num(lo),
                        num(hi),
                        num(drift)
                    );
                }
            }
            Output::Regress(r) => {
                out.push_str("coef,mle,focal,lo,hi,z_lo,z_hi,width_ratio\n");
                for RegressRow { name, row } in &r.rows {
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        name,
                        num(row.mle),
                        num(row.focal),
                        num(row.lo),
                        num(row.hi),
                        num(row.z_lo),
                        num(row.z_hi),
                        num(row.width_ratio)
                    );
                }
            }
            Output::Simulate(r) => out = r.result.to_csv(),
        }
        out
    }

    /// NEF summary as `key,value` lines.
    pub fn nef_summary_csv(r: &NefRecord) -> String {
        let mut out = String::from("key,value\n");
        let _ = writeln!(out, "family,{}", r.family);
        let ys: Vec<String> = r.y.iter().map(u32::to_string).collect();
        let _ = writeln!(out, "y,{}", ys.join(";"));
        let _ = writeln!(out, "alpha,{}", num(r.alpha));
        let _ = writeln!(out, "components,{}", r.components);
        for (i, (a, b)) in r.intervals.iter().enumerate() {
            let _ = writeln!(out, "interval{},{};{}", i + 1, num(*a), num(*b));
        }
        let th: Vec<String> = r.estimate.theta.iter().map(|&v| num(v)).collect();
        let _ = writeln!(out, "estimate,{}", th.join(";"));
        let _ = writeln!(out, "estimate_member,{}", r.estimate_member as u8);
        out
    }
}

/// Installs the global thread pool size from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| FabError::InvalidInput(format!("{THREADS_ENV}='{v}' must be a positive integer")))?;
    #[cfg(feature = "parallel")]
    {
        // a second call within one process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

/// Runs a parsed command line and returns the rendered output.
pub fn run(cli: &Cli) -> Result<String> {
    configure_threads()?;
    let exec = if cli.sequential { Execution::Sequential } else { Execution::preferred() };
    let output = match &cli.command {
        Command::Region(a) => Output::Region(region(a, exec)?),
        Command::Nef(a) => {
            let (r, g) = nef(a, exec)?;
            if a.summary && cli.format == Format::Csv {
                return Ok(Output::nef_summary_csv(&r));
            }
            Output::Nef(r, g)
        }
        Command::Limits(a) => Output::Limits(limits(a)?),
        Command::Regress(a) => Output::Regress(regress(a, exec)?),
        Command::Simulate(a) => Output::Simulate(simulate(a, exec)?),
    };
    Ok(match cli.format {
        Format::Csv => output.to_csv(),
        Format::Json => output.to_json(),
    })
}

pub fn exit_code(err: &FabError) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}
