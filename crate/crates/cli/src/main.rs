//! Command-line runner: closed-form bound tables, Monte Carlo estimators,
//! inequality verdicts, and the full verification grid.
//!
//! Exit codes: 0 success/pass, 1 usage or configuration error, 2 numerical
//! error, 3 verification failure.

mod config;
mod output;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ConfigError, Params};
use stable_torsion::analytic::{
    ball_torsion_sup, bessel_window_constant, chen_song_window, comparison_lemma_bounds,
    lambda_ball_brownian, lambda_ball_stable_bounds, renewal_stable, spectral_prefactor,
    theorem2_bounds, torsion_ball_bounds, vogt_bound, ExtReal, StableParams,
};
use stable_torsion::error::Error as CoreError;
use stable_torsion::estimators::{
    default_grid, empirical_char_function, init_workers, jensen_identity_check, mc_eigenvalue,
    mc_resurrection_tail, mc_sup_torsion, mc_torsion, McConfig, Process,
};
use stable_torsion::geometry::ConvexDomain;
use stable_torsion::suite::{self, SuiteConfig, SuiteRow};
use stable_torsion::verify::{
    experiment_torsion_analogue, verify_chen_song, verify_comparison_lemma,
    verify_geometric_domination, verify_theorem1, verify_theorem2, BoundReport, Measured, Verdict,
    VerifyConfig,
};

#[derive(Parser)]
#[command(
    name = "stable-torsion",
    version,
    about = "Simulation and verification of spectral torsion bounds for symmetric stable processes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit every closed-form quantity for a (alpha, dim) pair.
    Bounds(CommonArgs),
    /// Run a named Monte Carlo estimator.
    Simulate(CommonArgs),
    /// Run a named inequality check and report its verdict.
    Verify(CommonArgs),
    /// Reproduce the full desk-scale verification grid as one report.
    Table(CommonArgs),
}

#[derive(Args, Default)]
struct CommonArgs {
    /// Experiment config file (flat key = value sections).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Section of the config file to use.
    #[arg(long)]
    experiment: Option<String>,
    /// Worker threads (default: STABLE_TORSION_WORKERS or all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output path (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long)]
    format: Option<String>,

    /// Estimator name for `simulate`: torsion, sup_torsion, eigenvalue,
    /// resurrection_tail, jensen, char_function.
    #[arg(long)]
    estimator: Option<String>,
    /// Check name for `verify`: theorem1, theorem2, chen_song,
    /// geometric_domination, comparison_lemma, torsion_analogue.
    #[arg(long)]
    check: Option<String>,
    /// Domain variant: interval, ball, box, slab, halfspace.
    #[arg(long)]
    domain: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    radius: Option<f64>,
    /// Slab half-width.
    #[arg(long)]
    half_width: Option<f64>,
    /// Box half-widths, comma separated.
    #[arg(long)]
    half_widths: Option<String>,
    /// Halfspace offset: the domain is {x : x_1 < offset}.
    #[arg(long)]
    offset: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    /// Survival-curve sample count for eigenvalue-based checks.
    #[arg(long)]
    eigen_n: Option<u64>,
    /// Brownian step size.
    #[arg(long)]
    h: Option<f64>,
    /// Subordinator grid step.
    #[arg(long)]
    h_s: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Start point, comma separated.
    #[arg(long)]
    x: Option<String>,
    /// Characteristic-function frequency, comma separated.
    #[arg(long)]
    xi: Option<String>,
    /// Process: w (Brownian), y (stable), z (subordinate killed).
    #[arg(long)]
    process: Option<String>,
    /// Interior lattice resolution for sup-torsion grids.
    #[arg(long)]
    grid_per_axis: Option<usize>,
    /// Dimension list for comparison-lemma style checks, comma separated.
    #[arg(long)]
    d_list: Option<String>,
    /// Reduced sample counts for smoke runs of `table`.
    #[arg(long)]
    quick: bool,
}

struct CliError {
    code: u8,
    msg: String,
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError {
            code: 1,
            msg: format!("config error: {e}"),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let code = match e {
            CoreError::Domain(_) | CoreError::Config(_) => 1,
            _ => 2,
        };
        CliError {
            code,
            msg: format!("error: {e}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError {
        code: 1,
        msg: msg.into(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let (name, args) = match &cli.command {
        Command::Bounds(a) => ("bounds", a),
        Command::Simulate(a) => ("simulate", a),
        Command::Verify(a) => ("verify", a),
        Command::Table(a) => ("table", a),
    };
    let params = resolve_params(args)?;
    init_workers(params.parse::<usize>("workers")?);
    let (rows, failed) = match name {
        "bounds" => (cmd_bounds(&params)?, false),
        "simulate" => (cmd_simulate(&params)?, false),
        "verify" => cmd_verify(&params)?,
        "table" => cmd_table(&params)?,
        _ => unreachable!(),
    };

    // the output path is where the report lives, not an experiment
    // parameter; keeping it out of the header keeps reports byte-identical
    // across destinations
    let resolved: Vec<(String, String)> = params
        .entries()
        .filter(|(k, _)| k.as_str() != "out")
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let format = params.parse_or("format", "csv".to_string())?;
    let report = match format.as_str() {
        "csv" => output::csv_report(&rows, &resolved),
        "json" => output::json_report(&rows, &resolved),
        other => return Err(usage(format!("unknown format '{other}' (csv or json)"))),
    };
    match params.get("out") {
        Some(path) => std::fs::write(path, report)
            .map_err(|e| usage(format!("cannot write '{path}': {e}")))?,
        None => print!("{report}"),
    }
    Ok(if failed { 3 } else { 0 })
}

/// Merge config-file values (lower precedence) with flags.
fn resolve_params(args: &CommonArgs) -> Result<Params, CliError> {
    let base = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read config '{}': {e}", path.display())))?;
            let parsed = config::parse(&text, &path.display().to_string())?;
            parsed.section(args.experiment.as_deref(), &path.display().to_string())?
        }
        None => BTreeMap::new(),
    };
    let mut p = Params::from_config(base);
    p.set_flag("workers", args.workers);
    p.set_flag("out", args.out.as_ref().map(|o| o.display().to_string()));
    p.set_flag("format", args.format.clone());
    p.set_flag("estimator", args.estimator.clone());
    p.set_flag("check", args.check.clone());
    p.set_flag("domain", args.domain.clone());
    p.set_flag("dim", args.dim);
    p.set_flag("radius", args.radius);
    p.set_flag("half_width", args.half_width);
    p.set_flag("half_widths", args.half_widths.clone());
    p.set_flag("offset", args.offset);
    p.set_flag("alpha", args.alpha);
    p.set_flag("n", args.n);
    p.set_flag("eigen_n", args.eigen_n);
    p.set_flag("h", args.h);
    p.set_flag("h_s", args.h_s);
    p.set_flag("seed", args.seed);
    p.set_flag("x", args.x.clone());
    p.set_flag("xi", args.xi.clone());
    p.set_flag("process", args.process.clone());
    p.set_flag("grid_per_axis", args.grid_per_axis);
    p.set_flag("d_list", args.d_list.clone());
    if args.quick {
        p.set_flag("quick", Some(true));
    }
    Ok(p)
}

fn build_domain(p: &Params) -> Result<ConvexDomain, CliError> {
    let variant: String = p.require("domain")?;
    let domain = match variant.as_str() {
        "interval" => ConvexDomain::interval(),
        "ball" => {
            let dim: usize = p.parse_or("dim", 1)?;
            let radius: f64 = p.parse_or("radius", 1.0)?;
            ConvexDomain::ball(vec![0.0; dim], radius)?
        }
        "box" => {
            let widths = p
                .parse_vec("half_widths")?
                .ok_or_else(|| usage("box domain needs --half-widths"))?;
            ConvexDomain::box_domain(widths)?
        }
        "slab" => {
            let dim: usize = p.parse_or("dim", 2)?;
            let hw: f64 = p.parse_or("half_width", 1.0)?;
            let mut normal = vec![0.0; dim];
            normal[0] = 1.0;
            ConvexDomain::slab(normal, hw)?
        }
        "halfspace" => {
            let dim: usize = p.parse_or("dim", 2)?;
            let offset: f64 = p.parse_or("offset", 0.0)?;
            let mut normal = vec![0.0; dim];
            normal[0] = 1.0;
            ConvexDomain::halfspace(normal, offset)?
        }
        other => {
            return Err(usage(format!(
                "unknown domain '{other}' (interval, ball, box, slab, halfspace)"
            )))
        }
    };
    Ok(domain)
}

fn default_start(domain: &ConvexDomain) -> Vec<f64> {
    match domain {
        ConvexDomain::Ball { center, .. } => center.clone(),
        ConvexDomain::Polytope { interior_point, .. } => interior_point.clone(),
        _ => vec![0.0; domain.dim()],
    }
}

fn start_point(p: &Params, domain: &ConvexDomain) -> Result<Vec<f64>, CliError> {
    Ok(p.parse_vec("x")?.unwrap_or_else(|| default_start(domain)))
}

fn process_from(p: &Params, alpha: f64) -> Result<Process, CliError> {
    let tag = p.parse_or("process", "y".to_string())?;
    Ok(match tag.as_str() {
        "w" => Process::Brownian,
        "y" => Process::Stable { alpha },
        "z" => Process::SubordinateKilled { alpha },
        other => return Err(usage(format!("unknown process '{other}' (w, y, z)"))),
    })
}

fn mc_config(p: &Params) -> Result<McConfig, CliError> {
    Ok(McConfig::new(
        p.parse_or("n", 100_000u64)?,
        p.parse_or("h", 1e-3)?,
        p.parse_or("h_s", 1e-3)?,
        p.require("seed")?,
    ))
}

fn verify_config(p: &Params) -> Result<VerifyConfig, CliError> {
    let mut cfg = VerifyConfig::new(p.require("seed")?);
    cfg.n = p.parse_or("n", cfg.n)?;
    cfg.eigen_n = p.parse_or("eigen_n", cfg.eigen_n)?;
    cfg.h = p.parse_or("h", cfg.h)?;
    cfg.h_s = p.parse_or("h_s", cfg.h_s)?;
    cfg.grid_per_axis = p.parse_or("grid_per_axis", cfg.grid_per_axis)?;
    Ok(cfg)
}

fn row(experiment: &str, quantity: impl Into<String>, value: f64) -> SuiteRow {
    SuiteRow {
        experiment: experiment.into(),
        alpha: None,
        dim: None,
        quantity: quantity.into(),
        value,
        stderr: None,
        lower: None,
        upper: None,
        verdict: None,
        seed: None,
        n: None,
        h: None,
        h_s: None,
    }
}

fn cmd_bounds(p: &Params) -> Result<Vec<SuiteRow>, CliError> {
    let alpha: f64 = p.require("alpha")?;
    let d: u32 = p.require("dim")?;
    let params = StableParams::new(alpha, d)?;
    let lambda_w = lambda_ball_brownian(d)?;
    let window = chen_song_window(lambda_w, alpha)?;
    let sup_w = 1.0 / (2.0 * d as f64);
    let t2 = theorem2_bounds(lambda_w.powf(alpha / 2.0), renewal_stable(alpha, sup_w)?)?;
    let tor = torsion_ball_bounds(params)?;
    let c_emp = bessel_window_constant(d.max(64))?;
    let lam_bounds = lambda_ball_stable_bounds(params, c_emp)?;
    let cmp = comparison_lemma_bounds(params, 0.0, 0.0)?;

    let mut rows = vec![
        row("bounds", "vogt", vogt_bound(d)),
        row("bounds", "renewal_v_at_1", renewal_stable(alpha, 1.0)?),
        row("bounds", "ball_torsion_sup", ball_torsion_sup(params)),
        row("bounds", "lambda_ball_brownian", lambda_w),
        row("bounds", "chen_song_lower", window.lower.as_f64()),
        row("bounds", "chen_song_upper", window.upper.as_f64()),
        row("bounds", "theorem1_lower_times_lambda", 1.0),
        row(
            "bounds",
            "theorem1_upper_times_lambda",
            spectral_prefactor(alpha) * vogt_bound(d).powf(alpha / 2.0),
        ),
        row("bounds", "theorem2_lower_unit_ball", t2.lower.as_f64()),
        row("bounds", "theorem2_upper_unit_ball", t2.upper.as_f64()),
        row("bounds", "torsion_ball_lower", tor.lower.as_f64()),
        row("bounds", "torsion_ball_upper", tor.upper.as_f64()),
        row("bounds", "lambda_ball_stable_lower", lam_bounds.lower.as_f64()),
        row("bounds", "lambda_ball_stable_upper", lam_bounds.upper.as_f64()),
        row("bounds", "bessel_window_constant", c_emp),
        row("bounds", "comparison_lemma_lower", cmp.lower.as_f64()),
    ];
    for r in &mut rows {
        r.alpha = Some(alpha);
        r.dim = Some(d);
    }
    Ok(rows)
}

fn cmd_simulate(p: &Params) -> Result<Vec<SuiteRow>, CliError> {
    let estimator: String = p.require("estimator")?;
    let alpha: f64 = p.parse_or("alpha", 1.0)?;
    let cfg = mc_config(p)?;
    let fill = |mut r: SuiteRow| -> SuiteRow {
        r.alpha = Some(alpha);
        r.seed = Some(cfg.seed);
        r.n = Some(cfg.n);
        r.h = Some(cfg.h);
        r.h_s = Some(cfg.h_s);
        r
    };
    match estimator.as_str() {
        "torsion" => {
            let domain = build_domain(p)?;
            let x = start_point(p, &domain)?;
            let process = process_from(p, alpha)?;
            let est = mc_torsion(&domain, &x, process, &cfg)?;
            let mut r = fill(row("simulate", "torsion_mean", est.mean));
            r.dim = Some(domain.dim() as u32);
            r.stderr = Some(est.stderr);
            r.lower = Some(ExtReal::Finite(est.ci95.0));
            r.upper = Some(ExtReal::Finite(est.ci95.1));
            Ok(vec![r])
        }
        "sup_torsion" => {
            let domain = build_domain(p)?;
            let process = process_from(p, alpha)?;
            let grid = match p.parse_vec("x")? {
                Some(x) => vec![x],
                None => default_grid(&domain, p.parse_or("grid_per_axis", 9)?)?,
            };
            let sup = mc_sup_torsion(&domain, &grid, process, &cfg)?;
            let mut rows = vec![];
            for (point, est) in grid.iter().zip(&sup.per_point) {
                let mut r = fill(row("simulate", format!("torsion_at_{point:?}"), est.mean));
                r.dim = Some(domain.dim() as u32);
                r.stderr = Some(est.stderr);
                rows.push(r);
            }
            let mut r = fill(row("simulate", "sup_torsion", sup.estimate.mean));
            r.dim = Some(domain.dim() as u32);
            r.stderr = Some(sup.estimate.stderr);
            rows.push(r);
            Ok(rows)
        }
        "eigenvalue" => {
            let domain = build_domain(p)?;
            let process = process_from(p, alpha)?;
            let fit = mc_eigenvalue(&domain, process, &cfg, None, None)?;
            let mut r = fill(row("simulate", "lambda_hat", fit.lambda_hat));
            r.dim = Some(domain.dim() as u32);
            r.stderr = Some(fit.stderr);
            r.lower = Some(ExtReal::Finite(fit.window.0));
            r.upper = Some(ExtReal::Finite(fit.window.1));
            Ok(vec![r])
        }
        "resurrection_tail" => {
            let domain = build_domain(p)?;
            let x = start_point(p, &domain)?;
            let tail = mc_resurrection_tail(&domain, &x, alpha, &cfg, 6)?;
            let mut rows = vec![];
            for pt in &tail.points {
                let mut r = fill(row("simulate", format!("p_n_gt_{}", pt.k), pt.prob));
                r.dim = Some(domain.dim() as u32);
                r.stderr = Some(pt.stderr);
                r.upper = Some(ExtReal::Finite(0.5f64.powi(pt.k as i32)));
                rows.push(r);
            }
            let mut r = fill(row("simulate", "mean_n", tail.mean_n));
            r.stderr = Some(tail.mean_n_stderr);
            rows.push(r);
            Ok(rows)
        }
        "jensen" => {
            let domain = build_domain(p)?;
            let x = start_point(p, &domain)?;
            let (lhs, rhs) = jensen_identity_check(&domain, &x, alpha, &cfg)?;
            let mut a = fill(row("simulate", "mean_tau_z", lhs.mean));
            a.stderr = Some(lhs.stderr);
            let mut b = fill(row("simulate", "mean_v_of_tau_w", rhs.mean));
            b.stderr = Some(rhs.stderr);
            let mut gap = fill(row("simulate", "identity_gap", (lhs.mean - rhs.mean).abs()));
            gap.upper = Some(ExtReal::Finite(2.0 * (lhs.stderr + rhs.stderr)));
            Ok(vec![a, b, gap])
        }
        "char_function" => {
            let dim: usize = p.parse_or("dim", 1)?;
            let xi = p
                .parse_vec("xi")?
                .ok_or_else(|| usage("char_function needs --xi"))?;
            let est = empirical_char_function(alpha, dim, &xi, cfg.n, cfg.seed)?;
            let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
            let target = (-norm.powf(alpha)).exp();
            let mut re = fill(row("simulate", "char_fn_re", est.re));
            re.dim = Some(dim as u32);
            re.stderr = Some(est.stderr_re);
            re.lower = Some(ExtReal::Finite(target));
            re.upper = Some(ExtReal::Finite(target));
            let mut im = fill(row("simulate", "char_fn_im", est.im));
            im.dim = Some(dim as u32);
            im.stderr = Some(est.stderr_im);
            Ok(vec![re, im])
        }
        other => Err(usage(format!(
            "unknown estimator '{other}' (torsion, sup_torsion, eigenvalue, \
             resurrection_tail, jensen, char_function)"
        ))),
    }
}

fn report_to_row(report: &BoundReport, experiment: &str, alpha: f64, dim: u32, cfg: &VerifyConfig) -> SuiteRow {
    SuiteRow {
        experiment: experiment.into(),
        alpha: Some(alpha),
        dim: Some(dim),
        quantity: report.check.clone(),
        value: report.measured.value(),
        stderr: match report.measured {
            Measured::Mc { stderr, .. } => Some(stderr),
            Measured::Exact(_) => None,
        },
        lower: Some(report.lower),
        upper: Some(report.upper),
        verdict: Some(report.verdict),
        seed: Some(cfg.seed),
        n: Some(cfg.n),
        h: Some(cfg.h),
        h_s: Some(cfg.h_s),
    }
}

fn cmd_verify(p: &Params) -> Result<(Vec<SuiteRow>, bool), CliError> {
    let check: String = p.require("check")?;
    let alpha: f64 = p.require("alpha")?;

    if check == "comparison_lemma" {
        let d_list = p
            .parse_u32_vec("d_list")?
            .unwrap_or_else(|| vec![4, 8, 16, 32, 64, 128]);
        let report = verify_comparison_lemma(alpha, &d_list)?;
        let cfg = VerifyConfig::new(0);
        let mut r = report_to_row(&report, "verify", alpha, 0, &cfg);
        r.seed = None;
        r.n = None;
        r.h = None;
        r.h_s = None;
        eprintln!("{}: {} ({})", report.check, report.verdict.as_str(), report.detail);
        return Ok((vec![r], report.verdict == Verdict::Fail));
    }
    if check == "torsion_analogue" {
        let d_list = p
            .parse_u32_vec("d_list")?
            .unwrap_or_else(|| vec![1, 2, 3, 5, 10, 50]);
        let rows = experiment_torsion_analogue(alpha, &d_list)?
            .into_iter()
            .map(|a| {
                let mut r = row("experiment", format!("v_over_exact_d{}", a.d), a.ratio);
                r.alpha = Some(alpha);
                r.dim = Some(a.d);
                r
            })
            .collect();
        return Ok((rows, false));
    }

    let cfg = verify_config(p)?;
    let domain = build_domain(p)?;
    let report = match check.as_str() {
        "theorem1" => verify_theorem1(&domain, alpha, &cfg)?,
        "theorem2" => verify_theorem2(&domain, alpha, &cfg)?,
        "chen_song" => verify_chen_song(&domain, alpha, &cfg)?,
        "geometric_domination" => {
            let x = start_point(p, &domain)?;
            verify_geometric_domination(&domain, &x, alpha, &cfg)?
        }
        other => {
            return Err(usage(format!(
                "unknown check '{other}' (theorem1, theorem2, chen_song, \
                 geometric_domination, comparison_lemma, torsion_analogue)"
            )))
        }
    };
    eprintln!("{}: {} ({})", report.check, report.verdict.as_str(), report.detail);
    let r = report_to_row(&report, "verify", alpha, domain.dim() as u32, &cfg);
    Ok((vec![r], report.verdict == Verdict::Fail))
}

fn cmd_table(p: &Params) -> Result<(Vec<SuiteRow>, bool), CliError> {
    let mut cfg = SuiteConfig::new(p.require("seed")?);
    cfg.quick = p.parse_or("quick", false)?;
    let mut rows = vec![];
    let mut failed = false;
    for result in suite::run_all(&cfg)? {
        eprintln!("{}", result.summary());
        failed = failed || !result.passed;
        rows.extend(result.rows);
    }
    rows.extend(suite::experiment_rows(&cfg)?);
    Ok((rows, failed))
}
