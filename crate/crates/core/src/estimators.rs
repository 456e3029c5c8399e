//! Monte Carlo estimators with uncertainty: torsion functions (mean exit
//! times), principal eigenvalues from survival-curve regression,
//! resurrection-count tails, the renewal-identity check, and empirical
//! characteristic functions.
//!
//! Samples fan out over fixed-size chunks; chunk `i` owns the RNG stream
//! `stream_base + i` and partial sums are reduced in chunk order, so results
//! are bit-identical for any worker count. Distinct estimator kinds use
//! disjoint stream-id blocks, so different estimators never share draws even
//! under the same seed.

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::renewal_stable;
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;
use crate::stochastic::{
    brownian_exit, fill_gaussian, resurrection_run, sample_stable_subordinator_increment,
    subordinate_killed_exit, subordinator_first_passage, RngStream,
};

const CHUNK: u64 = 4096;

// Stream-id blocks per estimator kind (top bits of the stream id).
const STREAM_TORSION: u64 = 0 << 40;
const STREAM_EIGEN: u64 = 1 << 40;
const STREAM_TAIL: u64 = 2 << 40;
const STREAM_JENSEN: u64 = 3 << 40;
const STREAM_CHAR: u64 = 4 << 40;
const STREAM_SUP: u64 = 5 << 40;
const STREAM_POINT_SHIFT: u64 = 20;

/// Which exit-time law an estimator samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Process {
    /// Speed-2 Brownian motion.
    Brownian,
    /// Symmetric stable process of index `alpha`, via resurrection runs.
    Stable { alpha: f64 },
    /// Subordinate killed Brownian motion of index `alpha`.
    SubordinateKilled { alpha: f64 },
}

impl Process {
    pub fn label(&self) -> String {
        match self {
            Process::Brownian => "w".into(),
            Process::Stable { alpha } => format!("y(alpha={alpha})"),
            Process::SubordinateKilled { alpha } => format!("z(alpha={alpha})"),
        }
    }

    fn check(&self) -> Result<()> {
        let alpha = match self {
            Process::Brownian => return Ok(()),
            Process::Stable { alpha } | Process::SubordinateKilled { alpha } => *alpha,
        };
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!("alpha must be in (0, 2], got {alpha}")));
        }
        Ok(())
    }

    /// One exit-time sample from `x`.
    fn sample_exit(
        &self,
        rng: &mut RngStream,
        domain: &ConvexDomain,
        x: &[f64],
        h: f64,
        h_s: f64,
    ) -> Result<f64> {
        match self {
            Process::Brownian => Ok(brownian_exit(rng, domain, x, h)?.duration),
            Process::Stable { alpha } => {
                Ok(resurrection_run(rng, domain, x, alpha / 2.0, h, h_s)?.tau_y)
            }
            Process::SubordinateKilled { alpha } => {
                subordinate_killed_exit(rng, domain, x, alpha / 2.0, h, h_s)
            }
        }
    }
}

/// Sampler parameters carried by every estimate for reproducibility.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SamplerParams {
    pub process: String,
    pub n: u64,
    pub h: f64,
    pub h_s: f64,
    pub seed: u64,
}

/// Monte Carlo estimate with standard error and 95% confidence interval.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
    pub ci95: (f64, f64),
    pub params: SamplerParams,
    /// Set when the running mean looks non-convergent (heavy tail), which
    /// happens when the torsion function is infinite.
    pub warning: Option<String>,
}

impl McEstimate {
    fn from_stats(stats: ChunkStats, params: SamplerParams) -> Self {
        let n = stats.count;
        let mean = stats.sum / n as f64;
        let var = (stats.sumsq / n as f64 - mean * mean).max(0.0);
        let stderr = (var / n as f64).sqrt();
        let warning = if n >= 1000 && stats.max > 0.2 * stats.sum && stats.sum > 0.0 {
            Some(format!(
                "running mean dominated by a single sample ({} of the total mass): \
                 infinite mean suspected",
                stats.max / stats.sum
            ))
        } else {
            None
        };
        McEstimate {
            mean,
            stderr,
            n,
            ci95: (mean - 1.96 * stderr, mean + 1.96 * stderr),
            params,
            warning,
        }
    }
}

/// Monte Carlo configuration shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McConfig {
    pub n: u64,
    pub h: f64,
    pub h_s: f64,
    pub seed: u64,
}

impl McConfig {
    pub fn new(n: u64, h: f64, h_s: f64, seed: u64) -> Self {
        McConfig { n, h, h_s, seed }
    }

    fn validate(&self, min_n: u64) -> Result<()> {
        if self.n < min_n {
            return Err(Error::Config(format!("n must be >= {min_n}, got {}", self.n)));
        }
        if !(self.h > 0.0) || !(self.h_s > 0.0) {
            return Err(Error::Config("step sizes must be positive".into()));
        }
        Ok(())
    }

    fn params(&self, process: &Process) -> SamplerParams {
        SamplerParams {
            process: process.label(),
            n: self.n,
            h: self.h,
            h_s: self.h_s,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkStats {
    sum: f64,
    sumsq: f64,
    max: f64,
    count: u64,
}

impl ChunkStats {
    fn push(&mut self, v: f64) {
        self.sum += v;
        self.sumsq += v * v;
        self.max = self.max.max(v);
        self.count += 1;
    }

    fn merge(mut self, other: ChunkStats) -> ChunkStats {
        self.sum += other.sum;
        self.sumsq += other.sumsq;
        self.max = self.max.max(other.max);
        self.count += other.count;
        self
    }
}

/// Fan `n` scalar samples out over chunked streams and reduce in chunk order.
fn parallel_stats<F>(n: u64, seed: u64, stream_base: u64, sample: F) -> Result<ChunkStats>
where
    F: Fn(&mut RngStream) -> Result<f64> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let partials: Result<Vec<ChunkStats>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(seed, stream_base + c);
            let count = CHUNK.min(n - c * CHUNK);
            let mut stats = ChunkStats::default();
            for _ in 0..count {
                stats.push(sample(&mut rng)?);
            }
            Ok(stats)
        })
        .collect();
    Ok(partials?.into_iter().fold(ChunkStats::default(), ChunkStats::merge))
}

/// Same fan-out, collecting every sample (used by the survival regression).
fn parallel_samples<F>(n: u64, seed: u64, stream_base: u64, sample: F) -> Result<Vec<f64>>
where
    F: Fn(&mut RngStream) -> Result<f64> + Sync,
{
    let chunks = n.div_ceil(CHUNK);
    let nested: Result<Vec<Vec<f64>>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(seed, stream_base + c);
            let count = CHUNK.min(n - c * CHUNK);
            (0..count).map(|_| sample(&mut rng)).collect()
        })
        .collect();
    Ok(nested?.into_iter().flatten().collect())
}

/// Mean exit time (torsion function value) at `x` for the chosen process.
pub fn mc_torsion(
    domain: &ConvexDomain,
    x: &[f64],
    process: Process,
    cfg: &McConfig,
) -> Result<McEstimate> {
    mc_torsion_at(domain, x, process, cfg, STREAM_TORSION)
}

fn mc_torsion_at(
    domain: &ConvexDomain,
    x: &[f64],
    process: Process,
    cfg: &McConfig,
    stream_base: u64,
) -> Result<McEstimate> {
    process.check()?;
    cfg.validate(100)?;
    if !domain.contains(x)? {
        return Err(Error::Domain("mc_torsion requires an interior start point".into()));
    }
    let stats = parallel_stats(cfg.n, cfg.seed, stream_base, |rng| {
        process.sample_exit(rng, domain, x, cfg.h, cfg.h_s)
    })?;
    Ok(McEstimate::from_stats(stats, cfg.params(&process)))
}

/// Estimate of the torsion sup over a grid of interior points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupTorsion {
    /// Estimate at the maximizing grid point.
    pub estimate: McEstimate,
    /// The maximizing point.
    pub argmax: Vec<f64>,
    /// Every per-point estimate, in grid order.
    pub per_point: Vec<McEstimate>,
}

/// Maximum of `mc_torsion` over the grid, reported with the maximizer's
/// standard error.
pub fn mc_sup_torsion(
    domain: &ConvexDomain,
    grid: &[Vec<f64>],
    process: Process,
    cfg: &McConfig,
) -> Result<SupTorsion> {
    if grid.is_empty() {
        return Err(Error::Config("sup-torsion grid must be nonempty".into()));
    }
    if grid.len() >= (1 << STREAM_POINT_SHIFT) as usize {
        return Err(Error::Config("sup-torsion grid too large".into()));
    }
    let mut per_point = Vec::with_capacity(grid.len());
    for (i, x) in grid.iter().enumerate() {
        let base = STREAM_SUP + ((i as u64) << STREAM_POINT_SHIFT);
        per_point.push(mc_torsion_at(domain, x, process, cfg, base)?);
    }
    let best = per_point
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.mean.total_cmp(&b.1.mean))
        .map(|(i, _)| i)
        .unwrap();
    Ok(SupTorsion {
        estimate: per_point[best].clone(),
        argmax: grid[best].clone(),
        per_point,
    })
}

/// Default interior grid: the center for balls, a lattice along the normal
/// axis for slabs, a product lattice for boxes.
pub fn default_grid(domain: &ConvexDomain, per_axis: usize) -> Result<Vec<Vec<f64>>> {
    if per_axis == 0 {
        return Err(Error::Config("per_axis must be >= 1".into()));
    }
    let lattice = |w: f64| -> Vec<f64> {
        // per_axis points strictly inside (-w, w)
        (0..per_axis)
            .map(|k| -w + 2.0 * w * (k as f64 + 1.0) / (per_axis as f64 + 1.0))
            .collect()
    };
    match domain {
        ConvexDomain::Ball { center, .. } => Ok(vec![center.clone()]),
        ConvexDomain::Slab { normal, half_width } => Ok(lattice(*half_width)
            .into_iter()
            .map(|c| normal.iter().map(|ni| c * ni).collect())
            .collect()),
        ConvexDomain::Box { half_widths } => {
            let axes: Vec<Vec<f64>> = half_widths.iter().map(|&w| lattice(w)).collect();
            let mut points: Vec<Vec<f64>> = vec![vec![]];
            for axis in &axes {
                let mut next = Vec::with_capacity(points.len() * axis.len());
                for p in &points {
                    for &v in axis {
                        let mut q = p.clone();
                        q.push(v);
                        next.push(q);
                    }
                }
                points = next;
                if points.len() > 10_000 {
                    return Err(Error::Config("default grid would exceed 10000 points".into()));
                }
            }
            Ok(points)
        }
        _ => Err(Error::Config(
            "no default grid for this domain variant; supply the grid explicitly".into(),
        )),
    }
}

/// Principal-eigenvalue fit from the exit-time survival curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenFit {
    pub lambda_hat: f64,
    /// OLS standard error of the fitted slope.
    pub stderr: f64,
    /// Fit window (t1, t2) where the empirical survival crossed the
    /// configured range.
    pub window: (f64, f64),
    /// (t, empirical survival) at the regression points.
    pub curve: Vec<(f64, f64)>,
    /// Regression residuals of -log survival.
    pub residuals: Vec<f64>,
    pub n: u64,
    pub params: SamplerParams,
}

/// Default empirical-survival window for the slope fit. Below the principal
/// mode's mixing time higher modes bias the slope; beyond survival 1e-3 the
/// tail is too noisy at desk-scale n.
pub const SURVIVAL_WINDOW: (f64, f64) = (1e-3, 1e-1);

/// Estimate the exponential decay rate of `P(tau > t)` by least squares on
/// `-log` of the empirical survival over the configured window.
///
/// `t_grid = None` picks 12 quantile-based points inside the window.
pub fn mc_eigenvalue(
    domain: &ConvexDomain,
    process: Process,
    cfg: &McConfig,
    t_grid: Option<&[f64]>,
    window: Option<(f64, f64)>,
) -> Result<EigenFit> {
    process.check()?;
    cfg.validate(1000)?;
    if !domain.is_bounded() {
        return Err(Error::Config(
            "eigenvalue regression needs a bounded domain (tail decay estimation)".into(),
        ));
    }
    let x0 = eigen_start_point(domain);
    if !domain.contains(&x0)? {
        return Err(Error::Domain("eigenvalue start point is not interior".into()));
    }
    let (lo, hi) = window.unwrap_or(SURVIVAL_WINDOW);
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(Error::Config(format!("bad survival window ({lo}, {hi})")));
    }

    let mut samples = parallel_samples(cfg.n, cfg.seed, STREAM_EIGEN, |rng| {
        process.sample_exit(rng, domain, &x0, cfg.h, cfg.h_s)
    })?;
    samples.sort_by(f64::total_cmp);
    let n = samples.len();

    // regression points: either the caller's grid filtered to the window, or
    // quantile-spaced levels
    let survival_at = |t: f64| -> f64 {
        let idx = samples.partition_point(|&v| v <= t);
        (n - idx) as f64 / n as f64
    };
    let points: Vec<(f64, f64)> = match t_grid {
        Some(grid) => {
            if grid.len() < 4 || grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(Error::Config("t_grid must be increasing with >= 4 points".into()));
            }
            grid.iter()
                .map(|&t| (t, survival_at(t)))
                .filter(|&(_, s)| s >= lo && s <= hi)
                .collect()
        }
        None => {
            let k = 12;
            (0..k)
                .map(|i| {
                    let s = hi * (lo / hi).powf(i as f64 / (k - 1) as f64);
                    let rank = ((1.0 - s) * n as f64).floor() as usize;
                    let t = samples[rank.min(n - 1)];
                    (t, survival_at(t))
                })
                .collect()
        }
    };
    let survivors_at_end = (survival_at(points.last().map(|p| p.0).unwrap_or(0.0))
        * n as f64)
        .round() as u64;
    if points.len() < 4 {
        return Err(Error::InsufficientTail {
            survivors: survivors_at_end,
            needed: 50,
        });
    }
    if survivors_at_end < 50 {
        return Err(Error::InsufficientTail {
            survivors: survivors_at_end,
            needed: 50,
        });
    }

    // OLS of -log survival against t
    let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().map(|p| -p.1.ln()).collect();
    let m = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / m;
    let ym = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
    if sxx == 0.0 {
        return Err(Error::Numeric("degenerate regression window".into()));
    }
    let slope = sxy / sxx;
    let intercept = ym - slope * xm;
    let residuals: Vec<f64> = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| y - (intercept + slope * x))
        .collect();
    let dof = (m - 2.0).max(1.0);
    let s2 = residuals.iter().map(|r| r * r).sum::<f64>() / dof;
    let stderr = (s2 / sxx).sqrt();
    if !(slope > 0.0) {
        return Err(Error::Numeric(format!("nonpositive decay-rate estimate {slope}")));
    }
    Ok(EigenFit {
        lambda_hat: slope,
        stderr,
        window: (xs[0], *xs.last().unwrap()),
        curve: points,
        residuals,
        n: cfg.n,
        params: cfg.params(&process),
    })
}

/// Start point for eigenvalue runs: the natural center of the domain.
fn eigen_start_point(domain: &ConvexDomain) -> Vec<f64> {
    match domain {
        ConvexDomain::Ball { center, .. } => center.clone(),
        _ => vec![0.0; domain.dim()],
    }
}

/// Empirical tail of the resurrection count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailPoint {
    pub k: u32,
    /// Empirical `P(N > k)`.
    pub prob: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResurrectionTail {
    pub points: Vec<TailPoint>,
    pub mean_n: f64,
    pub mean_n_stderr: f64,
    pub params: SamplerParams,
}

/// Sample resurrection counts and report the empirical tail `P(N > k)` for
/// `k = 1..=k_max`, plus the mean count.
pub fn mc_resurrection_tail(
    domain: &ConvexDomain,
    x: &[f64],
    alpha: f64,
    cfg: &McConfig,
    k_max: u32,
) -> Result<ResurrectionTail> {
    let process = Process::Stable { alpha };
    process.check()?;
    cfg.validate(100)?;
    if !domain.contains(x)? {
        return Err(Error::Domain("mc_resurrection_tail requires an interior start".into()));
    }
    let stats = parallel_samples(cfg.n, cfg.seed, STREAM_TAIL, |rng| {
        Ok(resurrection_run(rng, domain, x, alpha / 2.0, cfg.h, cfg.h_s)?.n as f64)
    })?;
    let n = stats.len() as f64;
    let mean_n = stats.iter().sum::<f64>() / n;
    let var = stats.iter().map(|v| (v - mean_n) * (v - mean_n)).sum::<f64>() / n;
    let points = (1..=k_max)
        .map(|k| {
            let count = stats.iter().filter(|&&v| v > k as f64).count() as f64;
            let p = count / n;
            TailPoint {
                k,
                prob: p,
                stderr: (p * (1.0 - p) / n).sqrt(),
            }
        })
        .collect();
    Ok(ResurrectionTail {
        points,
        mean_n,
        mean_n_stderr: (var / n).sqrt(),
        params: cfg.params(&process),
    })
}

/// Check of the renewal identity `E[tau_Z] = E[V(tau_W)]` with coupled
/// Brownian exits: the left side passes the subordinator over the same exit
/// time that feeds the right side.
pub fn jensen_identity_check(
    domain: &ConvexDomain,
    x: &[f64],
    alpha: f64,
    cfg: &McConfig,
) -> Result<(McEstimate, McEstimate)> {
    let process = Process::SubordinateKilled { alpha };
    process.check()?;
    cfg.validate(100)?;
    if !domain.contains(x)? {
        return Err(Error::Domain("jensen_identity_check requires an interior start".into()));
    }
    let rho = alpha / 2.0;
    let chunks = cfg.n.div_ceil(CHUNK);
    let partials: Result<Vec<(ChunkStats, ChunkStats)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(cfg.seed, STREAM_JENSEN + c);
            let count = CHUNK.min(cfg.n - c * CHUNK);
            let mut lhs = ChunkStats::default();
            let mut rhs = ChunkStats::default();
            for _ in 0..count {
                let exit = brownian_exit(&mut rng, domain, x, cfg.h)?;
                rhs.push(renewal_stable(alpha, exit.duration)?);
                let fp = subordinator_first_passage(&mut rng, rho, exit.duration, cfg.h_s)?;
                lhs.push(fp.sigma);
            }
            Ok((lhs, rhs))
        })
        .collect();
    let (lhs, rhs) = partials?.into_iter().fold(
        (ChunkStats::default(), ChunkStats::default()),
        |(l, r), (cl, cr)| (l.merge(cl), r.merge(cr)),
    );
    Ok((
        McEstimate::from_stats(lhs, cfg.params(&process)),
        McEstimate::from_stats(rhs, cfg.params(&Process::Brownian)),
    ))
}

/// Empirical characteristic function estimate at one frequency.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharFnEstimate {
    pub re: f64,
    pub im: f64,
    pub stderr_re: f64,
    pub stderr_im: f64,
    pub n: u64,
}

/// Mean of `exp(i xi . Y_1)` over draws of `Y_1`, one full subordinate
/// increment: a Gaussian with per-coordinate variance `2 S_1`.
pub fn empirical_char_function(
    alpha: f64,
    d: usize,
    xi: &[f64],
    n: u64,
    seed: u64,
) -> Result<CharFnEstimate> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!("alpha must be in (0, 2], got {alpha}")));
    }
    if xi.len() != d {
        return Err(Error::Domain("xi dimension mismatch".into()));
    }
    if n < 10_000 {
        return Err(Error::Config("characteristic-function estimate needs n >= 10^4".into()));
    }
    let rho = alpha / 2.0;
    let chunks = n.div_ceil(CHUNK);
    let partials: Vec<(ChunkStats, ChunkStats)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = RngStream::new(seed, STREAM_CHAR + c);
            let count = CHUNK.min(n - c * CHUNK);
            let mut re = ChunkStats::default();
            let mut im = ChunkStats::default();
            let mut y = vec![0.0; d];
            for _ in 0..count {
                let s1 = if rho == 1.0 {
                    1.0
                } else {
                    sample_stable_subordinator_increment(&mut rng, rho, 1.0)
                };
                fill_gaussian(&mut rng, 2.0 * s1, &mut y);
                let phase: f64 = xi.iter().zip(&y).map(|(a, b)| a * b).sum();
                re.push(phase.cos());
                im.push(phase.sin());
            }
            (re, im)
        })
        .collect();
    let (re, im) = partials.into_iter().fold(
        (ChunkStats::default(), ChunkStats::default()),
        |(r, i), (cr, ci)| (r.merge(cr), i.merge(ci)),
    );
    let nf = n as f64;
    let re_mean = re.sum / nf;
    let im_mean = im.sum / nf;
    Ok(CharFnEstimate {
        re: re_mean,
        im: im_mean,
        stderr_re: (((re.sumsq / nf - re_mean * re_mean).max(0.0)) / nf).sqrt(),
        stderr_im: (((im.sumsq / nf - im_mean * im_mean).max(0.0)) / nf).sqrt(),
        n,
    })
}

/// Configure the global worker pool. `None` reads STABLE_TORSION_WORKERS,
/// falling back to the machine's core count. Call once at startup; later
/// calls are ignored.
pub fn init_workers(workers: Option<usize>) {
    let workers = workers.or_else(|| {
        std::env::var("STABLE_TORSION_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(w) = workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(w).build_global();
    }
}
