//! Exit-time engine for the subordinate process built by repeatedly
//! resurrecting the subordinate killed process.
//!
//! One run interleaves three exact ingredients:
//!   1. a Brownian exit from the current interior position (tau_{n+1}),
//!   2. a subordinator first passage over that exit time (sigma_{n+1}),
//!   3. the Brownian position at the passage value, obtained from the exit
//!      point by an exact Gaussian displacement with per-coordinate variance
//!      twice the overshoot (the post-exit increment is independent).
//!
//! The run stops the first time the displaced position lands outside the
//! domain; the count N of completed stages is then the resurrection count
//! plus one, and the exit time of the subordinate process is sigma_N.

use serde::Serialize;

use super::brownian::{brownian_exit_with_budget, DEFAULT_STEP_BUDGET};
use super::rng::{fill_gaussian, RngStream};
use super::stable::subordinator_first_passage;
use crate::error::{Error, Result};
use crate::geometry::ConvexDomain;

pub const DEFAULT_RESURRECTION_CAP: u32 = 64;

/// One sampled realization of the resurrection construction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResurrectionRecord {
    /// Brownian exit times tau_1 <= ... <= tau_N (process time of W).
    pub tau_seq: Vec<f64>,
    /// Subordinator passage times sigma_1 <= ... <= sigma_N.
    pub sigma_seq: Vec<f64>,
    /// Subordinator values S_{sigma_1} <= ... <= S_{sigma_N}.
    pub s_at_sigma: Vec<f64>,
    /// Number of completed stages; 0 when the start point is outside.
    pub n: u32,
    /// Exit time of the subordinate process, sigma_N (0 when n = 0).
    pub tau_y: f64,
    /// Exit time of the subordinate killed process, sigma_1 (0 when n = 0).
    pub tau_z: f64,
}

impl ResurrectionRecord {
    /// Check the pathwise invariants: monotone sequences, the interlacing
    /// tau_n <= S_{sigma_n} <= tau_{n+1}, tau_y = sigma_N, and tau_z <= tau_y.
    pub fn validate(&self) -> Result<()> {
        let n = self.n as usize;
        if self.tau_seq.len() != n || self.sigma_seq.len() != n || self.s_at_sigma.len() != n {
            return Err(Error::Numeric("record sequence lengths disagree with N".into()));
        }
        if n == 0 {
            if self.tau_y != 0.0 || self.tau_z != 0.0 {
                return Err(Error::Numeric("outside start must give tau_y = tau_z = 0".into()));
            }
            return Ok(());
        }
        for i in 0..n {
            if self.tau_seq[i] > self.s_at_sigma[i] {
                return Err(Error::Numeric(format!(
                    "interlacing violated: tau_{} = {} > S_sigma_{} = {}",
                    i + 1,
                    self.tau_seq[i],
                    i + 1,
                    self.s_at_sigma[i]
                )));
            }
            if i + 1 < n && self.s_at_sigma[i] > self.tau_seq[i + 1] {
                return Err(Error::Numeric(format!(
                    "interlacing violated: S_sigma_{} = {} > tau_{} = {}",
                    i + 1,
                    self.s_at_sigma[i],
                    i + 2,
                    self.tau_seq[i + 1]
                )));
            }
        }
        for w in self.sigma_seq.windows(2) {
            if w[1] < w[0] {
                return Err(Error::Numeric("sigma sequence must be nondecreasing".into()));
            }
        }
        if self.tau_y != *self.sigma_seq.last().unwrap() {
            return Err(Error::Numeric("tau_y must equal the last sigma".into()));
        }
        if self.tau_z != self.sigma_seq[0] {
            return Err(Error::Numeric("tau_z must equal sigma_1".into()));
        }
        if self.tau_z > self.tau_y {
            return Err(Error::Numeric("tau_z must not exceed tau_y".into()));
        }
        Ok(())
    }
}

/// Run the resurrection construction from `x` with Brownian step `h` and
/// subordinator grid `h_s`. `rho` is the subordinator index (alpha/2).
///
/// A start point outside the domain returns the trivial record with N = 0.
pub fn resurrection_run(
    rng: &mut RngStream,
    domain: &ConvexDomain,
    x: &[f64],
    rho: f64,
    h: f64,
    h_s: f64,
) -> Result<ResurrectionRecord> {
    resurrection_run_capped(rng, domain, x, rho, h, h_s, DEFAULT_RESURRECTION_CAP)
}

pub fn resurrection_run_capped(
    rng: &mut RngStream,
    domain: &ConvexDomain,
    x: &[f64],
    rho: f64,
    h: f64,
    h_s: f64,
    cap: u32,
) -> Result<ResurrectionRecord> {
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::Domain(format!("rho must be in (0, 1], got {rho}")));
    }
    if x.len() != domain.dim() {
        return Err(Error::Domain("start point dimension mismatch".into()));
    }
    if !domain.contains_unchecked(x) {
        return Ok(ResurrectionRecord {
            tau_seq: vec![],
            sigma_seq: vec![],
            s_at_sigma: vec![],
            n: 0,
            tau_y: 0.0,
            tau_z: 0.0,
        });
    }

    let d = x.len();
    let mut record = ResurrectionRecord {
        tau_seq: Vec::with_capacity(2),
        sigma_seq: Vec::with_capacity(2),
        s_at_sigma: Vec::with_capacity(2),
        n: 0,
        tau_y: 0.0,
        tau_z: 0.0,
    };
    let mut pos = x.to_vec();
    let mut t_s = 0.0; // subordinator time sigma_n
    let mut s_val = 0.0; // subordinator value S_{sigma_n}; also W's clock at stage start
    let mut displacement = vec![0.0; d];

    for _ in 0..cap {
        // W runs from its clock s_val at `pos` until the next exit
        let exit = brownian_exit_with_budget(rng, domain, &pos, h, DEFAULT_STEP_BUDGET)?;
        let tau = s_val + exit.duration;

        // S continues from (t_s, s_val) until it reaches tau
        let fp = subordinator_first_passage(rng, rho, exit.duration, h_s)?;
        t_s += fp.sigma;
        s_val += fp.value;
        debug_assert!(s_val >= tau - 1e-9 * tau.max(1.0));

        record.tau_seq.push(tau);
        record.sigma_seq.push(t_s);
        record.s_at_sigma.push(s_val);
        record.n += 1;

        // W at time S_{sigma_n}: exact Gaussian bridge over the overshoot
        fill_gaussian(rng, 2.0 * (s_val - tau).max(0.0), &mut displacement);
        for i in 0..d {
            pos[i] = exit.exit_point[i] + displacement[i];
        }

        // Landing test with a 1e-12 margin: exit points sit on the boundary
        // only up to rounding, and a zero-overshoot displacement (rho = 1)
        // must count as outside the open domain.
        if domain.signed_distance(&pos) <= 1e-12 {
            record.tau_y = t_s;
            record.tau_z = record.sigma_seq[0];
            record.validate()?;
            return Ok(record);
        }
    }
    Err(Error::ResurrectionCap { cap })
}

/// Exit time of the subordinate killed process: one Brownian exit followed
/// by one subordinator passage. Under coupled draws this equals the `tau_z`
/// field of a [`resurrection_run`] with the same stream.
pub fn subordinate_killed_exit(
    rng: &mut RngStream,
    domain: &ConvexDomain,
    x: &[f64],
    rho: f64,
    h: f64,
    h_s: f64,
) -> Result<f64> {
    if !domain.contains(x)? {
        return Err(Error::Domain("subordinate_killed_exit requires an interior start".into()));
    }
    let exit = brownian_exit_with_budget(rng, domain, x, h, DEFAULT_STEP_BUDGET)?;
    let fp = subordinator_first_passage(rng, rho, exit.duration, h_s)?;
    Ok(fp.sigma)
}
