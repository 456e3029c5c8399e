//! Laplace exponents, potential measures, and renewal functions of
//! subordinators.

use std::sync::Arc;

use super::gamma::{gamma_fn, gamma_positive};
use super::quadrature::{integrate, integrate_tail};
use crate::error::{Error, Result};

const ABS_TOL: f64 = 1e-10;
const REL_TOL: f64 = 1e-8;

type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Description of a subordinator: either the closed-form stable Laplace
/// exponent `Phi(lambda) = lambda^rho`, or a killing-rate / drift / Levy
/// density triplet evaluated by quadrature.
#[derive(Clone)]
pub enum SubordinatorSpec {
    /// `Phi(lambda) = lambda^rho` with `rho` in `(0, 1]`. `rho = 1` is the
    /// degenerate unit-drift subordinator.
    StablePower { rho: f64 },
    /// General triplet with Levy density `t -> pi(t)` on `(0, inf)`.
    Triplet {
        killing_rate: f64,
        drift: f64,
        levy_density: DensityFn,
    },
}

impl SubordinatorSpec {
    pub fn stable(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Domain(format!("stable index must be in (0, 1], got {rho}")));
        }
        Ok(SubordinatorSpec::StablePower { rho })
    }

    /// Build a triplet, checking `k, d >= 0` and the integrability condition
    /// `int (1 ^ t) pi(t) dt < inf` numerically.
    pub fn triplet<F>(killing_rate: f64, drift: f64, levy_density: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(killing_rate >= 0.0) || !(drift >= 0.0) {
            return Err(Error::Domain(
                "killing rate and drift must be nonnegative".into(),
            ));
        }
        let small = integrate(|t| t * levy_density(t), 0.0, 1.0, ABS_TOL, REL_TOL)
            .map_err(|e| Error::Integration(format!("Levy integrability near 0: {e}")))?;
        let tail = integrate_tail(&levy_density, 1.0, ABS_TOL, REL_TOL)
            .map_err(|e| Error::Integration(format!("Levy integrability tail: {e}")))?;
        if !(small + tail).is_finite() {
            return Err(Error::Integration(
                "Levy measure fails int (1 ^ t) Pi(dt) < inf".into(),
            ));
        }
        Ok(SubordinatorSpec::Triplet {
            killing_rate,
            drift,
            levy_density: Arc::new(levy_density),
        })
    }

    /// The rho-stable subordinator written out as its explicit triplet
    /// `pi(t) = rho t^{-1-rho} / Gamma(1-rho)`, for cross-checking the
    /// quadrature route against the closed form.
    pub fn stable_as_triplet(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::Domain(format!("triplet form needs rho in (0, 1), got {rho}")));
        }
        let norm = rho / gamma_fn(1.0 - rho)?;
        Self::triplet(0.0, 0.0, move |t| norm * t.powf(-1.0 - rho))
    }

    pub fn killing_rate(&self) -> f64 {
        match self {
            SubordinatorSpec::StablePower { .. } => 0.0,
            SubordinatorSpec::Triplet { killing_rate, .. } => *killing_rate,
        }
    }
}

/// Laplace exponent `Phi(lambda) = k + d*lambda + int (1 - e^{-lambda t}) Pi(dt)`.
pub fn laplace_exponent(spec: &SubordinatorSpec, lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0) {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    match spec {
        SubordinatorSpec::StablePower { rho } => Ok(lambda.powf(*rho)),
        SubordinatorSpec::Triplet {
            killing_rate,
            drift,
            levy_density,
        } => {
            if lambda == 0.0 {
                return Ok(*killing_rate);
            }
            let near = integrate(
                |t| (-(-lambda * t).exp_m1()) * levy_density(t),
                0.0,
                1.0,
                ABS_TOL,
                REL_TOL,
            )?;
            let far = integrate_tail(
                |t| (-(-lambda * t).exp_m1()) * levy_density(t),
                1.0,
                ABS_TOL,
                REL_TOL,
            )?;
            Ok(killing_rate + drift * lambda + near + far)
        }
    }
}

/// Conjugate Laplace exponent `lambda / Phi(lambda)`.
pub fn conjugate_exponent(spec: &SubordinatorSpec, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    let phi = laplace_exponent(spec, lambda)?;
    if phi == 0.0 {
        return Err(Error::Domain("conjugate exponent undefined: Phi(lambda) = 0".into()));
    }
    Ok(lambda / phi)
}

/// Renewal function of the (alpha/2)-stable subordinator:
/// `V(x) = 2 / (alpha Gamma(alpha/2)) x^{alpha/2}`.
pub fn renewal_stable(alpha: f64, x: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(x >= 0.0) {
        return Err(Error::Domain(format!("renewal function needs x >= 0, got {x}")));
    }
    Ok(2.0 / (alpha * gamma_positive(alpha / 2.0)) * x.powf(alpha / 2.0))
}

/// Density of the potential measure of the (alpha/2)-stable subordinator:
/// `v(t) = t^{alpha/2 - 1} / Gamma(alpha/2)`.
pub fn potential_density_stable(alpha: f64, t: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("potential density needs t > 0, got {t}")));
    }
    Ok(t.powf(alpha / 2.0 - 1.0) / gamma_positive(alpha / 2.0))
}

/// Relative discrepancy between the quadrature of the Laplace transform of
/// the potential density and the closed form `1/Phi(lambda) = lambda^{-alpha/2}`.
pub fn laplace_link_check(alpha: f64, lambda: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    let near = integrate(
        |x| (-lambda * x).exp() * potential_density_stable(alpha, x).unwrap_or(0.0),
        0.0,
        1.0,
        1e-12,
        1e-10,
    )?;
    let far = integrate_tail(
        |x| (-lambda * x).exp() * potential_density_stable(alpha, x).unwrap_or(0.0),
        1.0,
        1e-12,
        1e-10,
    )?;
    let reference = lambda.powf(-alpha / 2.0);
    Ok(((near + far) - reference).abs() / reference)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 2.0) {
        return Err(Error::Domain(format!("alpha must be in (0, 2], got {alpha}")));
    }
    Ok(())
}

/// Renewal function of a subordinator: distribution function of the
/// potential measure, split into an atom at zero and a density.
#[derive(Clone)]
pub struct RenewalFunction {
    pub atom: f64,
    value: DensityFn,
    density: DensityFn,
}

impl RenewalFunction {
    pub fn new<V, D>(atom: f64, value: V, density: D) -> Self
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        RenewalFunction {
            atom,
            value: Arc::new(value),
            density: Arc::new(density),
        }
    }

    /// Renewal function of the (alpha/2)-stable subordinator (atomless).
    pub fn stable(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        let scale = 2.0 / (alpha * gamma_positive(alpha / 2.0));
        let dens_scale = 1.0 / gamma_positive(alpha / 2.0);
        let half = alpha / 2.0;
        Ok(RenewalFunction::new(
            0.0,
            move |x: f64| scale * x.powf(half),
            move |t: f64| dens_scale * t.powf(half - 1.0),
        ))
    }

    pub fn value(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else if x == 0.0 {
            self.atom
        } else {
            self.atom + (self.value)(x)
        }
    }

    pub fn density(&self, t: f64) -> f64 {
        (self.density)(t)
    }

    /// Grid checks: `V(0) = atom`, `V` nondecreasing, `v` nonincreasing, and
    /// concavity of `V` when the subordinator is special with no atom.
    pub fn validate_on_grid(&self, grid: &[f64], special_no_atom: bool) -> Result<()> {
        if (self.value(0.0) - self.atom).abs() > 1e-12 {
            return Err(Error::Numeric("V(0) != atom".into()));
        }
        for w in grid.windows(2) {
            if self.value(w[1]) < self.value(w[0]) - 1e-12 {
                return Err(Error::Numeric(format!("V decreasing between {} and {}", w[0], w[1])));
            }
            if w[0] > 0.0 && self.density(w[1]) > self.density(w[0]) + 1e-12 {
                return Err(Error::Numeric(format!("v increasing between {} and {}", w[0], w[1])));
            }
        }
        if special_no_atom && self.atom == 0.0 {
            for w in grid.windows(3) {
                // second divided difference must be <= 0 for concavity
                let d01 = (self.value(w[1]) - self.value(w[0])) / (w[1] - w[0]);
                let d12 = (self.value(w[2]) - self.value(w[1])) / (w[2] - w[1]);
                if d12 > d01 + 1e-9 {
                    return Err(Error::Numeric(format!("V not concave near {}", w[1])));
                }
            }
        }
        Ok(())
    }
}
