//! Bessel functions of the first kind of real order and their first zeros.
//!
//! `J_nu(x)` is evaluated from the Schlaefli integral representation
//!
//! ```text
//! J_nu(x) = (1/pi) * int_0^pi cos(nu*tau - x*sin tau) d tau
//!         - (sin(nu*pi)/pi) * int_0^inf exp(-x*sinh t - nu*t) dt
//! ```
//!
//! which is numerically benign for the moderate orders needed here (nu up to
//! ~100 for dimensions up to 200): the oscillatory part is handled with
//! composite Gauss-Legendre panels sized to the phase, the monotone part
//! with tanh-sinh. This avoids the catastrophic cancellation the ascending
//! series suffers from when x ~ nu.

use super::quadrature::integrate;
use crate::error::{Error, Result};

// 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
const GL_NODES: [f64; 8] = [
    0.095_012_509_837_637_440_185,
    0.281_603_550_779_258_913_230,
    0.458_016_777_657_227_386_342,
    0.617_876_244_402_643_748_447,
    0.755_404_408_355_003_033_895,
    0.865_631_202_387_831_743_880,
    0.944_575_023_073_232_576_078,
    0.989_400_934_991_649_932_596,
];
const GL_WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_496_285,
    0.182_603_415_044_923_588_867,
    0.169_156_519_395_002_538_189,
    0.149_595_988_816_576_732_081,
    0.124_628_971_255_533_872_052,
    0.095_158_511_682_492_784_810,
    0.062_253_523_938_647_892_863,
    0.027_152_459_411_754_094_852,
];

fn gauss_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        let dx = half * GL_NODES[i];
        acc += GL_WEIGHTS[i] * (f(mid + dx) + f(mid - dx));
    }
    acc * half
}

/// Oscillatory part (1/pi) int_0^pi g(tau) dtau with panel count tied to the
/// total phase variation nu*pi + x*pi.
fn oscillatory<F: Fn(f64) -> f64>(nu: f64, x: f64, g: F) -> f64 {
    let panels = (0.5 * (nu.abs() + x)).ceil() as usize + 4;
    let width = std::f64::consts::PI / panels as f64;
    let mut acc = 0.0;
    for k in 0..panels {
        let a = k as f64 * width;
        acc += gauss_panel(&g, a, a + width);
    }
    acc / std::f64::consts::PI
}

/// Monotone correction integral int_0^inf exp(-x sinh t - nu t) dt.
fn monotone_tail(nu: f64, x: f64) -> f64 {
    // Beyond x*sinh(t) + nu*t = 745 the integrand underflows.
    let t_max = (760.0 / x).asinh() + 1.0;
    integrate(
        |t| (-x * t.sinh() - nu * t).exp(),
        0.0,
        t_max,
        1e-14,
        1e-12,
    )
    .unwrap_or(0.0)
}

/// Bessel function of the first kind, real order `nu >= -0.75`, `x > 0`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    debug_assert!(x > 0.0 && nu >= -0.75);
    let main = oscillatory(nu, x, |tau| (nu * tau - x * tau.sin()).cos());
    let s = (nu * std::f64::consts::PI).sin();
    if s.abs() < 1e-15 {
        main
    } else {
        main - s / std::f64::consts::PI * monotone_tail(nu, x)
    }
}

/// d/dx of `bessel_j` from the differentiated integral representation.
fn bessel_j_prime(nu: f64, x: f64) -> f64 {
    let main = oscillatory(nu, x, |tau| tau.sin() * (nu * tau - x * tau.sin()).sin());
    let s = (nu * std::f64::consts::PI).sin();
    if s.abs() < 1e-15 {
        main
    } else {
        let t_max = (760.0 / x).asinh() + 1.0;
        let tail = integrate(
            |t| t.sinh() * (-x * t.sinh() - nu * t).exp(),
            0.0,
            t_max,
            1e-14,
            1e-12,
        )
        .unwrap_or(0.0);
        main + s / std::f64::consts::PI * tail
    }
}

/// Initial guess for the first positive zero of J_nu.
fn first_zero_guess(nu: f64) -> f64 {
    if nu >= 1.0 {
        // large-order asymptotic (Tricomi expansion in nu^{1/3})
        let c = nu.cbrt();
        nu + 1.855_757_1 * c + 1.033_150 / c - 0.003_97 / nu - 0.090_8 / (c * c * c * c * c)
    } else {
        // piecewise-linear through known anchors at nu = -1/2, 0, 1/2, 1
        let anchors = [
            (-0.5, std::f64::consts::FRAC_PI_2),
            (0.0, 2.404_825_557_695_773),
            (0.5, std::f64::consts::PI),
            (1.0, 3.831_705_970_207_512),
        ];
        for w in anchors.windows(2) {
            let ((a, fa), (b, fb)) = (w[0], w[1]);
            if nu <= b {
                return fa + (nu - a) / (b - a) * (fb - fa);
            }
        }
        unreachable!()
    }
}

/// First positive zero of the Bessel function `J_nu`, `nu >= -1/2`.
///
/// Newton refinement from an asymptotic initial guess, safeguarded by a
/// sign-change bracket; absolute accuracy around 1e-11.
pub fn bessel_first_zero(nu: f64) -> Result<f64> {
    if !(nu >= -0.5) {
        return Err(Error::Domain(format!(
            "bessel_first_zero requires nu >= -1/2, got {nu}"
        )));
    }
    let guess = first_zero_guess(nu);

    // Bracket the first zero only: J_nu > 0 on (0, j_{nu,1}), and
    // consecutive zeros are more than a unit apart, so expanding the right
    // endpoint by unit steps cannot jump across a whole negative region and
    // land beyond the second zero.
    let mut a = 0.9 * guess;
    let mut b = guess + 1.0;
    let mut tries = 0;
    while bessel_j(nu, a) <= 0.0 {
        a *= 0.9;
        tries += 1;
        if tries > 60 {
            return Err(Error::Numeric(format!("no positive bracket endpoint for nu={nu}")));
        }
    }
    tries = 0;
    while bessel_j(nu, b) > 0.0 {
        b += 1.0;
        tries += 1;
        if tries > 200 {
            return Err(Error::Numeric(format!("no sign change found for nu={nu}")));
        }
    }

    // Safeguarded Newton: fall back to bisection whenever the Newton step
    // leaves the bracket.
    let mut x = guess.clamp(a, b);
    for _ in 0..80 {
        let fx = bessel_j(nu, x);
        if fx.abs() < 1e-14 {
            return Ok(x);
        }
        if fx > 0.0 {
            a = x;
        } else {
            b = x;
        }
        let dfx = bessel_j_prime(nu, x);
        let newton = x - fx / dfx;
        let next = if dfx != 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        let step = (next - x).abs();
        x = next;
        if step < 1e-12 * x.max(1.0) || (b - a) < 5e-12 * x.max(1.0) {
            return Ok(x);
        }
    }
    Err(Error::Numeric(format!(
        "bessel_first_zero failed to converge for nu={nu}"
    )))
}

/// Principal Dirichlet eigenvalue of the unit ball for speed-2 Brownian
/// motion: the squared first zero of J_{d/2-1}.
pub fn lambda_ball_brownian(d: u32) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let z = bessel_first_zero(d as f64 / 2.0 - 1.0)?;
    Ok(z * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn closed_form_orders() {
        // J_{-1/2}(x) = sqrt(2/(pi x)) cos x, J_{1/2}(x) = sqrt(2/(pi x)) sin x
        for &x in &[0.7, 1.3, 2.9, 11.0] {
            let c = (2.0 / (std::f64::consts::PI * x)).sqrt();
            assert_relative_eq!(bessel_j(-0.5, x), c * x.cos(), epsilon = 1e-12);
            assert_relative_eq!(bessel_j(0.5, x), c * x.sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn integer_order_values() {
        // reference values from standard tables
        assert_relative_eq!(bessel_j(0.0, 1.0), 0.765_197_686_557_966_6, epsilon = 1e-12);
        assert_relative_eq!(bessel_j(1.0, 2.0), 0.576_724_807_756_873_4, epsilon = 1e-12);
        assert_relative_eq!(bessel_j(0.0, 5.0), -0.177_596_771_314_338_3, epsilon = 1e-12);
    }

    #[test]
    fn first_zeros_match_references() {
        // trivial ones
        assert_relative_eq!(
            bessel_first_zero(-0.5).unwrap(),
            std::f64::consts::FRAC_PI_2,
            epsilon = 1e-10
        );
        assert_relative_eq!(bessel_first_zero(0.5).unwrap(), std::f64::consts::PI, epsilon = 1e-10);
        // j_{0,1}, j_{1,1}, j_{3/2,1}, j_{7,1}, j_{99,1}
        assert_relative_eq!(bessel_first_zero(0.0).unwrap(), 2.404_825_557_695_773, epsilon = 1e-10);
        assert_relative_eq!(bessel_first_zero(1.0).unwrap(), 3.831_705_970_207_512, epsilon = 1e-10);
        assert_relative_eq!(bessel_first_zero(1.5).unwrap(), 4.493_409_457_909_064, epsilon = 1e-10);
        assert_relative_eq!(bessel_first_zero(7.0).unwrap(), 11.086_370_019_245_084, epsilon = 1e-10);
        assert_relative_eq!(bessel_first_zero(99.0).unwrap(), 107.808_103_297_189_83, epsilon = 2e-10);
    }

    #[test]
    fn zero_is_a_sign_change() {
        for &nu in &[0.0, 0.25, 2.0, 13.5] {
            let z = bessel_first_zero(nu).unwrap();
            assert!(bessel_j(nu, z - 1e-6) > 0.0);
            assert!(bessel_j(nu, z + 1e-6) < 0.0);
        }
    }

    #[test]
    fn ball_eigenvalues() {
        assert_relative_eq!(
            lambda_ball_brownian(1).unwrap(),
            std::f64::consts::PI * std::f64::consts::PI / 4.0,
            epsilon = 1e-9
        );
        assert_relative_eq!(lambda_ball_brownian(2).unwrap(), 5.783_185_962_946_785, epsilon = 1e-9);
        assert_relative_eq!(
            lambda_ball_brownian(3).unwrap(),
            std::f64::consts::PI * std::f64::consts::PI,
            epsilon = 1e-9
        );
        assert_relative_eq!(lambda_ball_brownian(5).unwrap(), 20.190_728_556_426_63, epsilon = 1e-9);
    }

    #[test]
    fn domain_error_below_minus_half() {
        assert!(bessel_first_zero(-0.6).is_err());
        assert!(lambda_ball_brownian(0).is_err());
    }
}
