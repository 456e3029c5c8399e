//! Explicit bounds: the dimensional torsion-product bound, the two-sided
//! eigenvalue window for subordinate processes, the gamma-ratio bracket, and
//! the ball comparison bounds they combine into.

use serde::Serialize;

use super::gamma::gamma_positive;
use crate::error::{Error, Result};

/// Stability index and dimension of a symmetric stable process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StableParams {
    pub alpha: f64,
    pub d: u32,
}

impl StableParams {
    pub fn new(alpha: f64, d: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::Domain(format!("alpha must be in (0, 2], got {alpha}")));
        }
        if d == 0 {
            return Err(Error::Domain("dimension must be >= 1".into()));
        }
        Ok(StableParams { alpha, d })
    }

    /// Index of the driving subordinator, `rho = alpha / 2`.
    pub fn rho(&self) -> f64 {
        self.alpha / 2.0
    }
}

/// Extended real in `[0, inf]`. Reports keep infinity explicit instead of
/// relying on IEEE infinities so serialized output stays unambiguous.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtReal {
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn as_f64(self) -> f64 {
        match self {
            ExtReal::Finite(v) => v,
            ExtReal::PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// Classify an f64, mapping IEEE infinity to the explicit variant.
    pub fn from_f64(v: f64) -> Self {
        if v.is_infinite() && v > 0.0 {
            ExtReal::PosInf
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl std::fmt::Display for ExtReal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtReal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::PosInf => s.serialize_str("inf"),
        }
    }
}

/// Which inequality a [`BoundSet`] instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundLabel {
    Theorem1,
    Theorem2,
    ChenSong,
    ComparisonLemma,
    BesselWindow,
    Wendel,
    TorsionBall,
    LambdaBall,
}

impl BoundLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundLabel::Theorem1 => "theorem1",
            BoundLabel::Theorem2 => "theorem2",
            BoundLabel::ChenSong => "chen_song",
            BoundLabel::ComparisonLemma => "comparison_lemma",
            BoundLabel::BesselWindow => "bessel_window",
            BoundLabel::Wendel => "wendel",
            BoundLabel::TorsionBall => "torsion_ball",
            BoundLabel::LambdaBall => "lambda_ball",
        }
    }
}

/// A labelled two-sided bound with `lower <= upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub lower: ExtReal,
    pub upper: ExtReal,
    pub label: BoundLabel,
}

impl BoundSet {
    pub fn new(lower: ExtReal, upper: ExtReal, label: BoundLabel) -> Result<Self> {
        let ok = match (lower, upper) {
            (ExtReal::Finite(l), ExtReal::Finite(u)) => l.is_finite() && u.is_finite() && l <= u,
            (ExtReal::Finite(l), ExtReal::PosInf) => l.is_finite(),
            (ExtReal::PosInf, ExtReal::PosInf) => true,
            (ExtReal::PosInf, ExtReal::Finite(_)) => false,
        };
        if !ok {
            return Err(Error::Domain(format!(
                "invalid bound set [{lower}, {upper}] for {}",
                label.as_str()
            )));
        }
        Ok(BoundSet { lower, upper, label })
    }

    fn finite(lower: f64, upper: f64, label: BoundLabel) -> Result<Self> {
        Self::new(ExtReal::Finite(lower), ExtReal::Finite(upper), label)
    }

    /// Whether `v` lies inside the bounds, with a small absolute slack for
    /// values sitting exactly on an endpoint.
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        let lo_ok = match self.lower {
            ExtReal::Finite(l) => v >= l - tol,
            ExtReal::PosInf => false,
        };
        let up_ok = match self.upper {
            ExtReal::Finite(u) => v <= u + tol,
            ExtReal::PosInf => true,
        };
        lo_ok && up_ok
    }
}

/// Dimensional constant `V_d = d/8 + (sqrt(d)/4) sqrt(5 (1 + log(2)/4)) + 1`
/// bounding the eigenvalue-torsion product over all domains.
pub fn vogt_bound(d: u32) -> f64 {
    let d = d as f64;
    d / 8.0 + d.sqrt() / 4.0 * (5.0 * (1.0 + 0.25 * std::f64::consts::LN_2)).sqrt() + 1.0
}

/// Torsion function of the stable process on the unit ball at radius `r`:
/// `Gamma(d/2) (1 - r^2)^{alpha/2} / (2^alpha Gamma(1 + alpha/2) Gamma(d/2 + alpha/2))`.
pub fn ball_torsion_profile(params: StableParams, r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(Error::Domain(format!("radius must be in [0, 1], got {r}")));
    }
    let (a, d) = (params.alpha, params.d as f64);
    let num = gamma_positive(d / 2.0) * (1.0 - r * r).powf(a / 2.0);
    let den = 2f64.powf(a) * gamma_positive(1.0 + a / 2.0) * gamma_positive(d / 2.0 + a / 2.0);
    Ok(num / den)
}

/// Supremum of the ball torsion function (attained at the center).
pub fn ball_torsion_sup(params: StableParams) -> f64 {
    ball_torsion_profile(params, 0.0).expect("r = 0 is always valid")
}

/// Gamma-ratio bracket `(x/(x+a))^{1-a} <= Gamma(x+a) / (x^a Gamma(x)) <= 1`.
pub fn wendel_bounds(x: f64, a: f64) -> Result<BoundSet> {
    if !(x > 0.0) || !(a > 0.0 && a < 1.0) {
        return Err(Error::Domain(format!(
            "wendel_bounds needs x > 0 and a in (0, 1), got x={x}, a={a}"
        )));
    }
    BoundSet::finite((x / (x + a)).powf(1.0 - a), 1.0, BoundLabel::Wendel)
}

/// Two-sided eigenvalue window for the subordinate process on a bounded
/// convex domain: `[Phi(lambda_W)/2, Phi(lambda_W)]` with `Phi(l) = l^{alpha/2}`.
pub fn chen_song_window(lambda_w: f64, alpha: f64) -> Result<BoundSet> {
    if !(lambda_w >= 0.0) {
        return Err(Error::Domain(format!("lambda_W must be >= 0, got {lambda_w}")));
    }
    let phi = lambda_w.powf(alpha / 2.0);
    BoundSet::finite(0.5 * phi, phi, BoundLabel::ChenSong)
}

/// Eigenvalue bounds for the stable process on the unit ball,
/// `[d^alpha / 2^{alpha+1}, d^alpha / 2^alpha + C^{alpha/2} d^{2 alpha/3}]`,
/// with `C` the (caller-supplied) residual constant of the Bessel-zero window.
pub fn lambda_ball_stable_bounds(params: StableParams, c: f64) -> Result<BoundSet> {
    if !(c >= 0.0) {
        return Err(Error::Domain(format!("C must be >= 0, got {c}")));
    }
    let (a, d) = (params.alpha, params.d as f64);
    let lower = d.powf(a) / 2f64.powf(a + 1.0);
    let upper = d.powf(a) / 2f64.powf(a) + c.powf(a / 2.0) * d.powf(2.0 * a / 3.0);
    BoundSet::finite(lower, upper, BoundLabel::LambdaBall)
}

/// Torsion-sup bounds for the stable process on the unit ball from the
/// gamma-ratio bracket and subadditivity of `x -> x^{1 - alpha/2}`.
pub fn torsion_ball_bounds(params: StableParams) -> Result<BoundSet> {
    let (a, d) = (params.alpha, params.d as f64);
    let scale = 2f64.powf(-a / 2.0) / gamma_positive(1.0 + a / 2.0);
    let lower = scale * d.powf(-a / 2.0);
    let upper = lower + scale * a.powf(1.0 - a / 2.0) / d;
    BoundSet::finite(lower, upper, BoundLabel::TorsionBall)
}

/// Prefactor of the torsion-sup upper bound, `4 / (alpha Gamma(alpha/2))`.
pub fn spectral_prefactor(alpha: f64) -> f64 {
    4.0 / (alpha * gamma_positive(alpha / 2.0))
}

/// Spectral sandwich for the stable torsion sup on a convex domain:
/// `[1/lambda_X, (4/(alpha Gamma(alpha/2))) V_d^{alpha/2} / lambda_X]`.
///
/// Degenerates to `[inf, inf]` when `lambda_X <= 0` (the convention 1/0 = inf).
pub fn theorem1_bounds(params: StableParams, lambda_x: f64) -> Result<BoundSet> {
    if !(lambda_x > 0.0) {
        return BoundSet::new(ExtReal::PosInf, ExtReal::PosInf, BoundLabel::Theorem1);
    }
    let upper = spectral_prefactor(params.alpha) * vogt_bound(params.d).powf(params.alpha / 2.0)
        / lambda_x;
    BoundSet::finite(1.0 / lambda_x, upper, BoundLabel::Theorem1)
}

/// Renewal-function sandwich for the subordinate torsion sup:
/// `[1/Phi(lambda_W), 2 V(||u_W||_inf)]`.
///
/// `Phi(lambda_W) = 0` means `lambda_W = 0`, where the inequality degenerates
/// to `[inf, inf]`; an infinite `V` value propagates to the upper bound.
pub fn theorem2_bounds(phi_at_lambda_w: f64, v_at_sup_torsion_w: f64) -> Result<BoundSet> {
    if !(phi_at_lambda_w >= 0.0) || v_at_sup_torsion_w < 0.0 {
        return Err(Error::Domain("theorem2_bounds needs nonnegative inputs".into()));
    }
    if phi_at_lambda_w == 0.0 {
        return BoundSet::new(ExtReal::PosInf, ExtReal::PosInf, BoundLabel::Theorem2);
    }
    let upper = ExtReal::from_f64(2.0 * v_at_sup_torsion_w);
    BoundSet::new(ExtReal::Finite(1.0 / phi_at_lambda_w), upper, BoundLabel::Theorem2)
}

/// Two-sided bounds on the eigenvalue-torsion product for the unit ball,
/// `[d^{alpha/2} 2^{-3 alpha/2} / (2 Gamma(1+alpha/2)), same + C1 d^{alpha/6} + C2 d^{alpha-1}]`.
pub fn comparison_lemma_bounds(params: StableParams, c1: f64, c2: f64) -> Result<BoundSet> {
    if !(c1 >= 0.0) || !(c2 >= 0.0) {
        return Err(Error::Domain("C1 and C2 must be >= 0".into()));
    }
    let (a, d) = (params.alpha, params.d as f64);
    let main = 2f64.powf(-1.5 * a) / gamma_positive(1.0 + a / 2.0) * d.powf(a / 2.0);
    let upper = main + c1 * d.powf(a / 6.0) + c2 * d.powf(a - 1.0);
    BoundSet::finite(0.5 * main, upper, BoundLabel::ComparisonLemma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::gamma::gamma_fn;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn vogt_values() {
        assert_relative_eq!(vogt_bound(1), 1.730_518_062_060_287_1, max_relative = 1e-12);
        assert_relative_eq!(vogt_bound(4), 2.711_036_124_120_574_2, max_relative = 1e-12);
    }

    #[test]
    fn vogt_leading_term() {
        for d in (64..=4096).step_by(64) {
            let v = vogt_bound(d);
            let ratio = v / d as f64;
            assert!(
                (ratio - 0.125).abs() < 1.0 / (d as f64).sqrt(),
                "d={d}: V_d/d = {ratio}"
            );
        }
    }

    #[test]
    fn ball_torsion_values() {
        let p = |a, d| StableParams::new(a, d).unwrap();
        assert_relative_eq!(ball_torsion_profile(p(1.0, 1), 0.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(ball_torsion_sup(p(1.0, 2)), 2.0 / std::f64::consts::PI, epsilon = 1e-12);
        assert_relative_eq!(ball_torsion_sup(p(1.0, 1)), 1.0, epsilon = 1e-12);
        assert_relative_eq!(ball_torsion_sup(p(2.0, 5)), 0.1, epsilon = 1e-12);
        // alpha = 2 reduces to (1 - r^2)/(2d)
        assert_relative_eq!(ball_torsion_profile(p(2.0, 3), 0.0).unwrap(), 1.0 / 6.0, epsilon = 1e-12);
        assert_relative_eq!(
            ball_torsion_profile(p(2.0, 3), 0.5).unwrap(),
            0.75 / 6.0,
            epsilon = 1e-12
        );
        // boundary value
        assert_eq!(ball_torsion_profile(p(0.7, 4), 1.0).unwrap(), 0.0);
        assert!(ball_torsion_profile(p(1.0, 1), 1.5).is_err());
    }

    #[test]
    fn scaling_identity_radius_s() {
        // The general-radius closed form
        //   u_{sB}(x) = Gamma(d/2) (s^2 - |x|^2)^{alpha/2} / (2^alpha ...)
        // must agree with the self-similar route s^alpha * u_B(x/s).
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..10 {
            let alpha = 0.3 + 1.7 * next();
            let d = 1 + (next() * 4.0) as u32;
            let s = 0.5 + 2.0 * next();
            let r = next(); // |x|/s in [0, 1)
            let x = s * r;
            let p = StableParams::new(alpha, d).unwrap();
            let df = d as f64;
            let general = gamma_positive(df / 2.0) * (s * s - x * x).powf(alpha / 2.0)
                / (2f64.powf(alpha)
                    * gamma_positive(1.0 + alpha / 2.0)
                    * gamma_positive(df / 2.0 + alpha / 2.0));
            let self_similar = s.powf(alpha) * ball_torsion_profile(p, x / s).unwrap();
            assert_relative_eq!(general, self_similar, max_relative = 1e-12);
        }
    }

    #[test]
    fn wendel_containment_examples() {
        let b = wendel_bounds(1.0, 0.5).unwrap();
        let ratio = gamma_fn(1.5).unwrap() / (1f64.powf(0.5) * gamma_fn(1.0).unwrap());
        assert_relative_eq!(ratio, 0.886_226_925_452_758, epsilon = 1e-12);
        assert_relative_eq!(b.lower.as_f64(), 0.816_496_580_927_726, epsilon = 1e-12);
        assert!(b.contains(ratio, 0.0));

        let b = wendel_bounds(10.0, 0.75).unwrap();
        let ratio = gamma_fn(10.75).unwrap() / (10f64.powf(0.75) * gamma_fn(10.0).unwrap());
        assert!(b.contains(ratio, 0.0));
    }

    #[test]
    fn wendel_grid() {
        for i in 0..20 {
            for j in 0..20 {
                let x = 0.1 + (50.0 - 0.1) * i as f64 / 19.0;
                let a = 0.05 + 0.9 * j as f64 / 19.0;
                let b = wendel_bounds(x, a).unwrap();
                let ratio = gamma_positive(x + a) / (x.powf(a) * gamma_positive(x));
                assert!(b.contains(ratio, 1e-12), "x={x} a={a} ratio={ratio}");
            }
        }
    }

    #[test]
    fn wendel_degenerate_limits() {
        for &a in &[1e-6, 1.0 - 1e-6] {
            let b = wendel_bounds(2.0, a).unwrap();
            assert!(b.lower.as_f64() > 1.0 - 1e-5);
            let ratio = gamma_positive(2.0 + a) / (2f64.powf(a) * gamma_positive(2.0));
            assert!((ratio - 1.0).abs() < 1e-5);
        }
    }

    #[test]
    fn chen_song_values() {
        let b = chen_song_window(4.0, 1.0).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(b.upper.as_f64(), 2.0, epsilon = 1e-13);
        let b = chen_song_window(0.0, 0.7).unwrap();
        assert_eq!(b.lower.as_f64(), 0.0);
        assert_eq!(b.upper.as_f64(), 0.0);
        let b = chen_song_window(3.7, 2.0).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 1.85, epsilon = 1e-13);
        assert_relative_eq!(b.upper.as_f64(), 3.7, epsilon = 1e-13);
    }

    #[test]
    fn lambda_ball_values() {
        let b = lambda_ball_stable_bounds(StableParams::new(2.0, 4).unwrap(), 0.0).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 2.0, epsilon = 1e-13);
        assert_relative_eq!(b.upper.as_f64(), 4.0, epsilon = 1e-13);
        let b = lambda_ball_stable_bounds(StableParams::new(1.0, 1).unwrap(), 0.0).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 0.25, epsilon = 1e-13);
        assert_relative_eq!(b.upper.as_f64(), 0.5, epsilon = 1e-13);
    }

    #[test]
    fn torsion_ball_contains_exact_sup() {
        // alpha = 2, d = 5: lower endpoint is exactly 1/10
        let p = StableParams::new(2.0, 5).unwrap();
        let b = torsion_ball_bounds(p).unwrap();
        assert!(b.contains(ball_torsion_sup(p), 1e-12));
        assert_relative_eq!(b.lower.as_f64(), 0.1, epsilon = 1e-12);

        let p = StableParams::new(1.0, 1).unwrap();
        assert!(torsion_ball_bounds(p).unwrap().contains(1.0, 1e-12));

        for &alpha in &[0.5, 1.0, 1.5, 2.0] {
            for d in 1..=200 {
                let p = StableParams::new(alpha, d).unwrap();
                let b = torsion_ball_bounds(p).unwrap();
                assert!(
                    b.contains(ball_torsion_sup(p), 1e-12),
                    "alpha={alpha} d={d}"
                );
            }
        }
    }

    #[test]
    fn torsion_ball_width_shrinks() {
        let p = StableParams::new(1.0, 100).unwrap();
        let b = torsion_ball_bounds(p).unwrap();
        let width = b.upper.as_f64() - b.lower.as_f64();
        assert!(width <= 0.2 * b.lower.as_f64(), "width {width} lower {}", b.lower.as_f64());
    }

    #[test]
    fn theorem1_values() {
        // alpha = 2 prefactor is exactly 2
        assert_eq!(spectral_prefactor(2.0), 2.0);
        assert_relative_eq!(spectral_prefactor(1.0), 2.256_758_334_191_025_1, epsilon = 1e-12);

        let p = StableParams::new(1.0, 1).unwrap();
        let b = theorem1_bounds(p, 1.0).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 1.0, epsilon = 1e-13);
        assert_relative_eq!(b.upper.as_f64(), 2.968_746_556_709_491_8, max_relative = 1e-12);

        // degenerate lambda
        let b = theorem1_bounds(p, 0.0).unwrap();
        assert_eq!(b.lower, ExtReal::PosInf);
        assert_eq!(b.upper, ExtReal::PosInf);
    }

    #[test]
    fn theorem1_product_form_independent_of_lambda() {
        let p = StableParams::new(1.3, 7).unwrap();
        for &l in &[0.3, 1.0, 42.0] {
            let b = theorem1_bounds(p, l).unwrap();
            assert_relative_eq!(
                b.upper.as_f64() * l,
                spectral_prefactor(1.3) * vogt_bound(7).powf(0.65),
                max_relative = 1e-12
            );
            assert!(b.lower.as_f64() <= b.upper.as_f64());
        }
    }

    #[test]
    fn theorem2_values() {
        // ball d=1, alpha=1: [2/pi, 2 V(1/2)]
        let lam = std::f64::consts::PI * std::f64::consts::PI / 4.0;
        let b = theorem2_bounds(lam.sqrt(), 0.797_884_560_802_865_4).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 2.0 / std::f64::consts::PI, epsilon = 1e-12);
        assert_relative_eq!(b.upper.as_f64(), 1.595_769_121_605_730_7, epsilon = 1e-12);
        assert!(b.contains(1.0, 0.0));

        // degenerate convention
        let b = theorem2_bounds(0.0, 1.0).unwrap();
        assert_eq!(b.lower, ExtReal::PosInf);
        assert_eq!(b.upper, ExtReal::PosInf);
        let b = theorem2_bounds(2.0, f64::INFINITY).unwrap();
        assert_eq!(b.upper, ExtReal::PosInf);
        assert_relative_eq!(b.lower.as_f64(), 0.5);
    }

    #[test]
    fn comparison_lemma_values() {
        // alpha=2, d=1, C1=C2=0: lower = 1/16, below the exact interval product pi^2/8
        let b = comparison_lemma_bounds(StableParams::new(2.0, 1).unwrap(), 0.0, 0.0).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 1.0 / 16.0, epsilon = 1e-13);
        let interval_product = std::f64::consts::PI * std::f64::consts::PI / 8.0;
        assert!(b.lower.as_f64() <= interval_product);

        let b = comparison_lemma_bounds(StableParams::new(1.0, 64).unwrap(), 0.0, 0.0).unwrap();
        assert_relative_eq!(b.lower.as_f64(), 1.595_769_121_605_730_7, max_relative = 1e-12);
    }

    #[test]
    fn comparison_lower_scales_exactly() {
        // lower(d) / d^{alpha/2} is constant in d
        let a = 1.3;
        let base = comparison_lemma_bounds(StableParams::new(a, 1).unwrap(), 0.0, 0.0)
            .unwrap()
            .lower
            .as_f64();
        for d in [2u32, 5, 17, 120] {
            let b = comparison_lemma_bounds(StableParams::new(a, d).unwrap(), 0.0, 0.0).unwrap();
            assert_relative_eq!(
                b.lower.as_f64() / (d as f64).powf(a / 2.0),
                base,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn bound_set_rejects_inverted() {
        assert!(BoundSet::finite(2.0, 1.0, BoundLabel::BesselWindow).is_err());
        assert!(BoundSet::new(ExtReal::PosInf, ExtReal::Finite(1.0), BoundLabel::Theorem2).is_err());
    }

    proptest! {
        #[test]
        fn theorem1_lower_le_upper(alpha in 0.05f64..2.0, d in 1u32..64, lam in 1e-3f64..1e3) {
            let p = StableParams::new(alpha, d).unwrap();
            let b = theorem1_bounds(p, lam).unwrap();
            prop_assert!(b.lower.as_f64() <= b.upper.as_f64());
        }

        #[test]
        fn wendel_bracket_random(x in 0.1f64..50.0, a in 0.05f64..0.95) {
            let b = wendel_bounds(x, a).unwrap();
            let ratio = gamma_positive(x + a) / (x.powf(a) * gamma_positive(x));
            prop_assert!(b.contains(ratio, 1e-11));
        }
    }
}
