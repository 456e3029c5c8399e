//! Convex domains and the exact geometric queries the exit-time samplers
//! need: membership, boundary distance, supporting halfspaces, segment
//! crossings, and localization by intersection with centered balls.
//!
//! All variants admit closed-form distances, so no geometry solver is
//! involved. Domains are open sets; boundary points are detected with an
//! absolute tolerance of 1e-9.

use serde::Serialize;

use crate::error::{Error, Result};

pub const BOUNDARY_TOL: f64 = 1e-9;

/// Closed halfspace `{x : normal . x <= offset}` with a unit normal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Halfspace {
    pub normal: Vec<f64>,
    pub offset: f64,
}

impl Halfspace {
    pub fn new(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let norm = norm(&normal);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Domain("halfspace normal must be a nonzero vector".into()));
        }
        let normal = normal.iter().map(|v| v / norm).collect();
        Ok(Halfspace {
            normal,
            offset: offset / norm,
        })
    }

    /// Signed distance of `x` to the bounding hyperplane, positive inside
    /// the halfspace.
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        self.offset - dot(&self.normal, x)
    }
}

/// Convex domain variants with exact membership and distance queries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum ConvexDomain {
    /// Open ball `{x : |x - center| < radius}`.
    Ball { center: Vec<f64>, radius: f64 },
    /// Open slab `{x : |normal . x| < half_width}` (unbounded for d >= 2).
    Slab { normal: Vec<f64>, half_width: f64 },
    /// Axis-aligned open box centered at the origin.
    Box { half_widths: Vec<f64> },
    /// Intersection of finitely many open halfspaces; a stored interior
    /// point witnesses nonemptiness. A single face is a halfspace domain.
    Polytope {
        faces: Vec<Halfspace>,
        interior_point: Vec<f64>,
    },
    /// Intersection of two domains (used by localization). Membership is
    /// the conjunction; the boundary distance is the minimum, which is
    /// exact for convex sets.
    Intersection(Box<ConvexDomain>, Box<ConvexDomain>),
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

impl ConvexDomain {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("ball radius must be > 0, got {radius}")));
        }
        if center.is_empty() {
            return Err(Error::Domain("ball center must have dimension >= 1".into()));
        }
        Ok(ConvexDomain::Ball { center, radius })
    }

    pub fn unit_ball(d: usize) -> Self {
        ConvexDomain::Ball {
            center: vec![0.0; d],
            radius: 1.0,
        }
    }

    /// The interval (-1, 1) as the one-dimensional unit ball.
    pub fn interval() -> Self {
        Self::unit_ball(1)
    }

    pub fn slab(normal: Vec<f64>, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) {
            return Err(Error::Domain(format!("slab half-width must be > 0, got {half_width}")));
        }
        let n = norm(&normal);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("slab normal must be a nonzero vector".into()));
        }
        Ok(ConvexDomain::Slab {
            normal: normal.iter().map(|v| v / n).collect(),
            half_width,
        })
    }

    pub fn box_domain(half_widths: Vec<f64>) -> Result<Self> {
        if half_widths.is_empty() || half_widths.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Domain("box half-widths must all be > 0".into()));
        }
        Ok(ConvexDomain::Box { half_widths })
    }

    pub fn polytope(faces: Vec<Halfspace>, interior_point: Vec<f64>) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::Domain("polytope needs at least one face".into()));
        }
        let d = interior_point.len();
        if faces.iter().any(|f| f.normal.len() != d) {
            return Err(Error::Domain("polytope face dimensions disagree".into()));
        }
        let domain = ConvexDomain::Polytope {
            faces,
            interior_point: interior_point.clone(),
        };
        if !domain.contains_unchecked(&interior_point) {
            return Err(Error::Domain(
                "polytope interior point is not strictly inside".into(),
            ));
        }
        Ok(domain)
    }

    /// Halfspace `{x : normal . x < offset}` as a single-face polytope.
    pub fn halfspace(normal: Vec<f64>, offset: f64) -> Result<Self> {
        let face = Halfspace::new(normal, offset)?;
        let mut interior = vec![0.0; face.normal.len()];
        for (p, n) in interior.iter_mut().zip(&face.normal) {
            *p = n * (face.offset - 1.0);
        }
        Self::polytope(vec![face], interior)
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexDomain::Ball { center, .. } => center.len(),
            ConvexDomain::Slab { normal, .. } => normal.len(),
            ConvexDomain::Box { half_widths } => half_widths.len(),
            ConvexDomain::Polytope { interior_point, .. } => interior_point.len(),
            ConvexDomain::Intersection(a, _) => a.dim(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            ConvexDomain::Ball { .. } | ConvexDomain::Box { .. } => true,
            ConvexDomain::Slab { normal, .. } => normal.len() == 1,
            // A polytope is bounded iff its recession cone is trivial; the
            // variants used here are either halfspaces (unbounded) or
            // simplex-like boxes. Checking the recession cone exactly needs
            // an LP, so treat polytopes as unbounded, which is the
            // conservative answer for the estimators.
            ConvexDomain::Polytope { .. } => false,
            ConvexDomain::Intersection(a, b) => a.is_bounded() || b.is_bounded(),
        }
    }

    fn check_dim(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::Domain(format!(
                "point dimension {} does not match domain dimension {}",
                x.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Signed distance to the boundary: positive inside, negative outside.
    /// Exact for interior points in every variant; for exterior points it is
    /// a lower bound on the true distance (enough for boundary detection).
    pub fn signed_distance(&self, x: &[f64]) -> f64 {
        match self {
            ConvexDomain::Ball { center, radius } => {
                let mut s = 0.0;
                for (xi, ci) in x.iter().zip(center) {
                    s += (xi - ci) * (xi - ci);
                }
                radius - s.sqrt()
            }
            ConvexDomain::Slab { normal, half_width } => half_width - dot(normal, x).abs(),
            ConvexDomain::Box { half_widths } => x
                .iter()
                .zip(half_widths)
                .map(|(xi, w)| w - xi.abs())
                .fold(f64::INFINITY, f64::min),
            ConvexDomain::Polytope { faces, .. } => faces
                .iter()
                .map(|f| f.signed_distance(x))
                .fold(f64::INFINITY, f64::min),
            ConvexDomain::Intersection(a, b) => a.signed_distance(x).min(b.signed_distance(x)),
        }
    }

    pub(crate) fn contains_unchecked(&self, x: &[f64]) -> bool {
        self.signed_distance(x) > 0.0
    }

    /// Membership in the open domain.
    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        self.check_dim(x)?;
        Ok(self.contains_unchecked(x))
    }

    /// Euclidean distance from an interior point to the boundary.
    pub fn boundary_distance(&self, x: &[f64]) -> Result<f64> {
        self.check_dim(x)?;
        let d = self.signed_distance(x);
        if d <= 0.0 {
            return Err(Error::Domain("boundary_distance requires an interior point".into()));
        }
        Ok(d)
    }

    /// Supporting halfspace at a boundary point `b` (within 1e-9 of the
    /// boundary): contains the domain, with `b` on its hyperplane.
    pub fn supporting_halfspace(&self, b: &[f64]) -> Result<Halfspace> {
        self.check_dim(b)?;
        if self.signed_distance(b).abs() > BOUNDARY_TOL {
            return Err(Error::Domain(format!(
                "point is not within {BOUNDARY_TOL} of the boundary"
            )));
        }
        self.supporting_halfspace_inner(b)
    }

    fn supporting_halfspace_inner(&self, b: &[f64]) -> Result<Halfspace> {
        match self {
            ConvexDomain::Ball { center, radius: _ } => {
                let dir: Vec<f64> = b.iter().zip(center).map(|(bi, ci)| bi - ci).collect();
                let n = norm(&dir);
                if n == 0.0 {
                    return Err(Error::Domain("ball center is not a boundary point".into()));
                }
                let normal: Vec<f64> = dir.iter().map(|v| v / n).collect();
                let offset = dot(&normal, b);
                Ok(Halfspace { normal, offset })
            }
            ConvexDomain::Slab { normal, half_width } => {
                let side = dot(normal, b);
                let sign = if side >= 0.0 { 1.0 } else { -1.0 };
                Ok(Halfspace {
                    normal: normal.iter().map(|v| sign * v).collect(),
                    offset: *half_width,
                })
            }
            ConvexDomain::Box { half_widths } => {
                // face whose plane the point sits on (nearest face plane)
                let mut best = 0;
                let mut best_gap = f64::INFINITY;
                for (i, (xi, w)) in b.iter().zip(half_widths).enumerate() {
                    let gap = (w - xi.abs()).abs();
                    if gap < best_gap {
                        best_gap = gap;
                        best = i;
                    }
                }
                let mut normal = vec![0.0; b.len()];
                normal[best] = if b[best] >= 0.0 { 1.0 } else { -1.0 };
                Ok(Halfspace {
                    normal,
                    offset: half_widths[best],
                })
            }
            ConvexDomain::Polytope { faces, .. } => {
                let face = faces
                    .iter()
                    .min_by(|f, g| {
                        f.signed_distance(b)
                            .abs()
                            .total_cmp(&g.signed_distance(b).abs())
                    })
                    .expect("polytope has faces");
                Ok(face.clone())
            }
            ConvexDomain::Intersection(a, b_dom) => {
                if a.signed_distance(b).abs() <= b_dom.signed_distance(b).abs() {
                    a.supporting_halfspace_inner(b)
                } else {
                    b_dom.supporting_halfspace_inner(b)
                }
            }
        }
    }

    /// Orthogonal projection of an interior point onto the boundary: the
    /// nearest boundary point (foot of the nearest face plane, or the radial
    /// projection for balls).
    pub(crate) fn boundary_projection(&self, x: &[f64]) -> Vec<f64> {
        match self {
            ConvexDomain::Ball { center, radius } => {
                let dir: Vec<f64> = x.iter().zip(center).map(|(xi, ci)| xi - ci).collect();
                let n = norm(&dir);
                if n == 0.0 {
                    // center: any direction; pick the first axis
                    let mut p = center.clone();
                    p[0] += radius;
                    return p;
                }
                center
                    .iter()
                    .zip(&dir)
                    .map(|(ci, di)| ci + di * radius / n)
                    .collect()
            }
            ConvexDomain::Slab { normal, half_width } => {
                let side = dot(normal, x);
                let sign = if side >= 0.0 { 1.0 } else { -1.0 };
                let shift = sign * half_width - side;
                x.iter().zip(normal).map(|(xi, ni)| xi + shift * ni).collect()
            }
            ConvexDomain::Box { half_widths } => {
                let mut best = 0;
                let mut best_gap = f64::INFINITY;
                for (i, (xi, w)) in x.iter().zip(half_widths).enumerate() {
                    let gap = w - xi.abs();
                    if gap < best_gap {
                        best_gap = gap;
                        best = i;
                    }
                }
                let mut p = x.to_vec();
                p[best] = if x[best] >= 0.0 {
                    half_widths[best]
                } else {
                    -half_widths[best]
                };
                p
            }
            ConvexDomain::Polytope { faces, .. } => {
                let face = faces
                    .iter()
                    .min_by(|f, g| f.signed_distance(x).total_cmp(&g.signed_distance(x)))
                    .expect("polytope has faces");
                let d = face.signed_distance(x);
                x.iter().zip(&face.normal).map(|(xi, ni)| xi + d * ni).collect()
            }
            ConvexDomain::Intersection(a, b) => {
                if a.signed_distance(x) <= b.signed_distance(x) {
                    a.boundary_projection(x)
                } else {
                    b.boundary_projection(x)
                }
            }
        }
    }

    /// Signed distances of an interior point `p` and a second point `q` to
    /// the boundary plane nearest to `p` (the tangent plane at p's boundary
    /// projection). Used by the Brownian-bridge crossing check; avoids
    /// allocating the plane itself.
    pub(crate) fn bridge_distances(&self, p: &[f64], q: &[f64]) -> (f64, f64) {
        match self {
            ConvexDomain::Ball { center, radius } => {
                let mut n1sq = 0.0;
                for (pi, ci) in p.iter().zip(center) {
                    n1sq += (pi - ci) * (pi - ci);
                }
                let n1 = n1sq.sqrt();
                if n1 < 1e-300 {
                    return (*radius, *radius);
                }
                let mut proj = 0.0;
                for i in 0..p.len() {
                    proj += (q[i] - center[i]) * (p[i] - center[i]);
                }
                (radius - n1, radius - proj / n1)
            }
            ConvexDomain::Slab { normal, half_width } => {
                let sp = dot(normal, p);
                let sign = if sp >= 0.0 { 1.0 } else { -1.0 };
                (half_width - sign * sp, half_width - sign * dot(normal, q))
            }
            ConvexDomain::Box { half_widths } => {
                let mut best = 0;
                let mut d1 = f64::INFINITY;
                for (i, (pi, w)) in p.iter().zip(half_widths).enumerate() {
                    let gap = w - pi.abs();
                    if gap < d1 {
                        d1 = gap;
                        best = i;
                    }
                }
                let sign = if p[best] >= 0.0 { 1.0 } else { -1.0 };
                (d1, half_widths[best] - sign * q[best])
            }
            ConvexDomain::Polytope { faces, .. } => {
                let face = faces
                    .iter()
                    .min_by(|f, g| f.signed_distance(p).total_cmp(&g.signed_distance(p)))
                    .expect("polytope has faces");
                (face.signed_distance(p), face.signed_distance(q))
            }
            ConvexDomain::Intersection(a, b) => {
                if a.signed_distance(p) <= b.signed_distance(p) {
                    a.bridge_distances(p, q)
                } else {
                    b.bridge_distances(p, q)
                }
            }
        }
    }

    /// First crossing of the boundary along the segment from `p` (interior)
    /// to `q`: returns the parameter `t` in (0, 1] and the crossing point.
    /// `None` when the whole segment stays inside.
    pub(crate) fn first_exit_on_segment(&self, p: &[f64], q: &[f64]) -> Option<(f64, Vec<f64>)> {
        let t = self.exit_parameter(p, q)?;
        let point: Vec<f64> = p.iter().zip(q).map(|(pi, qi)| pi + t * (qi - pi)).collect();
        Some((t, point))
    }

    fn exit_parameter(&self, p: &[f64], q: &[f64]) -> Option<f64> {
        match self {
            ConvexDomain::Ball { center, radius } => {
                // |p + t(q-p) - c|^2 = r^2
                let mut aa = 0.0;
                let mut bb = 0.0;
                let mut cc = 0.0;
                for i in 0..p.len() {
                    let d = q[i] - p[i];
                    let e = p[i] - center[i];
                    aa += d * d;
                    bb += 2.0 * d * e;
                    cc += e * e;
                }
                cc -= radius * radius;
                if aa == 0.0 {
                    return None;
                }
                let disc = bb * bb - 4.0 * aa * cc;
                if disc < 0.0 {
                    return None;
                }
                let t = (-bb + disc.sqrt()) / (2.0 * aa);
                (0.0..=1.0).contains(&t).then_some(t)
            }
            ConvexDomain::Slab { normal, half_width } => {
                let sp = dot(normal, p);
                let sq = dot(normal, q);
                let mut best: Option<f64> = None;
                for plane in [*half_width, -half_width] {
                    if (sq - sp).abs() > 0.0 {
                        let t = (plane - sp) / (sq - sp);
                        if (0.0..=1.0).contains(&t) {
                            best = Some(best.map_or(t, |b: f64| b.min(t)));
                        }
                    }
                }
                best
            }
            ConvexDomain::Box { half_widths } => {
                let mut best: Option<f64> = None;
                for i in 0..p.len() {
                    let d = q[i] - p[i];
                    if d == 0.0 {
                        continue;
                    }
                    for plane in [half_widths[i], -half_widths[i]] {
                        let t = (plane - p[i]) / d;
                        if (0.0..=1.0).contains(&t) {
                            best = Some(best.map_or(t, |b: f64| b.min(t)));
                        }
                    }
                }
                best
            }
            ConvexDomain::Polytope { faces, .. } => {
                let mut best: Option<f64> = None;
                for f in faces {
                    let sp = f.signed_distance(p);
                    let sq = f.signed_distance(q);
                    if sp > 0.0 && sq <= 0.0 {
                        let t = sp / (sp - sq);
                        if (0.0..=1.0).contains(&t) {
                            best = Some(best.map_or(t, |b: f64| b.min(t)));
                        }
                    }
                }
                best
            }
            ConvexDomain::Intersection(a, b) => {
                match (a.exit_parameter(p, q), b.exit_parameter(p, q)) {
                    (Some(ta), Some(tb)) => Some(ta.min(tb)),
                    (ta, tb) => ta.or(tb),
                }
            }
        }
    }

    /// Localization `D_n = D` intersected with the centered ball of radius
    /// `n`. Returns `D` unchanged when it is already contained in that ball.
    pub fn localize(&self, n: u32) -> Result<ConvexDomain> {
        if n == 0 {
            return Err(Error::Domain("localization radius must be >= 1".into()));
        }
        let r = n as f64;
        let d = self.dim();
        if self.contained_in_centered_ball(r) {
            return Ok(self.clone());
        }
        let ball = ConvexDomain::Ball {
            center: vec![0.0; d],
            radius: r,
        };
        // nonempty-interior witness
        let witness = self.localization_witness(r).ok_or_else(|| {
            Error::Domain(format!("localize({n}) has empty interior for this domain"))
        })?;
        let result = ConvexDomain::Intersection(Box::new(self.clone()), Box::new(ball));
        if !result.contains_unchecked(&witness) {
            return Err(Error::Domain(format!("localize({n}) has empty interior")));
        }
        Ok(result)
    }

    fn contained_in_centered_ball(&self, r: f64) -> bool {
        match self {
            ConvexDomain::Ball { center, radius } => norm(center) + radius <= r,
            ConvexDomain::Box { half_widths } => norm(half_widths) <= r,
            ConvexDomain::Slab { normal, half_width } => normal.len() == 1 && *half_width <= r,
            ConvexDomain::Polytope { .. } => false,
            ConvexDomain::Intersection(a, b) => {
                a.contained_in_centered_ball(r) || b.contained_in_centered_ball(r)
            }
        }
    }

    fn localization_witness(&self, r: f64) -> Option<Vec<f64>> {
        let d = self.dim();
        let origin = vec![0.0; d];
        if self.contains_unchecked(&origin) {
            return Some(origin);
        }
        // pull a known interior point toward the origin until it enters the ball
        let inner: Vec<f64> = match self {
            ConvexDomain::Ball { center, radius } => {
                let n = norm(center);
                if n - radius >= r {
                    return None;
                }
                // point on the segment origin -> center just inside both
                let t = ((n - radius) + (n).min(r)) / 2.0 / n;
                center.iter().map(|c| c * t.clamp(0.0, 1.0)).collect()
            }
            ConvexDomain::Polytope { interior_point, .. } => interior_point.clone(),
            _ => return None,
        };
        (norm(&inner) < r && self.contains_unchecked(&inner)).then_some(inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn e(d: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        v
    }

    #[test]
    fn ball_membership_and_distance() {
        let b = ConvexDomain::unit_ball(3);
        assert!(b.contains(&[0.0, 0.0, 0.0]).unwrap());
        assert!(!b.contains(&[1.0, 0.0, 0.0]).unwrap()); // open set
        assert_relative_eq!(b.boundary_distance(&[0.0, 0.0, 0.0]).unwrap(), 1.0);
        assert_relative_eq!(b.boundary_distance(&[0.25, 0.0, 0.0]).unwrap(), 0.75);
        assert!(b.boundary_distance(&[2.0, 0.0, 0.0]).is_err());
        assert!(b.contains(&[0.0, 0.0]).is_err()); // dimension mismatch
    }

    #[test]
    fn slab_membership() {
        let s = ConvexDomain::slab(e(2, 0), 1.0).unwrap();
        assert!(s.contains(&[0.999, 57.0]).unwrap());
        assert!(!s.contains(&[1.0, 0.0]).unwrap());
        assert_relative_eq!(s.boundary_distance(&[0.25, -3.0]).unwrap(), 0.75);
    }

    #[test]
    fn box_distance_nearest_face() {
        let b = ConvexDomain::box_domain(vec![1.0, 2.0]).unwrap();
        assert_relative_eq!(b.boundary_distance(&[0.5, 0.0]).unwrap(), 0.5);
        assert_relative_eq!(b.boundary_distance(&[0.0, 1.9]).unwrap(), 0.1);
    }

    #[test]
    fn supporting_halfspaces() {
        let b = ConvexDomain::unit_ball(3);
        let h = b.supporting_halfspace(&[1.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(h.normal[0], 1.0);
        assert_relative_eq!(h.offset, 1.0);

        let s = ConvexDomain::slab(e(2, 1), 0.5).unwrap();
        let h = s.supporting_halfspace(&[3.0, 0.5]).unwrap();
        assert_relative_eq!(h.normal[1], 1.0);
        assert_relative_eq!(h.offset, 0.5);

        let p = ConvexDomain::halfspace(e(2, 0), 2.0).unwrap();
        let h = p.supporting_halfspace(&[2.0, -4.0]).unwrap();
        assert_relative_eq!(h.normal[0], 1.0);
        assert_relative_eq!(h.offset, 2.0);

        // not near the boundary
        assert!(b.supporting_halfspace(&[0.5, 0.0, 0.0]).is_err());
    }

    #[test]
    fn box_supporting_halfspace_on_face() {
        let b = ConvexDomain::box_domain(vec![1.0, 2.0]).unwrap();
        let h = b.supporting_halfspace(&[-1.0, 0.3]).unwrap();
        assert_relative_eq!(h.normal[0], -1.0);
        assert_relative_eq!(h.offset, 1.0);
    }

    #[test]
    fn localize_cases() {
        // already inside: unchanged
        let b = ConvexDomain::unit_ball(2);
        assert_eq!(b.localize(2).unwrap(), b);

        // slab gets bounded and still contains the origin
        let s = ConvexDomain::slab(e(2, 0), 1.0).unwrap();
        let s1 = s.localize(1).unwrap();
        assert!(s1.contains(&[0.0, 0.0]).unwrap());
        assert!(s1.is_bounded());
        assert!(!s1.contains(&[0.0, 1.5]).unwrap());

        // a polytope living beyond the ball cannot be localized at radius 1
        let far = ConvexDomain::polytope(
            vec![Halfspace::new(vec![-1.0, 0.0], -8.0).unwrap()], // x_0 >= 8
            vec![9.0, 0.0],
        )
        .unwrap();
        assert!(far.localize(1).is_err());
    }

    #[test]
    fn localize_chain_is_monotone_and_exhausts() {
        let s = ConvexDomain::slab(e(2, 0), 1.0).unwrap();
        let xs: Vec<Vec<f64>> = vec![vec![0.0, 0.0], vec![0.5, 3.0], vec![-0.9, 7.5]];
        for x in &xs {
            assert!(norm(x) <= 8.0);
            let mut seen_inside = false;
            for n in 1..=16u32 {
                let dn = s.localize(n).unwrap();
                let inside = dn.contains(x).unwrap();
                if seen_inside {
                    assert!(inside, "monotonicity broken at n={n}");
                }
                seen_inside = seen_inside || inside;
            }
            assert!(seen_inside, "localization chain never captured {x:?}");
        }
    }

    #[test]
    fn segment_exit_points() {
        let b = ConvexDomain::unit_ball(2);
        let (t, pt) = b.first_exit_on_segment(&[0.0, 0.0], &[2.0, 0.0]).unwrap();
        assert_relative_eq!(t, 0.5);
        assert_relative_eq!(pt[0], 1.0);
        assert!(b.first_exit_on_segment(&[0.0, 0.0], &[0.3, 0.3]).is_none());

        let bx = ConvexDomain::box_domain(vec![1.0, 1.0]).unwrap();
        let (_, pt) = bx.first_exit_on_segment(&[0.9, 0.0], &[1.3, 0.0]).unwrap();
        assert_relative_eq!(pt[0], 1.0);
    }

    #[test]
    fn boundary_projection_is_on_boundary() {
        let domains = vec![
            ConvexDomain::unit_ball(3),
            ConvexDomain::slab(e(3, 2), 0.7).unwrap(),
            ConvexDomain::box_domain(vec![1.0, 0.5, 2.0]).unwrap(),
            ConvexDomain::halfspace(e(3, 0), 1.0).unwrap(),
        ];
        for d in &domains {
            let x = vec![0.1, -0.2, 0.3];
            assert!(d.contains(&x).unwrap());
            let p = d.boundary_projection(&x);
            assert!(d.signed_distance(&p).abs() < 1e-12, "{d:?}");
            // projection distance equals the boundary distance
            let dist: f64 = x.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
            assert_relative_eq!(dist, d.boundary_distance(&x).unwrap(), epsilon = 1e-12);
        }
    }

    proptest! {
        #[test]
        fn convexity_witness_midpoints(seed in 0u64..500) {
            // random pairs inside each domain: midpoint stays inside
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
            let mut next = move || {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
            };
            let domains = vec![
                ConvexDomain::unit_ball(2),
                ConvexDomain::box_domain(vec![1.0, 2.0]).unwrap(),
                ConvexDomain::slab(vec![1.0, 0.0], 1.0).unwrap(),
            ];
            for d in &domains {
                let mut pts = Vec::new();
                while pts.len() < 2 {
                    let cand = vec![next() * 2.0, next() * 2.0];
                    if d.contains_unchecked(&cand) {
                        pts.push(cand);
                    }
                }
                let mid: Vec<f64> = pts[0].iter().zip(&pts[1]).map(|(a, b)| 0.5 * (a + b)).collect();
                prop_assert!(d.contains_unchecked(&mid));
            }
        }

        #[test]
        fn supporting_halfspace_separates(x0 in -0.99f64..0.99, x1 in -0.99f64..0.99) {
            let b = ConvexDomain::unit_ball(2);
            let x = vec![x0 * 0.7, x1 * 0.7];
            let proj = b.boundary_projection(&x);
            let h = b.supporting_halfspace(&proj).unwrap();
            // interior points satisfy normal . x <= offset
            prop_assert!(dot(&h.normal, &x) <= h.offset + 1e-12);
        }

        #[test]
        fn distance_positive_iff_contains(x0 in -2.0f64..2.0, x1 in -2.0f64..2.0) {
            let b = ConvexDomain::box_domain(vec![1.0, 1.5]).unwrap();
            let x = vec![x0, x1];
            let inside = b.contains(&x).unwrap();
            prop_assert_eq!(inside, b.signed_distance(&x) > 0.0);
            if inside {
                prop_assert!(b.boundary_distance(&x).unwrap() > 0.0);
            } else {
                prop_assert!(b.boundary_distance(&x).is_err());
            }
        }
    }
}
