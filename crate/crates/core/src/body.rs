//! Compact convex bodies represented by exact support-function oracles.

use std::sync::Arc;

use rayon::prelude::*;

use crate::ball_intersection::BallIntersection;
use crate::error::{ensure_dim, Error, Result};
use crate::grid::{DirectionGrid, GridSpec};
use crate::similarity::Similarity;
use crate::tol::UNIT_NORM_TOL;
use crate::vector::{dot, norm, Vector};

/// An immutable compact convex body in `R^n`. Cloning is cheap.
#[derive(Debug, Clone)]
pub struct Body {
    dim: usize,
    expr: Arc<BodyExpr>,
}

#[derive(Debug)]
pub enum BodyExpr {
    /// Convex hull of finitely many points.
    PointHull(Vec<Vector>),
    Ball { center: Vector, radius: f64 },
    BallIntersection(BallIntersection),
    /// `Σ α_i Y_i` with `α_i >= 0`.
    MinkComb(Vec<(f64, Body)>),
    SimImage { map: Similarity, inner: Body },
    /// `-Y`
    Reflected(Body),
}

impl Body {
    fn wrap(dim: usize, expr: BodyExpr) -> Self {
        Self {
            dim,
            expr: Arc::new(expr),
        }
    }

    pub fn point_hull(points: Vec<Vector>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("point hull needs at least one point"))?;
        let dim = first.dim();
        for p in &points {
            ensure_dim(dim, p.dim())?;
        }
        Ok(Self::wrap(dim, BodyExpr::PointHull(points)))
    }

    pub fn point(p: Vector) -> Self {
        Self::wrap(p.dim(), BodyExpr::PointHull(vec![p]))
    }

    pub fn ball(center: Vector, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius >= 0.0) {
            return Err(Error::invalid(format!(
                "ball radius must be non-negative, got {radius}"
            )));
        }
        Ok(Self::wrap(center.dim(), BodyExpr::Ball { center, radius }))
    }

    /// The closed unit ball `B^n` centered at the origin.
    pub fn unit_ball(dim: usize) -> Self {
        Self::wrap(
            dim,
            BodyExpr::Ball {
                center: Vector::zeros(dim),
                radius: 1.0,
            },
        )
    }

    pub fn ball_intersection(centers: Vec<Vector>, radii: Vec<f64>) -> Result<Self> {
        let bi = BallIntersection::new(centers, radii)?;
        Ok(Self::wrap(bi.dim(), BodyExpr::BallIntersection(bi)))
    }

    /// Minkowski combination `Σ α_i Y_i`.
    pub fn minkowski(terms: Vec<(f64, Body)>) -> Result<Self> {
        let dim = terms
            .first()
            .ok_or_else(|| Error::invalid("Minkowski combination needs at least one term"))?
            .1
            .dim;
        for (coef, body) in &terms {
            if !(coef.is_finite() && *coef >= 0.0) {
                return Err(Error::invalid(format!(
                    "Minkowski coefficients must be non-negative, got {coef}"
                )));
            }
            ensure_dim(dim, body.dim)?;
        }
        Ok(Self::wrap(dim, BodyExpr::MinkComb(terms)))
    }

    /// `tY + (1 - t)Z`
    pub fn convex_combination(t: f64, y: &Body, z: &Body) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("convex weight must lie in [0, 1], got {t}")));
        }
        Self::minkowski(vec![(t, y.clone()), (1.0 - t, z.clone())])
    }

    /// The image `gY`.
    pub fn apply_similarity(&self, g: &Similarity) -> Result<Self> {
        ensure_dim(self.dim, g.dim())?;
        Ok(Self::wrap(
            self.dim,
            BodyExpr::SimImage {
                map: g.clone(),
                inner: self.clone(),
            },
        ))
    }

    pub fn translated(&self, v: &Vector) -> Result<Self> {
        self.apply_similarity(&Similarity::translation(v.clone()))
    }

    pub fn reflected(&self) -> Self {
        Self::wrap(self.dim, BodyExpr::Reflected(self.clone()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn expr(&self) -> &BodyExpr {
        &self.expr
    }

    /// `h_Y(u) = max{⟨y, u⟩ : y ∈ Y}` for a unit vector `u`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_direction(u)?;
        Ok(self.support_raw(u))
    }

    /// A point of `Y` at which `⟨·, u⟩` attains `h_Y(u)`.
    pub fn support_point(&self, u: &[f64]) -> Result<Vector> {
        self.check_direction(u)?;
        Ok(Vector::from_raw(self.support_point_raw(u)))
    }

    fn check_direction(&self, u: &[f64]) -> Result<()> {
        ensure_dim(self.dim, u.len())?;
        let n = norm(u);
        if (n - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NonUnitDirection { norm: n });
        }
        Ok(())
    }

    pub(crate) fn support_raw(&self, u: &[f64]) -> f64 {
        match &*self.expr {
            BodyExpr::PointHull(points) => points
                .iter()
                .map(|p| dot(p, u))
                .fold(f64::NEG_INFINITY, f64::max),
            BodyExpr::Ball { center, radius } => dot(center, u) + radius,
            BodyExpr::BallIntersection(bi) => bi.support(u),
            BodyExpr::MinkComb(terms) => terms
                .iter()
                .map(|(coef, body)| coef * body.support_raw(u))
                .sum(),
            BodyExpr::SimImage { map, inner } => {
                dot(map.translation_vector(), u)
                    + map.ratio() * inner.support_raw(&map.rotate_transpose(u))
            }
            BodyExpr::Reflected(inner) => {
                let neg: Vec<f64> = u.iter().map(|x| -x).collect();
                inner.support_raw(&neg)
            }
        }
    }

    pub(crate) fn support_point_raw(&self, u: &[f64]) -> Vec<f64> {
        match &*self.expr {
            BodyExpr::PointHull(points) => {
                let mut best = &points[0];
                let mut best_val = dot(best, u);
                for p in &points[1..] {
                    let val = dot(p, u);
                    if val > best_val {
                        best = p;
                        best_val = val;
                    }
                }
                best.as_slice().to_vec()
            }
            BodyExpr::Ball { center, radius } => crate::vector::axpy(center, *radius, u),
            BodyExpr::BallIntersection(bi) => bi.support_point(u),
            BodyExpr::MinkComb(terms) => {
                let mut acc = vec![0.0; self.dim];
                for (coef, body) in terms {
                    for (a, p) in acc.iter_mut().zip(body.support_point_raw(u)) {
                        *a += coef * p;
                    }
                }
                acc
            }
            BodyExpr::SimImage { map, inner } => {
                map.apply(&inner.support_point_raw(&map.rotate_transpose(u)))
            }
            BodyExpr::Reflected(inner) => {
                let neg: Vec<f64> = u.iter().map(|x| -x).collect();
                inner.support_point_raw(&neg).into_iter().map(|x| -x).collect()
            }
        }
    }

    /// A finite set whose convex hull is `Y`, when the expression reduces to
    /// one with at most `limit` points.
    pub fn finite_points(&self, limit: usize) -> Option<Vec<Vec<f64>>> {
        match &*self.expr {
            BodyExpr::PointHull(points) if points.len() <= limit => {
                Some(points.iter().map(|p| p.as_slice().to_vec()).collect())
            }
            BodyExpr::Ball { center, radius } if *radius == 0.0 => {
                Some(vec![center.as_slice().to_vec()])
            }
            BodyExpr::SimImage { map, inner } => {
                Some(inner.finite_points(limit)?.iter().map(|p| map.apply(p)).collect())
            }
            BodyExpr::Reflected(inner) => Some(
                inner
                    .finite_points(limit)?
                    .into_iter()
                    .map(|p| p.into_iter().map(|x| -x).collect())
                    .collect(),
            ),
            BodyExpr::MinkComb(terms) => {
                let mut acc = vec![vec![0.0; self.dim]];
                for (coef, body) in terms {
                    let pts = body.finite_points(limit)?;
                    if acc.len() * pts.len() > limit {
                        return None;
                    }
                    acc = acc
                        .iter()
                        .flat_map(|a| pts.iter().map(move |p| crate::vector::axpy(a, *coef, p)))
                        .collect();
                }
                Some(acc)
            }
            _ => None,
        }
    }

    /// Support values on every grid direction, in grid order.
    pub fn sample_support(&self, grid: &DirectionGrid) -> Result<SupportSample> {
        ensure_dim(self.dim, grid.dim())?;
        let values = grid
            .directions()
            .par_iter()
            .map(|u| self.support_raw(u))
            .collect();
        Ok(SupportSample {
            grid: grid.spec(),
            values,
        })
    }
}

/// Support function values `h_Y(u_k)` on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSample {
    pub grid: GridSpec,
    pub values: Vec<f64>,
}

impl SupportSample {
    /// `max_k |h_Y(u_k) - h_Z(u_k)|`
    pub fn sup_distance(&self, other: &SupportSample) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::invalid(format!(
                "support samples come from different grids: {:?} vs {:?}",
                self.grid, other.grid
            )));
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    fn reuleaux(d: f64) -> Body {
        Body::ball_intersection(
            vec![v(&[0.0, 0.0]), v(&[d, 0.0]), v(&[d / 2.0, d * 3f64.sqrt() / 2.0])],
            vec![d, d, d],
        )
        .unwrap()
    }

    #[test]
    fn unit_ball_support_is_one() {
        assert_eq!(Body::unit_ball(2).support(&[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn reuleaux_support_values() {
        let d = 1.7;
        let k = reuleaux(d);
        let at = |t: f64| k.support(&[t.cos(), t.sin()]).unwrap();
        assert!((at(PI / 6.0) - d).abs() < 1e-12);
        assert!(at(7.0 * PI / 6.0).abs() < 1e-12);
        assert!((at(PI / 2.0) - 3f64.sqrt() * d / 2.0).abs() < 1e-12);
    }

    #[test]
    fn minkowski_support_is_linear() {
        let body = Body::minkowski(vec![
            (2.0, Body::unit_ball(2)),
            (3.0, Body::ball(v(&[1.0, 0.0]), 1.0).unwrap()),
        ])
        .unwrap();
        assert_eq!(body.support(&[1.0, 0.0]).unwrap(), 8.0);
    }

    #[test]
    fn minkowski_rejects_negative_coefficients() {
        let err = Body::minkowski(vec![(-1.0, Body::unit_ball(2))]);
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        assert!(Body::minkowski(vec![]).is_err());
    }

    #[test]
    fn support_validates_direction() {
        let b = Body::unit_ball(3);
        assert!(matches!(
            b.support(&[1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            b.support(&[1.0, 1.0, 0.0]),
            Err(Error::NonUnitDirection { .. })
        ));
        assert!(Body::minkowski(vec![(1.0, Body::unit_ball(2)), (1.0, b)]).is_err());
    }

    #[test]
    fn translation_shifts_support() {
        let shift = v(&[0.5, -2.0]);
        let b = Body::unit_ball(2).translated(&shift).unwrap();
        let grid = DirectionGrid::new(2, 64).unwrap();
        for u in grid.directions() {
            assert!((b.support(u).unwrap() - (1.0 + shift.dot(u))).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_similarity_leaves_support_unchanged() {
        let k = reuleaux(1.0);
        let image = k.apply_similarity(&Similarity::identity(2)).unwrap();
        let grid = DirectionGrid::new(2, 256).unwrap();
        assert_eq!(
            k.sample_support(&grid).unwrap(),
            image.sample_support(&grid).unwrap()
        );
    }

    #[test]
    fn rotated_reuleaux_support_is_shifted_in_angle() {
        let k = reuleaux(1.0);
        for (alpha, t) in [(0.3, 1.1), (2.0, 5.0), (4.4, 0.2)] {
            let ka = k.apply_similarity(&Similarity::rotation_2d(alpha)).unwrap();
            let lhs = ka.support(&[f64::cos(t), f64::sin(t)]).unwrap();
            let rhs = k.support(&[f64::cos(t - alpha), f64::sin(t - alpha)]).unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_constant_bodies() {
        let grid = DirectionGrid::new(2, 32).unwrap();
        let ones = Body::unit_ball(2).sample_support(&grid).unwrap();
        assert!(ones.values.iter().all(|&h| h == 1.0));
        let zeros = Body::point(Vector::zeros(2)).sample_support(&grid).unwrap();
        assert!(zeros.values.iter().all(|&h| h == 0.0));
        assert!(Body::unit_ball(3).sample_support(&grid).is_err());
    }

    #[test]
    fn reuleaux_sample_on_twelve_directions() {
        let d = 2.5;
        let grid = DirectionGrid::new(2, 12).unwrap();
        let s = reuleaux(d).sample_support(&grid).unwrap();
        assert!((s.values[0] - d).abs() < 1e-12);
        assert!(s.values[6].abs() < 1e-12);
    }

    #[test]
    fn balls_add() {
        let a = Body::ball(v(&[1.0, 2.0]), 0.5).unwrap();
        let b = Body::ball(v(&[-3.0, 0.5]), 1.5).unwrap();
        let sum = Body::minkowski(vec![(1.0, a), (1.0, b)]).unwrap();
        let direct = Body::ball(v(&[-2.0, 2.5]), 2.0).unwrap();
        let grid = DirectionGrid::new(2, 128).unwrap();
        let d = sum
            .sample_support(&grid)
            .unwrap()
            .sup_distance(&direct.sample_support(&grid).unwrap())
            .unwrap();
        assert!(d < 1e-14);
    }

    #[test]
    fn support_points_attain_support() {
        let k = reuleaux(1.0);
        let body = Body::minkowski(vec![
            (0.5, k.apply_similarity(&Similarity::planar(0.7, 1.3, [1.0, 2.0], true).unwrap()).unwrap()),
            (0.5, k.reflected()),
            (1.0, Body::point_hull(vec![v(&[0.0, 1.0]), v(&[2.0, -1.0]), v(&[0.3, 0.3])]).unwrap()),
        ])
        .unwrap();
        let grid = DirectionGrid::new(2, 360).unwrap();
        for u in grid.directions() {
            let p = body.support_point(u).unwrap();
            assert!((p.dot(u) - body.support(u).unwrap()).abs() < 1e-12);
        }
    }

    fn arb_body() -> impl Strategy<Value = Body> {
        let pts = prop::collection::vec(prop::array::uniform2(-3.0f64..3.0), 1..8).prop_map(|ps| {
            Body::point_hull(ps.iter().map(|p| v(p)).collect()).unwrap()
        });
        let ball = (prop::array::uniform2(-3.0f64..3.0), 0.0f64..2.0)
            .prop_map(|(c, r)| Body::ball(v(&c), r).unwrap());
        let reul = (0.1f64..3.0, 0.0..std::f64::consts::TAU, prop::array::uniform2(-2.0f64..2.0))
            .prop_map(|(d, a, t)| {
                reuleaux(d)
                    .apply_similarity(&Similarity::planar(a, 1.0, t, false).unwrap())
                    .unwrap()
            });
        let leaf = prop_oneof![pts, ball, reul];
        leaf.prop_recursive(2, 8, 3, |inner| {
            prop_oneof![
                prop::collection::vec((0.0f64..2.0, inner.clone()), 1..3)
                    .prop_map(|terms| Body::minkowski(terms).unwrap()),
                inner.clone().prop_map(|b| b.reflected()),
            ]
        })
    }

    fn unit(t: f64) -> [f64; 2] {
        [t.cos(), t.sin()]
    }

    proptest! {
        #[test]
        fn support_is_sublinear(body in arb_body(), s in 0.0..std::f64::consts::TAU, t in 0.0..std::f64::consts::TAU) {
            let (u, w) = (unit(s), unit(t));
            let sum = [u[0] + w[0], u[1] + w[1]];
            let len = norm(&sum);
            prop_assume!(len > 1e-6);
            let dir = [sum[0] / len, sum[1] / len];
            let lhs = body.support(&dir).unwrap() * len;
            let rhs = body.support(&u).unwrap() + body.support(&w).unwrap();
            prop_assert!(lhs <= rhs + 1e-8);
        }

        #[test]
        fn point_hull_support_is_brute_force_max(
            pts in prop::collection::vec(prop::array::uniform3(-5.0f64..5.0), 1..20),
            dir in prop::array::uniform3(-1.0f64..1.0),
        ) {
            let len = norm(&dir);
            prop_assume!(len > 1e-3);
            let u: Vec<f64> = dir.iter().map(|x| x / len).collect();
            let body = Body::point_hull(pts.iter().map(|p| v(p)).collect()).unwrap();
            let mut expected = f64::NEG_INFINITY;
            for p in &pts {
                let val = p[0] * u[0] + p[1] * u[1] + p[2] * u[2];
                if val > expected { expected = val; }
            }
            prop_assert_eq!(body.support(&u).unwrap(), expected);
        }
    }
}
