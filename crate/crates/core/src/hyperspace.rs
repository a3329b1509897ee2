//! The structural maps between hyperspaces: `η(Y) = (ω(Y), 𝒞(Y))`, the
//! embedding `e(Y) = (Y, Y)`, `Φ(Y, Z) = ½(Y + Z)`, and the fiber
//! homotopies witnessing that their point-inverses are contractible.

use serde::Serialize;

use crate::body::{Body, BodyExpr};
use crate::calculus::{relative_width_sample, width_report, WidthReport};
use crate::chebyshev::{chebyshev, ChebyshevOptions};
use crate::error::{ensure_dim, Error, Result};
use crate::grid::DirectionGrid;
use crate::vector::{dot, norm, Vector};

/// Relative tolerance on widths when comparing fiber points.
pub const FIBER_WIDTH_TOL: f64 = 1e-7;
/// Relative tolerance on Chebyshev centers when comparing fiber points.
pub const FIBER_CENTER_TOL: f64 = 1e-5;

/// An ordered pair `(Y, Z)`, optionally certified to have constant relative
/// width on a grid.
#[derive(Debug, Clone)]
pub struct BodyPair {
    pub left: Body,
    pub right: Body,
    certified_width: Option<f64>,
}

impl BodyPair {
    pub fn new(left: Body, right: Body) -> Result<Self> {
        ensure_dim(left.dim(), right.dim())?;
        Ok(Self {
            left,
            right,
            certified_width: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.left.dim()
    }

    pub fn certified_width(&self) -> Option<f64> {
        self.certified_width
    }

    /// Certifies constant relative width `d` when `h_Y(u) + h_Z(-u)` varies by
    /// at most `tol · max(1, d)` over every grid direction.
    pub fn certify(mut self, grid: &DirectionGrid, tol: f64) -> Result<Self> {
        let w = relative_width_sample(&self.left, &self.right, grid)?;
        let (lo, hi) = w
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        let spread = hi - lo;
        if spread > tol * mean.abs().max(1.0) {
            return Err(Error::NotConstantRelativeWidth { spread });
        }
        self.certified_width = Some(mean.clamp(lo, hi));
        Ok(self)
    }

    fn ensure_certified(&self, grid: &DirectionGrid, tol: f64) -> Result<(BodyPair, f64)> {
        let pair = match self.certified_width {
            Some(_) => self.clone(),
            None => self.clone().certify(grid, tol)?,
        };
        let d = pair.certified_width.expect("certified");
        Ok((pair, d))
    }

    /// `t(Y, Z) + (1 - t)(A, E)`, componentwise. The result is uncertified.
    pub fn convex_combination(t: f64, first: &BodyPair, second: &BodyPair) -> Result<BodyPair> {
        BodyPair::new(
            Body::convex_combination(t, &first.left, &second.left)?,
            Body::convex_combination(t, &first.right, &second.right)?,
        )
    }
}

/// A point `(d, x)` of `D × R^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiberPoint {
    pub width: f64,
    pub center: Vector,
}

impl FiberPoint {
    pub fn new(width: f64, center: Vector) -> Result<Self> {
        if !(width.is_finite() && width >= 0.0) {
            return Err(Error::invalid(format!("fiber width must be >= 0, got {width}")));
        }
        Ok(Self { width, center })
    }

    /// Same fiber within `(FIBER_WIDTH_TOL, FIBER_CENTER_TOL)`, both scaled by `1 + d`.
    pub fn matches(&self, other: &FiberPoint) -> bool {
        let scale = 1.0 + self.width.abs();
        (self.width - other.width).abs() <= FIBER_WIDTH_TOL * scale
            && self.center.distance(&other.center) <= FIBER_CENTER_TOL * scale
    }
}

/// `η(Y) = (ω(Y), 𝒞(Y))` for a body of constant width.
pub fn eta(y: &Body, grid: &DirectionGrid, tol: f64) -> Result<FiberPoint> {
    let report = width_report(y, grid)?;
    if report.spread > tol * report.mean_width.abs().max(1.0) {
        return Err(Error::NotConstantWidth {
            spread: report.spread,
        });
    }
    let cheb = chebyshev(y, grid, &ChebyshevOptions::default())?;
    FiberPoint::new(report.mean_width, cheb.center)
}

/// The ball `B(x, d/2)`, the point of the fiber over `(d, x)` that the
/// homotopy contracts to.
pub fn fiber_ball(fiber: &FiberPoint) -> Result<Body> {
    Body::ball(fiber.center.clone(), fiber.width / 2.0)
}

/// `H(A, t) = tA + (1 - t)B` with `B = B(x, d/2)`; stays in the fiber over `(d, x)`.
pub fn eta_fiber_homotopy(
    a: &Body,
    t: f64,
    fiber: &FiberPoint,
    grid: &DirectionGrid,
    tol: f64,
) -> Result<Body> {
    ensure_dim(a.dim(), fiber.center.dim())?;
    let actual = eta(a, grid, tol)?;
    if !actual.matches(fiber) {
        return Err(Error::FiberMismatch(format!(
            "body lies over ({}, {:?}), not ({}, {:?})",
            actual.width,
            actual.center.as_slice(),
            fiber.width,
            fiber.center.as_slice()
        )));
    }
    Body::convex_combination(t, a, &fiber_ball(fiber)?)
}

/// `e(Y) = (Y, Y)`
pub fn embed_pair(y: &Body) -> BodyPair {
    BodyPair {
        left: y.clone(),
        right: y.clone(),
        certified_width: None,
    }
}

/// `Φ(Y, Z) = ½(Y + Z)`; rejects pairs that do not certify on `grid`.
pub fn phi(pair: &BodyPair, grid: &DirectionGrid, tol: f64) -> Result<Body> {
    let (pair, _) = pair.ensure_certified(grid, tol)?;
    Body::minkowski(vec![(0.5, pair.left), (0.5, pair.right)])
}

/// `t P₁ + (1 - t) P₂` for two pairs in the same fiber of `Φ`.
pub fn phi_fiber_combination(
    first: &BodyPair,
    second: &BodyPair,
    t: f64,
    grid: &DirectionGrid,
    tol: f64,
) -> Result<BodyPair> {
    let (e1, e2) = (phi(first, grid, tol)?, phi(second, grid, tol)?);
    let s1 = e1.sample_support(grid)?;
    let gap = s1.sup_distance(&e2.sample_support(grid)?)?;
    let d = first.certified_width.or(second.certified_width).unwrap_or(1.0);
    if gap > FIBER_WIDTH_TOL * (1.0 + d.abs()) {
        return Err(Error::FiberMismatch(format!(
            "Φ images differ by {gap:e} in the support norm"
        )));
    }
    BodyPair::convex_combination(t, first, second)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaeharaReport {
    /// Certified relative width of the pair.
    pub d: f64,
    /// Width report of `Y + Z`.
    pub sum_width: WidthReport,
    /// `|mean width of Y + Z - 2d|`
    pub mean_error: f64,
    pub passed: bool,
}

/// Width of `Y + Z` for a pair of constant relative width `d`; passes when the
/// sum has constant width `2d` (mean within `1e-8`, spread within `tol`).
pub fn maehara_check(pair: &BodyPair, grid: &DirectionGrid, tol: f64) -> Result<MaeharaReport> {
    let (pair, d) = pair.ensure_certified(grid, tol)?;
    let sum = Body::minkowski(vec![(1.0, pair.left), (1.0, pair.right)])?;
    let report = width_report(&sum, grid)?;
    let mean_error = (report.mean_width - 2.0 * d).abs();
    let passed = mean_error <= 1e-8 && report.spread <= tol * (2.0 * d).max(1.0);
    Ok(MaeharaReport {
        d,
        sum_width: report,
        mean_error,
        passed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProperBoundReport {
    pub bound: f64,
    pub samples: usize,
    pub max_norm_left: f64,
    pub max_norm_right: f64,
    /// Largest `|‖y‖² + ‖z‖² - ½(‖y+z‖² + ‖y-z‖²)|` over sampled pairs.
    pub max_parallelogram_residual: f64,
    pub passed: bool,
}

/// Boundary points: support points on `count` grid directions, plus all hull
/// vertices for point hulls.
fn boundary_samples(body: &Body, grid: &DirectionGrid) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = grid
        .directions()
        .iter()
        .map(|u| body.support_point_raw(u))
        .collect();
    if let BodyExpr::PointHull(vertices) = body.expr() {
        pts.extend(vertices.iter().map(|v| v.as_slice().to_vec()));
    }
    pts
}

/// Checks the containment `Y, Z ⊂ B(0, 2M)` that makes `Φ` proper, on
/// sampled boundary points, together with the parallelogram identity used
/// to derive it.
pub fn properness_bound_check(
    pair: &BodyPair,
    bound: f64,
    grid: &DirectionGrid,
    samples: usize,
    tol: f64,
) -> Result<ProperBoundReport> {
    let (pair, d) = pair.ensure_certified(grid, tol)?;
    if !(bound.is_finite() && bound > 0.0) || d > bound * (1.0 + tol) {
        return Err(Error::InvalidBound(format!(
            "bound M = {bound} must be positive and at least the relative width {d}"
        )));
    }
    let half_sum = Body::minkowski(vec![(0.5, pair.left.clone()), (0.5, pair.right.clone())])?;
    let h = half_sum.sample_support(grid)?;
    if let Some(max_h) = h.values.iter().cloned().reduce(f64::max) {
        if max_h > bound * (1.0 + tol) {
            return Err(Error::InvalidBound(format!(
                "½(Y + Z) reaches {max_h}, beyond M = {bound}"
            )));
        }
    }
    let sample_grid = DirectionGrid::new(pair.dim(), samples.max(2) + samples % 2)?;
    let ys = boundary_samples(&pair.left, &sample_grid);
    let zs = boundary_samples(&pair.right, &sample_grid);
    let max_norm_left = ys.iter().map(|y| norm(y)).fold(0.0, f64::max);
    let max_norm_right = zs.iter().map(|z| norm(z)).fold(0.0, f64::max);
    let mut residual = 0.0f64;
    for y in &ys {
        for z in &zs {
            let s: Vec<f64> = y.iter().zip(z).map(|(a, b)| a + b).collect();
            let t: Vec<f64> = y.iter().zip(z).map(|(a, b)| a - b).collect();
            let lhs = dot(y, y) + dot(z, z);
            let rhs = 0.5 * (dot(&s, &s) + dot(&t, &t));
            residual = residual.max((lhs - rhs).abs() / lhs.max(1.0));
        }
    }
    let passed = max_norm_left < 2.0 * bound && max_norm_right < 2.0 * bound && residual <= 1e-12;
    Ok(ProperBoundReport {
        bound,
        samples: ys.len().max(zs.len()),
        max_norm_left,
        max_norm_right,
        max_parallelogram_residual: residual,
        passed,
    })
}
