//! Chebyshev (minimal enclosing) balls.
//!
//! Point sets use Welzl's move-to-front recursion. Bodies given by a support
//! oracle are reduced to the discretized minimax problem
//!
//! ```text
//! minimize R  subject to  h(u_k) - ⟨c, u_k⟩ <= R  for every grid direction u_k,
//! ```
//!
//! an LP in the `n + 1` unknowns `(c, R)`. It is solved through its dual,
//! `maximize Σ μ_k h(u_k)` over probability weights with `Σ μ_k u_k = 0`,
//! by a two-phase revised simplex whose basis never exceeds `n + 1` columns.

use nalgebra::{DMatrix, DVector};
use serde::{Serialize, Serializer};

use crate::body::{Body, SupportSample};
use crate::error::{ensure_dim, Error, Result};
use crate::grid::DirectionGrid;
use crate::vector::{distance, dot, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct ChebyshevData {
    pub center: Vector,
    pub radius: f64,
    /// Grid indices where `h(u) - ⟨c, u⟩` is within tolerance of the radius.
    pub active_dirs: Vec<usize>,
}

impl Serialize for ChebyshevData {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("center", &self.center)?;
        m.serialize_entry("radius", &self.radius)?;
        m.serialize_entry("active_count", &self.active_dirs.len())?;
        m.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevOptions {
    /// Relative minimax gap accepted at termination.
    pub tol: f64,
    /// Pivot budget for the simplex solver.
    pub budget: usize,
    /// Relative slack for reporting active directions.
    pub active_tol: f64,
}

impl Default for ChebyshevOptions {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            budget: 5000,
            active_tol: 1e-7,
        }
    }
}

/// Smallest ball containing every point.
pub fn min_enclosing_ball_points(points: &[Vector]) -> Result<ChebyshevData> {
    let first = points
        .first()
        .ok_or_else(|| Error::invalid("minimal enclosing ball of an empty point set"))?;
    let dim = first.dim();
    for p in points {
        ensure_dim(dim, p.dim())?;
    }
    let mut pts: Vec<Vec<f64>> = points.iter().map(|p| p.as_slice().to_vec()).collect();
    let mut support = Vec::with_capacity(dim + 1);
    let ball = move_to_front(&mut pts, points.len(), &mut support, dim);
    let center = ball.center.expect("non-empty point set");
    // Report the exact enclosing radius about the computed center.
    let radius = points
        .iter()
        .map(|p| distance(p, &center))
        .fold(0.0, f64::max);
    Ok(ChebyshevData {
        center: Vector::from_raw(center),
        radius,
        active_dirs: Vec::new(),
    })
}

struct Ball {
    center: Option<Vec<f64>>,
    radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64]) -> bool {
        match &self.center {
            None => false,
            Some(c) => distance(c, p) <= self.radius + 1e-12 * (1.0 + self.radius),
        }
    }
}

fn move_to_front(
    pts: &mut [Vec<f64>],
    end: usize,
    support: &mut Vec<Vec<f64>>,
    dim: usize,
) -> Ball {
    let mut ball = ball_through(support);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        if !ball.contains(&pts[i]) {
            support.push(pts[i].clone());
            ball = move_to_front(pts, i, support, dim);
            support.pop();
            pts[..=i].rotate_right(1);
        }
    }
    ball
}

/// Smallest ball with every support point on its boundary.
fn ball_through(support: &[Vec<f64>]) -> Ball {
    let Some(p0) = support.first() else {
        return Ball {
            center: None,
            radius: -1.0,
        };
    };
    let q: Vec<Vec<f64>> = support[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    let k = q.len();
    let mut center = p0.clone();
    if k > 0 {
        let mut gram = vec![vec![0.0; k + 1]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = 2.0 * dot(&q[i], &q[j]);
            }
            gram[i][k] = dot(&q[i], &q[i]);
        }
        let lambda = solve_dense(gram);
        for (l, qi) in lambda.iter().zip(&q) {
            for (c, x) in center.iter_mut().zip(qi) {
                *c += l * x;
            }
        }
    }
    let radius = support
        .iter()
        .map(|p| distance(p, &center))
        .fold(0.0, f64::max);
    Ball {
        center: Some(center),
        radius,
    }
}

/// Minimum-norm least-squares solution of an augmented `k x (k+1)` system;
/// directions with a negligible singular value are dropped.
fn solve_dense(a: Vec<Vec<f64>>) -> Vec<f64> {
    let k = a.len();
    let m = DMatrix::from_fn(k, k, |i, j| a[i][j]);
    let rhs = DVector::from_fn(k, |i, _| a[i][k]);
    let svd = m.svd(true, true);
    let eps = 1e-13 * svd.singular_values.max().max(f64::MIN_POSITIVE);
    match svd.solve(&rhs, eps) {
        Ok(x) => x.iter().copied().collect(),
        Err(_) => vec![0.0; k],
    }
}

/// Inverse of a small square matrix; `None` if singular.
fn invert(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let inv = DMatrix::from_fn(n, n, |i, j| m[i][j]).try_inverse()?;
    Some((0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect())
}

/// Result of the discretized minimax solve.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxSolution {
    pub center: Vec<f64>,
    /// `max_k h_k - ⟨c, u_k⟩` at the returned center.
    pub radius: f64,
    /// Dual lower bound `Σ μ_k h_k`.
    pub lower_bound: f64,
    pub pivots: usize,
}

/// Solves `min_c max_k (values[k] - ⟨c, u_k⟩)` exactly on the grid.
pub fn solve_minimax(
    grid: &DirectionGrid,
    values: &[f64],
    budget: usize,
) -> Result<MinimaxSolution> {
    ensure_dim(grid.len(), values.len())?;
    let n = grid.dim();
    let m = n + 1;
    let cols = grid.len();
    let column = |j: usize| -> Vec<f64> {
        if j < cols {
            let mut c = grid.direction(j).as_slice().to_vec();
            c.push(1.0);
            c
        } else {
            let mut c = vec![0.0; m];
            c[j - cols] = 1.0;
            c
        }
    };
    let mut b = vec![0.0; m];
    b[n] = 1.0;
    let scale = values.iter().fold(1.0f64, |s, v| s.max(v.abs()));
    let rc_eps = 1e-12 * scale;

    let mut basis: Vec<usize> = (cols..cols + m).collect();
    let mut pivots = 0usize;
    let mut degenerate_run = 0usize;

    for phase in [1u8, 2u8] {
        let cost = |j: usize| -> f64 {
            match (phase, j < cols) {
                (1, true) => 0.0,
                (1, false) => -1.0,
                (_, true) => values[j],
                (_, false) => f64::NEG_INFINITY,
            }
        };
        loop {
            let bmat: Vec<Vec<f64>> = (0..m)
                .map(|r| basis.iter().map(|&j| column(j)[r]).collect())
                .collect();
            let binv = invert(&bmat).ok_or_else(|| Error::invalid("singular simplex basis"))?;
            let xb: Vec<f64> = binv.iter().map(|row| dot(row, &b)).collect();
            let cb: Vec<f64> = basis
                .iter()
                .map(|&j| if j < cols { cost(j) } else if phase == 1 { -1.0 } else { 0.0 })
                .collect();
            let y: Vec<f64> = (0..m).map(|c| (0..m).map(|r| cb[r] * binv[r][c]).sum()).collect();

            let bland = degenerate_run > 50;
            let mut entering = None;
            let mut best_rc = rc_eps;
            let limit = if phase == 1 { cols + m } else { cols };
            for j in 0..limit {
                if basis.contains(&j) {
                    continue;
                }
                let rc = cost(j) - dot(&y, &column(j));
                if rc > best_rc {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best_rc = rc;
                }
            }
            let Some(j) = entering else {
                if phase == 1 {
                    let infeasibility: f64 = basis
                        .iter()
                        .zip(&xb)
                        .filter(|(&j, _)| j >= cols)
                        .map(|(_, x)| x.abs())
                        .sum();
                    if infeasibility > 1e-9 {
                        return Err(Error::invalid(
                            "grid directions do not surround the origin",
                        ));
                    }
                    // Drive zero-level artificials out of the basis.
                    for pos in 0..m {
                        if basis[pos] < cols {
                            continue;
                        }
                        let replacement = (0..cols).find(|&c| {
                            !basis.contains(&c) && dot(&binv[pos], &column(c)).abs() > 1e-9
                        });
                        if let Some(c) = replacement {
                            basis[pos] = c;
                        }
                    }
                    if basis.iter().any(|&j| j >= cols) {
                        return Err(Error::invalid("grid directions do not span the space"));
                    }
                    break;
                }
                let center = y[..n].to_vec();
                let radius = (0..cols)
                    .map(|k| values[k] - dot(&center, grid.direction(k)))
                    .fold(f64::NEG_INFINITY, f64::max);
                let lower_bound = dot(&cb, &xb);
                return Ok(MinimaxSolution {
                    center,
                    radius,
                    lower_bound,
                    pivots,
                });
            };
            let d: Vec<f64> = binv.iter().map(|row| dot(row, &column(j))).collect();
            let mut leave = None;
            let mut best_ratio = f64::INFINITY;
            for i in 0..m {
                if d[i] > 1e-12 {
                    let ratio = xb[i].max(0.0) / d[i];
                    let better = ratio < best_ratio - 1e-15
                        || (ratio <= best_ratio + 1e-15
                            && leave.is_some_and(|l: usize| basis[i] < basis[l]));
                    if leave.is_none() || better {
                        best_ratio = ratio;
                        leave = Some(i);
                    }
                }
            }
            let Some(i) = leave else {
                return Err(Error::invalid("minimax dual is unbounded"));
            };
            degenerate_run = if best_ratio <= 1e-15 { degenerate_run + 1 } else { 0 };
            basis[i] = j;
            pivots += 1;
            if pivots > budget {
                return Err(Error::MaxIterations {
                    iterations: budget,
                    gap: f64::NAN,
                });
            }
        }
    }
    unreachable!("phase two always returns")
}

fn active_directions(sample: &SupportSample, grid: &DirectionGrid, center: &[f64], radius: f64, tol: f64) -> Vec<usize> {
    let slack = tol * (1.0 + radius);
    (0..grid.len())
        .filter(|&k| sample.values[k] - dot(center, grid.direction(k)) >= radius - slack)
        .collect()
}

/// Chebyshev ball of `Y`. Bodies that reduce to a finite point set use the
/// exact point-set solver; others solve the discretized minimax problem on
/// `grid`.
/// For each point on the Chebyshev sphere, the grid direction closest to
/// its outward normal.
fn contact_directions(points: &[Vector], grid: &DirectionGrid, ball: &ChebyshevData, tol: f64) -> Vec<usize> {
    let mut dirs: Vec<usize> = points
        .iter()
        .filter(|p| ball.radius > 0.0 && p.distance(&ball.center) >= ball.radius * (1.0 - tol))
        .map(|p| {
            let normal = p.sub(&ball.center);
            (0..grid.len())
                .max_by(|&a, &b| normal.dot(grid.direction(a)).total_cmp(&normal.dot(grid.direction(b))))
                .expect("grid is non-empty")
        })
        .collect();
    dirs.sort_unstable();
    dirs.dedup();
    dirs
}

/// Largest point set handed to the exact solver.
const EXACT_POINT_LIMIT: usize = 4096;

pub fn chebyshev(y: &Body, grid: &DirectionGrid, opts: &ChebyshevOptions) -> Result<ChebyshevData> {
    ensure_dim(y.dim(), grid.dim())?;
    let sample = y.sample_support(grid)?;
    if let Some(points) = y.finite_points(EXACT_POINT_LIMIT) {
        let points: Vec<Vector> = points.into_iter().map(Vector::from_raw).collect();
        let mut data = min_enclosing_ball_points(&points)?;
        data.active_dirs = contact_directions(&points, grid, &data, opts.active_tol);
        return Ok(data);
    }
    let sol = solve_minimax(grid, &sample.values, opts.budget)?;
    let gap = sol.radius - sol.lower_bound;
    if gap > opts.tol * (1.0 + sol.radius.abs()) {
        return Err(Error::MaxIterations {
            iterations: sol.pivots,
            gap,
        });
    }
    let active_dirs = active_directions(&sample, grid, &sol.center, sol.radius, opts.active_tol);
    Ok(ChebyshevData {
        center: Vector::from_raw(sol.center),
        radius: sol.radius,
        active_dirs,
    })
}

/// Subgradient descent on `c ↦ max_k (h_k - ⟨c, u_k⟩)` with steps `R₀/√k`
/// and step-weighted averaging of the iterates.
pub fn chebyshev_subgradient(
    sample: &SupportSample,
    grid: &DirectionGrid,
    iterations: usize,
) -> Result<ChebyshevData> {
    if sample.grid != grid.spec() {
        return Err(Error::invalid("support sample does not belong to this grid"));
    }
    let n = grid.dim();
    let objective = |c: &[f64]| -> (f64, usize) {
        let mut best = (f64::NEG_INFINITY, 0);
        for k in 0..grid.len() {
            let r = sample.values[k] - dot(c, grid.direction(k));
            if r > best.0 {
                best = (r, k);
            }
        }
        best
    };
    // Start from the discrete Steiner point.
    let mut c = vec![0.0; n];
    for k in 0..grid.len() {
        for (ci, ui) in c.iter_mut().zip(grid.direction(k).iter()) {
            *ci += sample.values[k] * ui * n as f64 / grid.len() as f64;
        }
    }
    let (r0, _) = objective(&c);
    let r0 = r0.abs().max(1e-12);
    let mut avg = vec![0.0; n];
    let mut weight = 0.0;
    let (mut best_c, mut best_r) = (c.clone(), r0);
    for k in 1..=iterations {
        let (r, arg) = objective(&c);
        if r < best_r {
            best_r = r;
            best_c = c.clone();
        }
        let step = r0 / (k as f64).sqrt();
        for (ci, ui) in c.iter_mut().zip(grid.direction(arg).iter()) {
            *ci += step * ui;
        }
        for (a, ci) in avg.iter_mut().zip(&c) {
            *a += step * ci;
        }
        weight += step;
    }
    let avg: Vec<f64> = avg.iter().map(|a| a / weight).collect();
    let (r_avg, _) = objective(&avg);
    let (center, radius) = if r_avg < best_r { (avg, r_avg) } else { (best_c, best_r) };
    let active_dirs = active_directions(sample, grid, &center, radius, 1e-7);
    Ok(ChebyshevData {
        center: Vector::from_raw(center),
        radius,
        active_dirs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[f64]) -> Vector {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn two_points() {
        let b = min_enclosing_ball_points(&[v(&[0.0, 0.0]), v(&[2.0, 0.0])]).unwrap();
        assert!(b.center.distance(&[1.0, 0.0]) < 1e-12);
        assert!((b.radius - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_point() {
        let b = min_enclosing_ball_points(&[v(&[3.0, -1.0, 2.0])]).unwrap();
        assert_eq!(b.center.as_slice(), &[3.0, -1.0, 2.0]);
        assert_eq!(b.radius, 0.0);
        assert!(min_enclosing_ball_points(&[]).is_err());
    }

    #[test]
    fn duplicates_and_collinear_points() {
        let pts: Vec<Vector> = [[0.0, 0.0], [1.0, 0.0], [1.0, 0.0], [3.0, 0.0], [2.0, 0.0], [0.0, 0.0]]
            .iter()
            .map(|p| v(p))
            .collect();
        let b = min_enclosing_ball_points(&pts).unwrap();
        assert!(b.center.distance(&[1.5, 0.0]) < 1e-12);
        assert!((b.radius - 1.5).abs() < 1e-12);
    }

    #[test]
    fn obtuse_triangle_uses_longest_edge() {
        let pts = [v(&[0.0, 0.0]), v(&[4.0, 0.0]), v(&[2.0, 0.5])];
        let b = min_enclosing_ball_points(&pts).unwrap();
        assert!(b.center.distance(&[2.0, 0.0]) < 1e-12);
        assert!((b.radius - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ball_body_is_its_own_chebyshev_ball() {
        let grid = DirectionGrid::new(2, 512).unwrap();
        let ball = Body::ball(v(&[1.0, -2.0]), 0.7).unwrap();
        let c = chebyshev(&ball, &grid, &ChebyshevOptions::default()).unwrap();
        assert!(c.center.distance(&[1.0, -2.0]) < 1e-9);
        assert!((c.radius - 0.7).abs() < 1e-9);
        assert_eq!(c.active_dirs.len(), 512);
    }

    #[test]
    fn one_dimensional_interval() {
        let grid = DirectionGrid::new(1, 2).unwrap();
        let seg = Body::ball(v(&[3.0]), 2.0).unwrap().reflected();
        let c = chebyshev(&seg, &grid, &ChebyshevOptions::default()).unwrap();
        assert!((c.center[0] + 3.0).abs() < 1e-12);
        assert!((c.radius - 2.0).abs() < 1e-12);
    }

    #[test]
    fn pivot_budget_is_enforced() {
        let grid = DirectionGrid::new(2, 256).unwrap();
        let hull = Body::ball(v(&[0.5, 0.5]), 1.0).unwrap().reflected();
        let opts = ChebyshevOptions {
            budget: 1,
            ..Default::default()
        };
        assert!(matches!(
            chebyshev(&hull, &grid, &opts),
            Err(Error::MaxIterations { .. })
        ));
    }

    #[test]
    fn lp_and_subgradient_agree_loosely() {
        let grid = DirectionGrid::new(2, 1024).unwrap();
        let body = Body::ball_intersection(
            vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.5, 0.8660254037844386])],
            vec![1.0, 1.0, 1.0],
        )
        .unwrap();
        let sample = body.sample_support(&grid).unwrap();
        let exact = chebyshev(&body, &grid, &ChebyshevOptions::default()).unwrap();
        let rough = chebyshev_subgradient(&sample, &grid, 5000).unwrap();
        assert!(rough.radius >= exact.radius - 1e-12);
        assert!(rough.radius - exact.radius < 2e-2);
        assert!(rough.center.distance(&exact.center) < 5e-2);
    }
}
