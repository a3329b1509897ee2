//! Reference implementations used only by the test suites. None of them
//! shares code with the library oracles they check.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Piecewise support function of the canonical Reuleaux triangle with
/// vertices `(0,0)`, `(d,0)`, `(d/2, d√3/2)` at direction `e^{it}`.
pub fn reuleaux_support(t: f64, d: f64) -> f64 {
    let t = t.rem_euclid(2.0 * PI);
    let p = PI / 3.0;
    if t <= p {
        d
    } else if t <= 2.0 * p {
        d * (t - p).cos()
    } else if t <= 3.0 * p {
        d * t.cos() + d
    } else if t <= 4.0 * p {
        0.0
    } else if t <= 5.0 * p {
        d * (t - p).cos() + d
    } else {
        d * t.cos()
    }
}

/// `(t, h)` rows of the shipped golden vector for `d = 1`.
pub fn golden_rows() -> Vec<(f64, f64)> {
    let text = include_str!("../data/reuleaux_golden.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let (t, h) = line.split_once(',').expect("two columns");
            (t.parse().unwrap(), h.parse().unwrap())
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Result of the dual reference solver for `max <x,u>` over `∩ B(c_i, r_i)`.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceSupport {
    /// Dual objective value, an upper bound on the support.
    pub upper: f64,
    /// Objective at a feasible point, a lower bound.
    pub lower: f64,
}

/// Largest `θ ∈ [0, 1]` with `p + θ(x - p)` inside every ball, for `p`
/// strictly inside all of them.
fn pull_inside(x: &[f64], p: &[f64], centers: &[Vec<f64>], radii: &[f64]) -> Vec<f64> {
    let dir: Vec<f64> = x.iter().zip(p).map(|(a, b)| a - b).collect();
    let mut theta: f64 = 1.0;
    let a = dot(&dir, &dir);
    if a > 0.0 {
        for (c, &r) in centers.iter().zip(radii) {
            let pc: Vec<f64> = p.iter().zip(c).map(|(a, b)| a - b).collect();
            let b = 2.0 * dot(&dir, &pc);
            let cc = dot(&pc, &pc) - r * r;
            let root = (-b + (b * b - 4.0 * a * cc).sqrt()) / (2.0 * a);
            theta = theta.min(root);
        }
    }
    p.iter().zip(&dir).map(|(a, b)| a + theta * b).collect()
}

/// Projected gradient descent on the Lagrangian dual
/// `g(λ) = ‖u + 2Σλ_i c_i‖² / (4Σλ_i) - Σλ_i(‖c_i‖² - r_i²)`, `λ ≥ 0`,
/// with backtracking. `interior` must lie strictly inside every ball; it
/// turns dual iterates into feasible primal points for the lower bound.
pub fn reference_support(
    centers: &[Vec<f64>],
    radii: &[f64],
    u: &[f64],
    interior: &[f64],
    iterations: usize,
) -> ReferenceSupport {
    let m = centers.len();
    let n = u.len();
    let primal = |lam: &[f64]| -> Vec<f64> {
        let s: f64 = lam.iter().sum();
        (0..n)
            .map(|k| (u[k] + 2.0 * (0..m).map(|i| lam[i] * centers[i][k]).sum::<f64>()) / (2.0 * s))
            .collect()
    };
    let value = |lam: &[f64]| -> f64 {
        let s: f64 = lam.iter().sum();
        if s <= 0.0 {
            return f64::INFINITY;
        }
        let x = primal(lam);
        dot(&x, u) - (0..m).map(|i| lam[i] * (dist2(&x, &centers[i]) - radii[i] * radii[i])).sum::<f64>()
    };
    let mut lam: Vec<f64> = radii.iter().map(|r| 1.0 / (2.0 * r * m as f64)).collect();
    let mut g = value(&lam);
    let mut step = 1.0;
    let mut best_lower = f64::NEG_INFINITY;
    for it in 0..iterations {
        let x = primal(&lam);
        let grad: Vec<f64> = (0..m).map(|i| radii[i] * radii[i] - dist2(&x, &centers[i])).collect();
        if it % 16 == 0 {
            let feasible = pull_inside(&x, interior, centers, radii);
            best_lower = best_lower.max(dot(&feasible, u));
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = lam.iter().zip(&grad).map(|(l, d)| (l - step * d).max(0.0)).collect();
            let gt = value(&trial);
            let moved: f64 = trial.iter().zip(&lam).map(|(a, b)| (a - b) * (a - b)).sum();
            let predicted = g + trial.iter().zip(&lam).zip(&grad).map(|((a, b), d)| (a - b) * d).sum::<f64>()
                + moved / (2.0 * step);
            if gt <= predicted {
                accepted = moved > 0.0;
                lam = trial;
                g = gt;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !accepted || g - best_lower < 1e-12 {
            break;
        }
    }
    let feasible = pull_inside(&primal(&lam), interior, centers, radii);
    best_lower = best_lower.max(dot(&feasible, u));
    ReferenceSupport {
        upper: g,
        lower: best_lower,
    }
}

/// Minimal enclosing circle of planar points by exhaustive search over all
/// circles through two or three of them.
pub fn brute_force_min_circle(points: &[[f64; 2]]) -> ([f64; 2], f64) {
    let contains = |c: [f64; 2], r: f64| {
        points
            .iter()
            .all(|p| ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt() <= r * (1.0 + 1e-12) + 1e-12)
    };
    let mut best = (points[0], if points.len() == 1 { 0.0 } else { f64::INFINITY });
    let n = points.len();
    for i in 0..n {
        for j in i + 1..n {
            let c = [(points[i][0] + points[j][0]) / 2.0, (points[i][1] + points[j][1]) / 2.0];
            let r = ((points[i][0] - c[0]).powi(2) + (points[i][1] - c[1]).powi(2)).sqrt();
            if r < best.1 && contains(c, r) {
                best = (c, r);
            }
            for k in j + 1..n {
                let (a, b, cc) = (points[i], points[j], points[k]);
                let det = 2.0 * (a[0] * (b[1] - cc[1]) + b[0] * (cc[1] - a[1]) + cc[0] * (a[1] - b[1]));
                if det.abs() < 1e-14 {
                    continue;
                }
                let (a2, b2, c2) = (
                    a[0] * a[0] + a[1] * a[1],
                    b[0] * b[0] + b[1] * b[1],
                    cc[0] * cc[0] + cc[1] * cc[1],
                );
                let center = [
                    (a2 * (b[1] - cc[1]) + b2 * (cc[1] - a[1]) + c2 * (a[1] - b[1])) / det,
                    (a2 * (cc[0] - b[0]) + b2 * (a[0] - cc[0]) + c2 * (b[0] - a[0])) / det,
                ];
                let r = ((a[0] - center[0]).powi(2) + (a[1] - center[1]).powi(2)).sqrt();
                if r < best.1 && contains(center, r) {
                    best = (center, r);
                }
            }
        }
    }
    best
}
