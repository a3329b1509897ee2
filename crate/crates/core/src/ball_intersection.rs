//! Exact support evaluation for finite intersections of balls in `R^2` and `R^3`.
//!
//! The maximizer of a linear functional over `∩ B(c_i, r_i)` lies in the
//! relative interior of a face, an edge, or at a vertex of the intersection.
//! Face candidates are `c_i + r_i u`. In the plane the vertices are pairwise
//! circle intersections. In space the edge candidates are the maximizers of
//! `⟨x, u⟩` on each sphere–sphere intersection circle and the vertices are
//! triple-sphere intersection points. Vertices and circles do not depend on
//! `u` and are computed once at construction.

use crate::error::{Error, Result};
use crate::tol::FEASIBILITY_SLACK;
use crate::vector::{axpy, distance, dot, norm, sub, Vector};

/// Alternating-projection sweeps used to certify non-emptiness.
const CERTIFY_SWEEPS: usize = 200;
const CERTIFY_RESIDUAL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct BallIntersection {
    dim: usize,
    centers: Vec<Vector>,
    radii: Vec<f64>,
    /// Candidate vertices with their largest ball violation.
    vertices: Vec<(Vec<f64>, f64)>,
    /// Sphere–sphere intersection circles (3-D only).
    circles: Vec<Circle>,
}

#[derive(Debug, Clone, PartialEq)]
struct Circle {
    center: Vec<f64>,
    radius: f64,
    axis: Vec<f64>,
}

impl BallIntersection {
    pub fn new(centers: Vec<Vector>, radii: Vec<f64>) -> Result<Self> {
        if centers.is_empty() {
            return Err(Error::invalid("ball intersection needs at least one ball"));
        }
        if centers.len() != radii.len() {
            return Err(Error::invalid(format!(
                "{} centers but {} radii",
                centers.len(),
                radii.len()
            )));
        }
        let dim = centers[0].dim();
        if !(dim == 2 || dim == 3) {
            return Err(Error::Unsupported(format!(
                "ball intersections are supported in dimensions 2 and 3, got {dim}"
            )));
        }
        for c in &centers {
            crate::error::ensure_dim(dim, c.dim())?;
        }
        if let Some(r) = radii.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::invalid(format!("ball radii must be positive, got {r}")));
        }
        let mut body = Self {
            dim,
            centers,
            radii,
            vertices: Vec::new(),
            circles: Vec::new(),
        };
        let residual = body.certify_nonempty();
        if residual > CERTIFY_RESIDUAL {
            return Err(Error::EmptyIntersection { residual });
        }
        body.precompute();
        Ok(body)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn centers(&self) -> &[Vector] {
        &self.centers
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Largest amount by which `x` lies outside any ball.
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.centers
            .iter()
            .zip(&self.radii)
            .map(|(c, r)| (distance(x, c) - r) / r.max(1.0))
            .fold(0.0, f64::max)
    }

    /// Alternating projections from the centroid of the centers; returns the
    /// final residual.
    fn certify_nonempty(&self) -> f64 {
        let m = self.centers.len() as f64;
        let mut x = vec![0.0; self.dim];
        for c in &self.centers {
            for (xi, ci) in x.iter_mut().zip(c.iter()) {
                *xi += ci / m;
            }
        }
        for _ in 0..CERTIFY_SWEEPS {
            for (c, &r) in self.centers.iter().zip(&self.radii) {
                let dist = distance(&x, c);
                if dist > r {
                    let diff = sub(&x, c);
                    x = axpy(c, r / dist, &diff);
                }
            }
            if self.violation(&x) == 0.0 {
                return 0.0;
            }
        }
        self.centers
            .iter()
            .zip(&self.radii)
            .map(|(c, r)| (distance(&x, c) - r).max(0.0))
            .fold(0.0, f64::max)
    }

    fn precompute(&mut self) {
        let k = self.centers.len();
        if self.dim == 2 {
            for i in 0..k {
                for j in i + 1..k {
                    for p in circle_intersections(
                        &self.centers[i],
                        self.radii[i],
                        &self.centers[j],
                        self.radii[j],
                    ) {
                        let v = self.violation(&p);
                        self.vertices.push((p, v));
                    }
                }
            }
        } else {
            for i in 0..k {
                for j in i + 1..k {
                    if let Some(c) = sphere_circle(
                        &self.centers[i],
                        self.radii[i],
                        &self.centers[j],
                        self.radii[j],
                    ) {
                        self.circles.push(c);
                    }
                    for l in j + 1..k {
                        for p in sphere_triple(
                            [&self.centers[i], &self.centers[j], &self.centers[l]],
                            [self.radii[i], self.radii[j], self.radii[l]],
                        ) {
                            let v = self.violation(&p);
                            self.vertices.push((p, v));
                        }
                    }
                }
            }
        }
    }

    /// `violation(x) <= slack`, stopping at the first ball that fails.
    fn feasible_within(&self, x: &[f64], slack: f64) -> bool {
        self.centers
            .iter()
            .zip(&self.radii)
            .all(|(c, r)| (distance(x, c) - r) / r.max(1.0) <= slack)
    }

    /// The candidate maximizing `⟨x, u⟩` among those feasible within `slack`.
    /// Candidates are only tested for feasibility when they could beat the
    /// current best.
    fn best_with_slack(&self, u: &[f64], slack: f64) -> Option<(f64, Candidate)> {
        let mut best: Option<(f64, Candidate)> = None;
        let beats = |best: &Option<(f64, Candidate)>, val: f64| best.as_ref().is_none_or(|(b, _)| val > *b);
        for (k, (p, v)) in self.vertices.iter().enumerate() {
            let val = dot(p, u);
            if *v <= slack && beats(&best, val) {
                best = Some((val, Candidate::Vertex(k)));
            }
        }
        let mut buf = [0.0; 3];
        for (i, (c, &r)) in self.centers.iter().zip(&self.radii).enumerate() {
            let val = dot(c, u) + r;
            if !beats(&best, val) {
                continue;
            }
            let p = &mut buf[..self.dim];
            for ((pk, ck), uk) in p.iter_mut().zip(c.iter()).zip(u) {
                *pk = ck + r * uk;
            }
            if self.feasible_within(p, slack) {
                best = Some((val, Candidate::Face(i)));
            }
        }
        for (j, circle) in self.circles.iter().enumerate() {
            let p = circle.maximizer(u);
            let val = dot(&p, u);
            if beats(&best, val) && self.feasible_within(&p, slack) {
                best = Some((val, Candidate::Circle(j)));
            }
        }
        best
    }

    fn best(&self, u: &[f64]) -> (f64, Candidate) {
        let mut slack = FEASIBILITY_SLACK;
        loop {
            if let Some(b) = self.best_with_slack(u, slack) {
                return b;
            }
            // Only reachable for near-degenerate (almost single-point)
            // intersections, where rounding can push every candidate out.
            slack *= 100.0;
            if slack > 1.0 {
                unreachable!("certified ball intersection produced no candidate");
            }
        }
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        self.best(u).0
    }

    pub fn support_point(&self, u: &[f64]) -> Vec<f64> {
        match self.best(u).1 {
            Candidate::Face(i) => axpy(&self.centers[i], self.radii[i], u),
            Candidate::Circle(j) => self.circles[j].maximizer(u),
            Candidate::Vertex(k) => self.vertices[k].0.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Candidate {
    Face(usize),
    Circle(usize),
    Vertex(usize),
}

impl Circle {
    fn maximizer(&self, u: &[f64]) -> Vec<f64> {
        let along = dot(u, &self.axis);
        let w = axpy(u, -along, &self.axis);
        let wn = norm(&w);
        let dir = if wn > 1e-12 {
            w.iter().map(|x| x / wn).collect()
        } else {
            any_perpendicular(&self.axis)
        };
        axpy(&self.center, self.radius, &dir)
    }
}

fn any_perpendicular(a: &[f64]) -> Vec<f64> {
    let pick = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let w = axpy(&pick, -dot(&pick, a), a);
    let n = norm(&w);
    w.iter().map(|x| x / n).collect()
}

fn circle_intersections(c1: &[f64], r1: f64, c2: &[f64], r2: f64) -> Vec<Vec<f64>> {
    let diff = sub(c2, c1);
    let d = norm(&diff);
    let scale = r1.max(r2).max(1.0);
    if d < 1e-14 * scale || d > r1 + r2 + 1e-12 * scale || d < (r1 - r2).abs() - 1e-12 * scale {
        return Vec::new();
    }
    let e = [diff[0] / d, diff[1] / d];
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    let h = (r1 * r1 - a * a).max(0.0).sqrt();
    let p = [c1[0] + a * e[0], c1[1] + a * e[1]];
    vec![
        vec![p[0] - h * e[1], p[1] + h * e[0]],
        vec![p[0] + h * e[1], p[1] - h * e[0]],
    ]
}

fn sphere_circle(c1: &[f64], r1: f64, c2: &[f64], r2: f64) -> Option<Circle> {
    let diff = sub(c2, c1);
    let d = norm(&diff);
    let scale = r1.max(r2).max(1.0);
    if d < 1e-14 * scale || d > r1 + r2 + 1e-12 * scale || d < (r1 - r2).abs() - 1e-12 * scale {
        return None;
    }
    let axis: Vec<f64> = diff.iter().map(|x| x / d).collect();
    let a = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    Some(Circle {
        center: axpy(c1, a, &axis),
        radius: (r1 * r1 - a * a).max(0.0).sqrt(),
        axis,
    })
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Trilateration: the (up to two) common points of three spheres.
fn sphere_triple(c: [&[f64]; 3], r: [f64; 3]) -> Vec<Vec<f64>> {
    let d12 = sub(c[1], c[0]);
    let d = norm(&d12);
    let scale = r.iter().cloned().fold(1.0, f64::max);
    if d < 1e-14 * scale {
        return Vec::new();
    }
    let ex: Vec<f64> = d12.iter().map(|x| x / d).collect();
    let d13 = sub(c[2], c[0]);
    let i = dot(&ex, &d13);
    let ey_raw = axpy(&d13, -i, &ex);
    let ey_norm = norm(&ey_raw);
    if ey_norm < 1e-12 * scale {
        return Vec::new();
    }
    let ey: Vec<f64> = ey_raw.iter().map(|x| x / ey_norm).collect();
    let ez = cross(&ex, &ey);
    let j = dot(&ey, &d13);
    let x = (r[0] * r[0] - r[1] * r[1] + d * d) / (2.0 * d);
    let y = (r[0] * r[0] - r[2] * r[2] + i * i + j * j) / (2.0 * j) - (i / j) * x;
    let z2 = r[0] * r[0] - x * x - y * y;
    if z2 < -1e-12 * scale * scale {
        return Vec::new();
    }
    let z = z2.max(0.0).sqrt();
    let base: Vec<f64> = (0..3).map(|k| c[0][k] + x * ex[k] + y * ey[k]).collect();
    vec![axpy(&base, z, &ez), axpy(&base, -z, &ez)]
}
