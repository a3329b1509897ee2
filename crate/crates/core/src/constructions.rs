//! Canonical bodies of constant width, random generators, and the explicit
//! one-dimensional parametrizations of constant-width intervals and pairs.

use std::f64::consts::{PI, TAU};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::body::Body;
use crate::error::{Error, Result};
use crate::similarity::Similarity;
use crate::vector::Vector;

/// Vertices of the canonical Reuleaux triangle of width `d`.
pub fn reuleaux_vertices(d: f64) -> [[f64; 2]; 3] {
    [[0.0, 0.0], [d, 0.0], [d / 2.0, d * 3f64.sqrt() / 2.0]]
}

fn check_width(d: f64) -> Result<()> {
    if d.is_finite() && d > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("width must be positive, got {d}")))
    }
}

fn discs_through_pose(vertices: &[[f64; 2]], d: f64, pose: &Similarity) -> Result<Body> {
    if pose.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: pose.dim(),
        });
    }
    let centers = vertices
        .iter()
        .map(|v| Vector::new(pose.apply(v)))
        .collect::<Result<Vec<_>>>()?;
    let radius = d * pose.ratio();
    Body::ball_intersection(centers, vec![radius; vertices.len()])
}

/// Intersection of the discs of radius `d` centered at the images under
/// `pose` of `(0,0)`, `(d,0)` and `(d/2, d√3/2)`. The resulting width is
/// `d · pose.ratio()`.
pub fn reuleaux_triangle(d: f64, pose: &Similarity) -> Result<Body> {
    check_width(d)?;
    discs_through_pose(&reuleaux_vertices(d), d, pose)
}

/// The canonical Reuleaux triangle `K` of width `d`.
pub fn canonical_reuleaux(d: f64) -> Result<Body> {
    reuleaux_triangle(d, &Similarity::identity(2))
}

/// `K` rotated about the origin by `jπ/(3l)` for `j = 0..l`.
pub fn rotated_family(d: f64, l: usize) -> Result<Vec<Body>> {
    if l == 0 {
        return Err(Error::invalid("family size must be at least 1"));
    }
    (0..l)
        .map(|j| reuleaux_triangle(d, &Similarity::rotation_2d(j as f64 * PI / (3.0 * l as f64))))
        .collect()
}

/// Circumradius of the regular `k`-gon whose vertices are at distance `d`
/// from the two farthest vertices.
pub fn reuleaux_polygon_circumradius(d: f64, k: usize) -> f64 {
    d / (2.0 * (PI * (k - 1) as f64 / (2.0 * k as f64)).sin())
}

/// Regular Reuleaux `k`-gon of width `d` centered at the origin (before `pose`).
pub fn reuleaux_polygon(d: f64, k: usize, pose: &Similarity) -> Result<Body> {
    check_width(d)?;
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "Reuleaux polygons need an odd vertex count >= 3, got {k}"
        )));
    }
    let rc = reuleaux_polygon_circumradius(d, k);
    let vertices: Vec<[f64; 2]> = (0..k)
        .map(|i| {
            let t = PI / 2.0 + TAU * i as f64 / k as f64;
            [rc * t.cos(), rc * t.sin()]
        })
        .collect();
    discs_through_pose(&vertices, d, pose)
}

/// One Reuleaux-polygon term of a planar constant-width mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygonTerm {
    pub weight: f64,
    pub sides: usize,
    pub angle: f64,
    pub offset: [f64; 2],
}

/// `w₀ · B(0, d/2) + Σ w_i · P_i` where every `P_i` is a posed Reuleaux
/// polygon of width `d`. Weights must sum to one.
pub fn cw_mixture_2d(d: f64, ball_weight: f64, polygons: &[PolygonTerm]) -> Result<Body> {
    check_width(d)?;
    let total = ball_weight + polygons.iter().map(|p| p.weight).sum::<f64>();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("mixture weights sum to {total}, not 1")));
    }
    let mut terms = vec![(ball_weight, Body::ball(Vector::zeros(2), d / 2.0)?)];
    for p in polygons {
        let pose = Similarity::planar(p.angle, 1.0, p.offset, false)?;
        terms.push((p.weight, reuleaux_polygon(d, p.sides, &pose)?));
    }
    Body::minkowski(terms)
}

/// A seeded convex combination of `m` randomly posed Reuleaux polygons of
/// width `d` and the ball `B(0, d/2)`. Weights are normalized exponentials.
pub fn random_cw_body_2d(seed: u64, d: f64, m: usize) -> Result<Body> {
    if m == 0 {
        return Err(Error::invalid("random body needs at least one polygon term"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<f64> = (0..=m).map(|_| Exp1.sample(&mut rng)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    let polygons: Vec<PolygonTerm> = weights[1..]
        .iter()
        .map(|&weight| PolygonTerm {
            weight,
            sides: [3, 5, 7][rng.random_range(0..3)],
            angle: rng.random_range(0.0..TAU),
            offset: [rng.random_range(-d..d), rng.random_range(-d..d)],
        })
        .collect();
    let ball_weight = 1.0 - polygons.iter().map(|p| p.weight).sum::<f64>();
    cw_mixture_2d(d, ball_weight, &polygons)
}

/// Uniformly random orthogonal matrix (QR of a Gaussian matrix with sign fix),
/// ratio in `[0.25, 4]` and translation in `[-2, 2]^n`.
pub fn random_similarity<R: Rng>(rng: &mut R, dim: usize) -> Result<Similarity> {
    let g = DMatrix::<f64>::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..dim {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    let rows = (0..dim).map(|i| (0..dim).map(|j| q[(i, j)]).collect()).collect();
    let ratio = (rng.random_range(-1.0..1.0f64) * 4f64.ln()).exp();
    let translation = Vector::new((0..dim).map(|_| rng.random_range(-2.0..2.0)).collect())?;
    Similarity::new(translation, ratio, rows)
}

/// Vertices of the regular tetrahedron with edge `r`, centered at the origin.
pub fn tetrahedron_vertices(r: f64) -> [[f64; 3]; 4] {
    let s = r / (2.0 * 2f64.sqrt());
    [[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]]
}

/// Intersection of the four balls of radius `r` centered at the vertices of
/// a regular tetrahedron of edge `r`. Not of constant width.
pub fn tetra_ball_body(r: f64) -> Result<Body> {
    check_width(r)?;
    let centers = tetrahedron_vertices(r)
        .iter()
        .map(|v| Vector::new(v.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Body::ball_intersection(centers, vec![r; 4])
}

/// A compact interval `[lo, hi]`, i.e. a constant-width body in `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval1D {
    pub lo: f64,
    pub hi: f64,
}

impl Interval1D {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo > hi {
            return Err(Error::invalid(format!("[{lo}, {hi}] is not an interval")));
        }
        Ok(Self { lo, hi })
    }
}

/// Coordinates `((d, a), p)` of a pair of intervals of constant relative width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairParams1D {
    pub d: f64,
    pub a: f64,
    pub p: f64,
}

/// `[x, y] ↦ (y - x, (x + y)/2)`
pub fn cw1_forward(i: Interval1D) -> (f64, f64) {
    (i.hi - i.lo, (i.lo + i.hi) / 2.0)
}

/// `(d, m) ↦ [m - d/2, m + d/2]`
pub fn cw1_inverse(d: f64, mid: f64) -> Result<Interval1D> {
    if !(d.is_finite() && d >= 0.0) {
        return Err(Error::invalid(format!("width must be non-negative, got {d}")));
    }
    Interval1D::new(mid - d / 2.0, mid + d / 2.0)
}

/// `([x, y], [v, z]) ↦ ((z - x, y - x), (x + y)/2)`. Rejects pairs whose
/// relative width is not constant (`z - x ≠ y - v`).
pub fn crw1_forward(first: Interval1D, second: Interval1D) -> Result<PairParams1D> {
    let (x, y, v, z) = (first.lo, first.hi, second.lo, second.hi);
    let (w1, w2) = (z - x, y - v);
    let scale = [x, y, v, z].iter().fold(1.0f64, |m, c| m.max(c.abs()));
    if (w1 - w2).abs() > 1e-12 * scale {
        return Err(Error::NotConstantRelativeWidth {
            spread: (w1 - w2).abs(),
        });
    }
    Ok(PairParams1D {
        d: w1,
        a: y - x,
        p: (x + y) / 2.0,
    })
}

/// `((d, a), p) ↦ ([p - a/2, p + a/2], [p - (d - a/2), p + (d - a/2)])`
/// on `0 <= a <= 2d`.
pub fn crw1_inverse(params: PairParams1D) -> Result<(Interval1D, Interval1D)> {
    let PairParams1D { d, a, p } = params;
    if !(d.is_finite() && a.is_finite() && p.is_finite()) || a < 0.0 || a > 2.0 * d {
        return Err(Error::invalid(format!(
            "(d, a) = ({d}, {a}) violates 0 <= a <= 2d"
        )));
    }
    let half = d - a / 2.0;
    Ok((
        Interval1D::new(p - a / 2.0, p + a / 2.0)?,
        Interval1D::new(p - half, p + half)?,
    ))
}
