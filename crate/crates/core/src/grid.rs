//! Antipodally closed samples of the unit sphere `S^{n-1}`.
//!
//! The first half of every grid holds the generated directions and the
//! second half their exact coordinatewise negations, so
//! `antipode(k) = (k + N/2) mod N` for every grid built here.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vector::{norm, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct DirectionGrid {
    dim: usize,
    directions: Vec<Vector>,
    antipode: Vec<usize>,
}

/// Serialized form `{"dim": n, "count": N}`; the directions are regenerated
/// deterministically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub dim: usize,
    pub count: usize,
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653; // π (3 − √5)

impl DirectionGrid {
    /// Builds a grid of `count` directions in `R^dim`.
    ///
    /// For `dim = 1` the grid is `{+1, -1}` and `count` is ignored. For
    /// `dim = 2` the directions are `count` equally spaced angles starting at
    /// angle 0. For `dim >= 3`, `count / 2` quasi-uniform directions on a
    /// half-sphere are followed by their negations.
    pub fn new(dim: usize, count: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("grid dimension must be at least 1"));
        }
        if dim == 1 {
            return Ok(Self::from_half(1, vec![Vector::from_raw(vec![1.0])]));
        }
        if count < 2 || !count.is_multiple_of(2) {
            return Err(Error::invalid(format!(
                "grid size must be even and at least 2, got {count}"
            )));
        }
        let half = count / 2;
        let first = match dim {
            2 => (0..half)
                .map(|k| Vector::polar(std::f64::consts::TAU * k as f64 / count as f64))
                .collect(),
            3 => fibonacci_hemisphere(half),
            _ => halton_sphere(dim, half),
        };
        Ok(Self::from_half(dim, first))
    }

    pub fn from_spec(spec: GridSpec) -> Result<Self> {
        Self::new(spec.dim, spec.count)
    }

    pub fn spec(&self) -> GridSpec {
        GridSpec {
            dim: self.dim,
            count: self.len(),
        }
    }

    fn from_half(dim: usize, first: Vec<Vector>) -> Self {
        let half = first.len();
        let mut directions = first;
        for k in 0..half {
            let neg = directions[k].neg();
            directions.push(neg);
        }
        let n = directions.len();
        let antipode = (0..n).map(|k| (k + half) % n).collect();
        Self {
            dim,
            directions,
            antipode,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn directions(&self) -> &[Vector] {
        &self.directions
    }

    pub fn direction(&self, k: usize) -> &Vector {
        &self.directions[k]
    }

    pub fn antipode(&self, k: usize) -> usize {
        self.antipode[k]
    }

    /// One index per antipodal pair.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&k| k < self.antipode[k])
    }

    /// Planar angle of direction `k` in `[0, 2π)`, or `None` outside 2-D.
    pub fn angle(&self, k: usize) -> Option<f64> {
        (self.dim == 2).then(|| {
            let u = &self.directions[k];
            u[1].atan2(u[0]).rem_euclid(std::f64::consts::TAU)
        })
    }
}

fn fibonacci_hemisphere(m: usize) -> Vec<Vector> {
    (0..m)
        .map(|i| {
            let z = (i as f64 + 0.5) / m as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let (s, c) = (i as f64 * GOLDEN_ANGLE).sin_cos();
            let v = [r * c, r * s, z];
            let n = norm(&v);
            Vector::from_raw(v.iter().map(|x| x / n).collect())
        })
        .collect()
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let b = base as f64;
    let mut f = 1.0 / b;
    let mut x = 0.0;
    while i > 0 {
        x += (i % base) as f64 * f;
        i /= base;
        f /= b;
    }
    x
}

fn first_primes(k: usize) -> Vec<usize> {
    let mut primes = Vec::with_capacity(k);
    let mut p = 2;
    while primes.len() < k {
        if primes.iter().all(|q| p % q != 0) {
            primes.push(p);
        }
        p += 1;
    }
    primes
}

/// Halton points in the cube, rejected to the unit ball and projected to
/// the sphere; each is flipped into the half-space `x_n >= 0`.
fn halton_sphere(dim: usize, m: usize) -> Vec<Vector> {
    let bases = first_primes(dim);
    let mut out = Vec::with_capacity(m);
    let mut i = 1;
    while out.len() < m {
        let x: Vec<f64> = bases
            .iter()
            .map(|&b| 2.0 * radical_inverse(i, b) - 1.0)
            .collect();
        i += 1;
        let r = norm(&x);
        if !(1e-3..=1.0).contains(&r) {
            continue;
        }
        let sign = if x[dim - 1] < 0.0 { -1.0 } else { 1.0 };
        out.push(Vector::from_raw(x.iter().map(|c| sign * c / r).collect()));
    }
    out
}
