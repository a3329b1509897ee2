//! Similarity transformations `g(x) = v + λ R x` with `R` orthogonal.

use crate::error::{ensure_dim, Error, Result};
use crate::tol::ORTHOGONALITY_TOL;
use crate::vector::{dot, Vector};

#[derive(Debug, Clone, PartialEq)]
pub struct Similarity {
    translation: Vector,
    ratio: f64,
    /// Row-major `n x n`.
    rotation: Vec<f64>,
}

impl Similarity {
    /// Validates `ratio > 0` and `R Rᵀ = I`. `rotation` is given row by row.
    pub fn new(translation: Vector, ratio: f64, rotation: Vec<Vec<f64>>) -> Result<Self> {
        let n = translation.dim();
        if !(ratio.is_finite() && ratio > 0.0) {
            return Err(Error::invalid(format!("similarity ratio must be positive, got {ratio}")));
        }
        ensure_dim(n, rotation.len())?;
        let mut flat = Vec::with_capacity(n * n);
        for row in &rotation {
            ensure_dim(n, row.len())?;
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("rotation entries must be finite"));
            }
            flat.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..n {
                let rr = dot(&flat[i * n..(i + 1) * n], &flat[j * n..(j + 1) * n]);
                let target = if i == j { 1.0 } else { 0.0 };
                if (rr - target).abs() > ORTHOGONALITY_TOL {
                    return Err(Error::invalid(format!(
                        "rotation is not orthogonal: (R Rᵀ)[{i}][{j}] = {rr}"
                    )));
                }
            }
        }
        Ok(Self {
            translation,
            ratio,
            rotation: flat,
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mut rotation = vec![0.0; dim * dim];
        for i in 0..dim {
            rotation[i * dim + i] = 1.0;
        }
        Self {
            translation: Vector::zeros(dim),
            ratio: 1.0,
            rotation,
        }
    }

    pub fn translation(v: Vector) -> Self {
        let mut g = Self::identity(v.dim());
        g.translation = v;
        g
    }

    /// Homothety with center at the origin.
    pub fn homothety(dim: usize, ratio: f64) -> Result<Self> {
        let g = Self::identity(dim);
        let rows = g.rotation_rows();
        Self::new(g.translation, ratio, rows)
    }

    /// Counterclockwise planar rotation about the origin.
    pub fn rotation_2d(alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self {
            translation: Vector::zeros(2),
            ratio: 1.0,
            rotation: vec![c, -s, s, c],
        }
    }

    /// Planar similarity `x ↦ v + λ R(α) x`, optionally preceded by the
    /// reflection `(x, y) ↦ (x, -y)`.
    pub fn planar(alpha: f64, ratio: f64, translation: [f64; 2], reflect: bool) -> Result<Self> {
        let (s, c) = alpha.sin_cos();
        let f = if reflect { -1.0 } else { 1.0 };
        Self::new(
            Vector::new(translation.to_vec())?,
            ratio,
            vec![vec![c, -s * f], vec![s, c * f]],
        )
    }

    pub fn dim(&self) -> usize {
        self.translation.dim()
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn translation_vector(&self) -> &Vector {
        &self.translation
    }

    pub fn rotation_rows(&self) -> Vec<Vec<f64>> {
        self.rotation
            .chunks(self.dim())
            .map(|r| r.to_vec())
            .collect()
    }

    /// `R x`
    pub fn rotate(&self, x: &[f64]) -> Vec<f64> {
        self.rotation.chunks(self.dim()).map(|row| dot(row, x)).collect()
    }

    /// `Rᵀ u`
    pub fn rotate_transpose(&self, u: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n];
        for (i, ui) in u.iter().enumerate() {
            for (j, o) in out.iter_mut().enumerate() {
                *o += self.rotation[i * n + j] * ui;
            }
        }
        out
    }

    /// `g(x) = v + λ R x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.rotate(x)
            .into_iter()
            .zip(self.translation.iter())
            .map(|(rx, v)| v + self.ratio * rx)
            .collect()
    }

    pub fn apply_point(&self, x: &Vector) -> Result<Vector> {
        ensure_dim(self.dim(), x.dim())?;
        Ok(Vector::from_raw(self.apply(x)))
    }

    /// `g ∘ other`
    pub fn compose(&self, other: &Similarity) -> Result<Similarity> {
        ensure_dim(self.dim(), other.dim())?;
        let n = self.dim();
        let mut rotation = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                rotation[i * n + j] = (0..n)
                    .map(|k| self.rotation[i * n + k] * other.rotation[k * n + j])
                    .sum();
            }
        }
        Ok(Similarity {
            translation: Vector::from_raw(self.apply(&other.translation)),
            ratio: self.ratio * other.ratio,
            rotation,
        })
    }
}
