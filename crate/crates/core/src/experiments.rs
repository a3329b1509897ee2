//! Linear independence of the rotated Reuleaux family and the width sweep
//! that separates planar from spatial ball intersections.

use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::body::{Body, BodyExpr};
use crate::calculus::{width_report_from_sample, WidthReport};
use crate::constructions::rotated_family;
use crate::error::{Error, Result};
use crate::grid::DirectionGrid;
use crate::vector::{distance, Vector};

/// Default relative singular-value threshold.
pub const RANK_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramReport {
    pub l: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    pub threshold: f64,
}

/// Numerical rank of the `l × N` matrix `h_j(u_k)` over the rotated family.
pub fn gram_rank(l: usize, d: f64, grid: &DirectionGrid) -> Result<GramReport> {
    gram_rank_with_threshold(l, d, grid, RANK_THRESHOLD)
}

pub fn gram_rank_with_threshold(
    l: usize,
    d: f64,
    grid: &DirectionGrid,
    threshold: f64,
) -> Result<GramReport> {
    if grid.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: grid.dim(),
        });
    }
    if grid.len() < 8 * l {
        return Err(Error::invalid(format!(
            "grid of {} directions is too coarse for l = {l}; need at least {}",
            grid.len(),
            8 * l
        )));
    }
    let family = rotated_family(d, l)?;
    let rows: Vec<Vec<f64>> = family
        .par_iter()
        .map(|body| body.sample_support(grid).map(|s| s.values))
        .collect::<Result<_>>()?;
    let n = grid.len();
    let m = DMatrix::from_fn(l, n, |j, k| rows[j][k]);
    let mut singular_values: Vec<f64> = m.singular_values().iter().copied().collect();
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let cutoff = threshold * singular_values.first().copied().unwrap_or(0.0);
    let numerical_rank = singular_values.iter().filter(|&&s| s > cutoff).count();
    Ok(GramReport {
        l,
        singular_values,
        numerical_rank,
        threshold,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProofPointReport {
    pub l: usize,
    pub d: f64,
    pub checks: usize,
}

/// Evaluates the rotated family at `e^{iπ/3}` and at `e^{i(π/3 + sπ/(3l))}`:
/// every `h_j` equals `d` at the first point; at the `s`-th, `h_j = d` for
/// `j ≥ s` and `h_{s-1} ∈ (0, d)`.
pub fn proof_point_checks(l: usize, d: f64) -> Result<ProofPointReport> {
    if l < 2 {
        return Err(Error::invalid(format!("need l >= 2, got {l}")));
    }
    let family = rotated_family(d, l)?;
    let tol = 1e-9 * d.max(1.0);
    let h = |j: usize, t: f64| family[j].support_raw(&[t.cos(), t.sin()]);
    let mut failures = Vec::new();
    let mut checks = 0;
    for j in 0..l {
        let value = h(j, PI / 3.0);
        checks += 1;
        if (value - d).abs() > tol {
            failures.push(format!("(j={j}, s=0, h={value})"));
        }
    }
    for s in 1..l {
        let t = PI / 3.0 + s as f64 * PI / (3.0 * l as f64);
        for j in s..l {
            let value = h(j, t);
            checks += 1;
            if (value - d).abs() > tol {
                failures.push(format!("(j={j}, s={s}, h={value})"));
            }
        }
        let value = h(s - 1, t);
        checks += 1;
        if !(value > tol && value < d - tol) {
            failures.push(format!("(j={}, s={s}, h={value}) not in (0, d)", s - 1));
        }
    }
    if failures.is_empty() {
        Ok(ProofPointReport { l, d, checks })
    } else {
        Err(Error::CheckFailed(format!(
            "proof point pattern violated at {}",
            failures.join(", ")
        )))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub width: WidthReport,
    /// `max / min` width.
    pub ratio: f64,
    /// Some ball contains no point outside all the others, so the
    /// intersection is that ball.
    pub single_ball: bool,
    /// Spread exceeds `0.005 · mean`.
    pub exceeds_gap: bool,
}

/// Relative spread beyond which a spatial intersection counts as visibly
/// non-constant.
pub const GAP_FRACTION: f64 = 0.005;

/// Width sweep of a planar or spatial ball intersection.
pub fn ball_intersection_width_sweep(body: &Body, grid: &DirectionGrid) -> Result<SweepReport> {
    let BodyExpr::BallIntersection(bi) = body.expr() else {
        return Err(Error::invalid("width sweep needs a ball intersection body"));
    };
    let sample = body.sample_support(grid)?;
    let width = width_report_from_sample(&sample, grid)?;
    let (centers, radii) = (bi.centers(), bi.radii());
    let single_ball = (0..radii.len()).any(|i| {
        (0..radii.len()).all(|j| distance(&centers[i], &centers[j]) + radii[i] <= radii[j] + 1e-12)
    });
    let ratio = if width.min_width > 0.0 {
        width.max_width / width.min_width
    } else {
        f64::INFINITY
    };
    let exceeds_gap = width.spread > GAP_FRACTION * width.mean_width;
    Ok(SweepReport {
        width,
        ratio,
        single_ball,
        exceeds_gap,
    })
}

/// Writes `index,sigma` rows.
pub fn write_singular_values_csv<W: Write>(report: &GramReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::invalid(format!("csv write failed: {e}"));
    w.write_record(["index", "sigma"]).map_err(io)?;
    for (i, s) in report.singular_values.iter().enumerate() {
        w.write_record([i.to_string(), s.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::invalid(format!("csv flush failed: {e}")))?;
    Ok(())
}

/// Writes `dir_index,u_0,..,u_{n-1},w(u)` for each antipodal representative.
pub fn write_sweep_csv<W: Write>(body: &Body, grid: &DirectionGrid, out: W) -> Result<()> {
    let sample = body.sample_support(grid)?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::invalid(format!("csv write failed: {e}"));
    let mut header = vec!["dir_index".to_string()];
    header.extend((0..grid.dim()).map(|i| format!("u_{i}")));
    header.push("w(u)".to_string());
    w.write_record(&header).map_err(io)?;
    for k in grid.representatives() {
        let u: &Vector = grid.direction(k);
        let mut row = vec![k.to_string()];
        row.extend(u.iter().map(|x| x.to_string()));
        row.push((sample.values[k] + sample.values[grid.antipode(k)]).to_string());
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::invalid(format!("csv flush failed: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{canonical_reuleaux, tetra_ball_body};

    #[test]
    fn small_ranks() {
        let g = DirectionGrid::new(2, 1024).unwrap();
        assert_eq!(gram_rank(1, 1.0, &g).unwrap().numerical_rank, 1);
        let r = gram_rank(3, 1.0, &g).unwrap();
        assert_eq!(r.numerical_rank, 3);
        assert!(r.singular_values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn coarse_grid_rejected() {
        let g = DirectionGrid::new(2, 16).unwrap();
        assert!(gram_rank(4, 1.0, &g).is_err());
    }

    #[test]
    fn proof_points_hold_and_scale() {
        for l in 2..=6 {
            assert!(proof_point_checks(l, 1.0).is_ok(), "l = {l}");
        }
        assert!(proof_point_checks(2, 2.0).is_ok());
        assert!(proof_point_checks(1, 1.0).is_err());
    }

    #[test]
    fn sweep_of_single_ball_and_reuleaux() {
        let g = DirectionGrid::new(2, 4096).unwrap();
        let ball = Body::ball_intersection(vec![Vector::zeros(2)], vec![1.0]).unwrap();
        let r = ball_intersection_width_sweep(&ball, &g).unwrap();
        assert!(r.single_ball && r.width.spread < 1e-12);
        let k = ball_intersection_width_sweep(&canonical_reuleaux(1.0).unwrap(), &g).unwrap();
        assert!(!k.single_ball && k.width.spread <= 1e-9);
    }

    #[test]
    fn sweep_of_tetra_body_is_not_constant() {
        let g = DirectionGrid::new(3, 4000).unwrap();
        let r = ball_intersection_width_sweep(&tetra_ball_body(1.0).unwrap(), &g).unwrap();
        assert!(r.exceeds_gap && r.ratio > 1.01 && r.ratio < 1.05, "{r:?}");
    }

    #[test]
    fn sweep_rejects_other_bodies() {
        let g = DirectionGrid::new(2, 64).unwrap();
        assert!(ball_intersection_width_sweep(&Body::unit_ball(2), &g).is_err());
    }

    #[test]
    fn csv_headers() {
        let g = DirectionGrid::new(2, 16).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&Body::unit_ball(2), &g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("dir_index,u_0,u_1,w(u)\n"));
        assert_eq!(text.lines().count(), 9);
        let r = gram_rank(1, 1.0, &g).unwrap();
        let mut buf = Vec::new();
        write_singular_values_csv(&r, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("index,sigma\n"));
    }
}
