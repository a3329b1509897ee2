//! Width functions, relative width, Hausdorff distance and constant-width
//! classification on a direction grid.

use std::io::Write;

use serde::{Serialize, Serializer};

use crate::body::{Body, SupportSample};
use crate::error::{ensure_dim, Error, Result};
use crate::grid::DirectionGrid;
use crate::vector::{distance, Vector};

/// A convex subset `D ⊆ [0, ∞)`: an interval with open or closed ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WidthRange {
    lo: f64,
    hi: f64,
    lo_closed: bool,
    hi_closed: bool,
}

impl WidthRange {
    pub fn new(lo: f64, hi: f64, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if !(lo.is_finite() && lo >= 0.0) {
            return Err(Error::invalid(format!("range lower end must be finite and >= 0, got {lo}")));
        }
        if hi.is_nan() || hi < lo {
            return Err(Error::invalid(format!("range upper end {hi} is below lower end {lo}")));
        }
        if hi == lo && !(lo_closed && hi_closed) {
            return Err(Error::invalid("a degenerate range must be closed at both ends"));
        }
        Ok(Self {
            lo,
            hi,
            lo_closed,
            hi_closed: hi_closed && hi.is_finite(),
        })
    }

    /// `(0, ∞)`
    pub fn positive() -> Self {
        Self::new(0.0, f64::INFINITY, false, false).unwrap()
    }

    /// `[0, ∞)`
    pub fn nonnegative() -> Self {
        Self::new(0.0, f64::INFINITY, true, false).unwrap()
    }

    /// `[lo, hi]`
    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::new(lo, hi, true, true)
    }

    /// `{d}`
    pub fn singleton(d: f64) -> Result<Self> {
        Self::new(d, d, true, true)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_closed(&self) -> bool {
        self.lo_closed && (self.hi_closed || self.hi.is_infinite())
    }

    /// True for the excluded range `D = {0}`.
    pub fn is_zero_singleton(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }

    pub fn contains(&self, d: f64) -> bool {
        self.contains_within(d, 0.0)
    }

    /// Membership where closed ends are widened by `tol`; open ends stay strict.
    pub fn contains_within(&self, d: f64, tol: f64) -> bool {
        let above = if self.lo_closed {
            d >= self.lo - tol
        } else {
            d > self.lo
        };
        let below = if self.hi_closed {
            d <= self.hi + tol
        } else {
            d < self.hi
        };
        above && below
    }
}

/// Summary of the width function over one grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WidthReport {
    #[serde(rename = "min")]
    pub min_width: f64,
    #[serde(rename = "max")]
    pub max_width: f64,
    pub spread: f64,
    #[serde(rename = "mean")]
    pub mean_width: f64,
    #[serde(rename = "argmin_dir")]
    pub witness_dir_min: Vector,
    #[serde(rename = "argmax_dir")]
    pub witness_dir_max: Vector,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Verdict {
    InCwD(f64),
    ConstantButOutsideD(f64),
    NotConstantWidth(f64),
}

impl Verdict {
    pub fn is_in_cw_d(&self) -> bool {
        matches!(self, Verdict::InCwD(_))
    }

    pub fn is_constant(&self) -> bool {
        !matches!(self, Verdict::NotConstantWidth(_))
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let (kind, key, value) = match *self {
            Verdict::InCwD(d) => ("in_cw_d", "width", d),
            Verdict::ConstantButOutsideD(d) => ("constant_outside_d", "width", d),
            Verdict::NotConstantWidth(sp) => ("not_constant_width", "spread", sp),
        };
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("kind", kind)?;
        m.serialize_entry(key, &value)?;
        m.end()
    }
}

/// `w_Y(u) = h_Y(u) + h_Y(-u)`
pub fn width(y: &Body, u: &[f64]) -> Result<f64> {
    let neg: Vec<f64> = u.iter().map(|x| -x).collect();
    Ok(y.support(u)? + y.support(&neg)?)
}

/// `w_(Y,Z)(u) = h_Y(u) + h_Z(-u)`
pub fn relative_width(y: &Body, z: &Body, u: &[f64]) -> Result<f64> {
    ensure_dim(y.dim(), z.dim())?;
    let neg: Vec<f64> = u.iter().map(|x| -x).collect();
    Ok(y.support(u)? + z.support(&neg)?)
}

/// Relative width on every grid direction, in grid order.
pub fn relative_width_sample(y: &Body, z: &Body, grid: &DirectionGrid) -> Result<Vec<f64>> {
    ensure_dim(y.dim(), z.dim())?;
    let hy = y.sample_support(grid)?;
    let hz = z.sample_support(grid)?;
    Ok((0..grid.len())
        .map(|k| hy.values[k] + hz.values[grid.antipode(k)])
        .collect())
}

/// Width per antipodal representative: `(k, w(u_k))`.
pub fn width_profile(sample: &SupportSample, grid: &DirectionGrid) -> Vec<(usize, f64)> {
    grid.representatives()
        .map(|k| (k, sample.values[k] + sample.values[grid.antipode(k)]))
        .collect()
}

pub fn width_report_from_sample(sample: &SupportSample, grid: &DirectionGrid) -> Result<WidthReport> {
    if sample.grid != grid.spec() {
        return Err(Error::invalid("support sample does not belong to this grid"));
    }
    let profile = width_profile(sample, grid);
    let (mut kmin, mut wmin) = profile[0];
    let (mut kmax, mut wmax) = profile[0];
    let mut total = 0.0;
    for &(k, w) in &profile {
        if w < wmin {
            wmin = w;
            kmin = k;
        }
        if w > wmax {
            wmax = w;
            kmax = k;
        }
        total += w;
    }
    let mean = (total / profile.len() as f64).clamp(wmin, wmax);
    Ok(WidthReport {
        min_width: wmin,
        max_width: wmax,
        spread: wmax - wmin,
        mean_width: mean,
        witness_dir_min: grid.direction(kmin).clone(),
        witness_dir_max: grid.direction(kmax).clone(),
    })
}

/// Min, max and mean width over one representative of each antipodal pair.
pub fn width_report(y: &Body, grid: &DirectionGrid) -> Result<WidthReport> {
    width_report_from_sample(&y.sample_support(grid)?, grid)
}

/// Constant width `d` when the spread is at most `tol · max(1, d)`; membership
/// in `D` is then tested with the same slack on closed ends.
pub fn classify_from_report(report: &WidthReport, range: &WidthRange, tol: f64) -> Verdict {
    let d = report.mean_width;
    let threshold = tol * d.abs().max(1.0);
    if report.spread > threshold {
        Verdict::NotConstantWidth(report.spread)
    } else if range.contains_within(d, threshold) {
        Verdict::InCwD(d)
    } else {
        Verdict::ConstantButOutsideD(d)
    }
}

pub fn classify_constant_width(
    y: &Body,
    grid: &DirectionGrid,
    range: &WidthRange,
    tol: f64,
) -> Result<Verdict> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    Ok(classify_from_report(&width_report(y, grid)?, range, tol))
}

/// Hausdorff distance through the support embedding: `max_k |h_Y(u_k) - h_Z(u_k)|`.
/// A lower bound for the exact distance that converges as the grid refines.
pub fn hausdorff(y: &Body, z: &Body, grid: &DirectionGrid) -> Result<f64> {
    ensure_dim(y.dim(), z.dim())?;
    y.sample_support(grid)?.sup_distance(&z.sample_support(grid)?)
}

/// Exact for point hulls (largest pairwise distance); otherwise the largest
/// sampled width.
pub fn diameter(y: &Body, grid: &DirectionGrid) -> Result<f64> {
    if let crate::body::BodyExpr::PointHull(points) = y.expr() {
        let mut best = 0.0f64;
        for (i, p) in points.iter().enumerate() {
            for q in &points[i + 1..] {
                best = best.max(distance(p, q));
            }
        }
        return Ok(best);
    }
    Ok(width_report(y, grid)?.max_width)
}

/// Writes `theta_or_index,h(u),h(-u),w(u)` for every antipodal representative.
/// The first column is the planar angle in 2-D and the grid index otherwise.
pub fn write_width_csv<W: Write>(y: &Body, grid: &DirectionGrid, out: W) -> Result<()> {
    let sample = y.sample_support(grid)?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::invalid(format!("csv write failed: {e}"));
    w.write_record(["theta_or_index", "h(u)", "h(-u)", "w(u)"]).map_err(io)?;
    for k in grid.representatives() {
        let hu = sample.values[k];
        let hv = sample.values[grid.antipode(k)];
        let label = match grid.angle(k) {
            Some(t) => t.to_string(),
            None => k.to_string(),
        };
        w.write_record([label, hu.to_string(), hv.to_string(), (hu + hv).to_string()])
            .map_err(io)?;
    }
    w.flush().map_err(|e| Error::invalid(format!("csv flush failed: {e}")))?;
    Ok(())
}
