//! Zonoid depth.
//!
//! Empirically the depth of y is the largest alpha such that y is a convex
//! combination of the sample with every weight at most 1/(alpha n):
//! minimize the weight ceiling t subject to sum lambda_i x_i = y,
//! sum lambda_i = 1, 0 <= lambda_i <= t, and report 1/(n t*).  Points
//! outside the convex hull have depth 0 (the program is infeasible).
//!
//! The ceiling is found by bisection over bounded-variable feasibility
//! programs with d+1 rows, which stays fast for n in the thousands; the
//! generic simplex solves the same program directly in the test suite.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::lp::bounded_feasible_tol;
use crate::notion::{DepthNotion, DepthValue};

pub struct ZonoidDepth;

impl DepthNotion for ZonoidDepth {
    fn name(&self) -> &'static str {
        "zonoid"
    }

    /// Masked datasets are served through column-mean imputation; zonoid
    /// depth is the one notion defined for incomplete samples.
    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        if data.has_missing() {
            return Ok(DepthValue::exact("zonoid", zonoid_depth_imputed(y, data)?));
        }
        let rows = data.row_refs();
        Ok(DepthValue::exact("zonoid", zonoid_depth(y, &rows)?))
    }
}

pub fn zonoid_depth(y: &[f64], rows: &[&[f64]]) -> Result<f64> {
    if y.len() == 1 && !rows.is_empty() {
        let values: Vec<f64> = rows.iter().map(|r| r[0]).collect();
        return Ok(zonoid_depth_1d(y[0], &values));
    }
    zonoid_depth_lp(y, rows)
}

/// The weight-ceiling program solved by bisection over bounded-variable
/// feasibility; `zonoid_depth` routes d = 1 to the closed form instead.
pub fn zonoid_depth_lp(y: &[f64], rows: &[&[f64]]) -> Result<f64> {
    let n = rows.len();
    let d = y.len();
    if n == 0 {
        return Err(DepthError::data("empty sample"));
    }
    // The mean is the unique depth-1 point; catching it exactly avoids the
    // fully degenerate cap = 1/n feasibility probe.
    {
        let mut mean = vec![0.0; d];
        for r in rows {
            for (m, v) in mean.iter_mut().zip(r.iter()) {
                *m += v;
            }
        }
        let mut dist = 0.0f64;
        let mut size = 0.0f64;
        for k in 0..d {
            mean[k] /= n as f64;
            dist = dist.max((mean[k] - y[k]).abs());
            size = size.max(mean[k].abs()).max(y[k].abs());
        }
        if dist <= 1e-14 * size.max(1e-300) {
            return Ok(1.0);
        }
    }

    // Columns of the (d+1)-row system: [x_i - y; 1], with each coordinate
    // row rescaled to unit size so feasibility tolerances are invariant
    // under affine maps of the data.
    let mut row_scale = vec![0.0f64; d];
    for r in rows {
        for k in 0..d {
            row_scale[k] = row_scale[k].max((r[k] - y[k]).abs());
        }
    }
    for s in row_scale.iter_mut() {
        if *s <= 1e-300 {
            *s = 1.0;
        }
    }
    let cols: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| {
            let mut c: Vec<f64> = r
                .iter()
                .zip(y)
                .zip(&row_scale)
                .map(|((a, b), s)| (a - b) / s)
                .collect();
            c.push(1.0);
            c
        })
        .collect();
    let mut b = vec![0.0; d + 1];
    b[d] = 1.0;
    // Rows are unit-scaled, so the transition can be pinned near the
    // floating noise floor; keeps the computed value affine-stable.
    let tol = 1e-12;

    // Outside the hull: infeasible even with the loosest ceiling.
    if !bounded_feasible_tol(&cols, &b, 1.0, tol)? {
        return Ok(0.0);
    }
    // Bisection on the ceiling t in [1/n, 1]; feasibility is monotone in t.
    let mut lo = 1.0 / n as f64; // feasible only when y is the mean
    let mut hi = 1.0;
    if bounded_feasible_tol(&cols, &b, lo, tol)? {
        return Ok(1.0);
    }
    for _ in 0..70 {
        let mid = 0.5 * (lo + hi);
        if bounded_feasible_tol(&cols, &b, mid, tol)? {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    Ok(1.0 / (n as f64 * hi))
}

/// Univariate zonoid depth in closed form: load the extreme points at the
/// weight ceiling until the capped mean reaches v.
pub fn zonoid_depth_1d(v: f64, values: &[f64]) -> f64 {
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = sorted.iter().sum::<f64>() / n as f64;
    if v < sorted[0] || v > sorted[n - 1] {
        return 0.0;
    }
    if v == mean {
        return 1.0;
    }
    // Mirror the above-mean case.
    if v > mean {
        let neg: Vec<f64> = sorted.iter().rev().map(|x| -x).collect();
        return zonoid_lower_side(-v, &neg);
    }
    zonoid_lower_side(v, &sorted)
}

/// v lies between min and mean of the ascending sample.  With ell(t) the
/// mean of the t smallest observations (fractional weight on the last),
/// ell is non-decreasing and the depth is max{t : ell(t) <= v} / n: walk
/// the segments [k, k+1] until ell crosses v and solve the crossing.
fn zonoid_lower_side(v: f64, sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let mut prefix = sorted[0]; // sum of the k smallest, k = 1 initially
    for k in 1..n {
        let x = sorted[k]; // the (k+1)-st smallest
        let ell_hi = (prefix + x) / (k + 1) as f64;
        if ell_hi <= v {
            prefix += x;
            continue;
        }
        // Crossing inside [k, k+1]: (prefix + (t - k) x) / t = v.
        let t = (prefix - k as f64 * x) / (v - x);
        return t / n as f64;
    }
    1.0
}

/// Zonoid depth with column-mean imputation of masked entries.  Imputing the
/// mean never raises the depth (the missing-data lower bound).
pub fn zonoid_depth_imputed(y: &[f64], data: &Dataset) -> Result<f64> {
    let n = data.n();
    let d = data.dim();
    if y.len() != d {
        return Err(DepthError::DimensionMismatch {
            expected: d,
            got: y.len(),
        });
    }
    let mut rows: Vec<Vec<f64>> = data.rows().map(|r| r.to_vec()).collect();
    for j in 0..d {
        let observed: Vec<f64> = (0..n)
            .filter(|&i| !data.is_missing(i, j))
            .map(|i| rows[i][j])
            .collect();
        if observed.is_empty() {
            return Err(DepthError::data(format!(
                "column {j} has no observed values to impute from"
            )));
        }
        let mean = observed.iter().sum::<f64>() / observed.len() as f64;
        for i in 0..n {
            if data.is_missing(i, j) {
                rows[i][j] = mean;
            }
        }
    }
    let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
    zonoid_depth(y, &refs)
}
