//! Simplicial depth: the fraction of closed (d+1)-vertex sample simplices
//! containing the query.
//!
//! In the plane the count is obtained in O(n log n) by complementary
//! counting: a triangle misses y exactly when its three vertices fit in an
//! open halfplane through y, and those triples are counted once each by
//! their first vertex in angular order.  Higher dimensions enumerate the
//! C(n, d+1) vertex subsets directly.

use crate::approx::{binomial, sample_subsets, ApproxConfig};
use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::geom::point_in_simplex_closed;
use crate::notion::{DepthNotion, DepthValue, Method};

pub struct SimplicialDepth;

impl SimplicialDepth {
    fn check(y: &[f64], data: &Dataset) -> Result<()> {
        data.require_complete("simplicial depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        if data.n() < data.dim() + 1 {
            return Err(DepthError::data(format!(
                "simplicial depth needs n >= d+1 ({} < {})",
                data.n(),
                data.dim() + 1
            )));
        }
        Ok(())
    }
}

impl DepthNotion for SimplicialDepth {
    fn name(&self) -> &'static str {
        "simplicial"
    }

    fn supports_approximate(&self) -> bool {
        true
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        Self::check(y, data)?;
        let rows = data.row_refs();
        let (contained, total) = simplicial_count(y, &rows)?;
        Ok(DepthValue::exact(
            "simplicial",
            contained as f64 / total as f64,
        ))
    }

    fn approximate(&self, y: &[f64], data: &Dataset, cfg: &ApproxConfig) -> Result<DepthValue> {
        Self::check(y, data)?;
        let rows = data.row_refs();
        let d = y.len();
        let scale = rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |m, &v| m.max(v.abs()));
        let mut hits = 0u64;
        let mut total = 0u64;
        sample_subsets(rows.len(), d + 1, cfg, |subset| {
            let verts: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
            if point_in_simplex_closed(y, &verts, scale).unwrap_or(false) {
                hits += 1;
            }
            total += 1;
        })?;
        Ok(DepthValue {
            value: hits as f64 / total as f64,
            raw_layer: None,
            notion: "simplicial",
            method: Method::Approximate,
        })
    }
}

/// Exact count of closed simplices containing y, with the total C(n, d+1).
pub fn simplicial_count(y: &[f64], rows: &[&[f64]]) -> Result<(u128, u128)> {
    let d = y.len();
    let n = rows.len();
    let total = binomial(n, d + 1);
    if d == 1 {
        return Ok((count_1d(y[0], rows), total));
    }
    if d == 2 {
        return Ok((count_2d(y, rows), total));
    }
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .chain(y.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()));
    let mut contained: u128 = 0;
    let mut verts: Vec<&[f64]> = Vec::with_capacity(d + 1);
    let mut err: Option<crate::error::DepthError> = None;
    super::halfspace::for_each_combination(n, d + 1, |subset| {
        if err.is_some() {
            return;
        }
        verts.clear();
        verts.extend(subset.iter().map(|&i| rows[i]));
        match point_in_simplex_closed(y, &verts, scale) {
            Ok(true) => contained += 1,
            Ok(false) => {}
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok((contained, total))
}

/// d = 1: a closed "simplex" is the segment between two sample values.
fn count_1d(y: f64, rows: &[&[f64]]) -> u128 {
    let le = rows.iter().filter(|r| r[0] <= y).count() as u128;
    let ge = rows.iter().filter(|r| r[0] >= y).count() as u128;
    let eq = rows.iter().filter(|r| r[0] == y).count() as u128;
    // Pairs spanning y: one on each side (coincident points belong to both).
    le * ge - eq * (eq + 1) / 2
}

/// d = 2: complementary angular count.  Triples containing a point
/// coincident with y always contain y; the remaining triples miss y exactly
/// when they fit in an open halfplane, i.e. an open angular semicircle.
fn count_2d(y: &[f64], rows: &[&[f64]]) -> u128 {
    let n = rows.len();
    let scale = rows
        .iter()
        .flat_map(|r| r.iter())
        .chain(y.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1e-300);
    let tol = 1e-13 * scale;
    let mut angles: Vec<f64> = Vec::with_capacity(n);
    for r in rows {
        let zx = r[0] - y[0];
        let zy = r[1] - y[1];
        if zx.abs().max(zy.abs()) > tol {
            angles.push(super::halfspace_diamond_angle(zx, zy));
        }
    }
    angles.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let m = angles.len();
    let total = binomial(n, 3);
    let mut outside: u128 = 0;
    let mut run_start = 0usize;
    for j in 0..m {
        if j > 0 && angles[j] != angles[j - 1] {
            run_start = j;
        }
        let p = angles[j];
        // Points strictly inside the open semicircle (p, p+2) in diamond
        // angle units, plus same-direction points later in the run (tie
        // break so each coplanar... collinear group is counted once).
        let within = if p < 2.0 {
            let t = p + 2.0;
            let hi = angles.partition_point(|&q| q < t);
            let lo = angles.partition_point(|&q| q <= p);
            hi - lo
        } else {
            let t = p - 2.0;
            let above = m - angles.partition_point(|&q| q <= p);
            let below = angles.partition_point(|&q| q < t);
            above + below
        };
        let run_later = angles[run_start..].partition_point(|&q| q <= p) - (j - run_start) - 1;
        let c = (within + run_later) as u128;
        outside += c * c.saturating_sub(1) / 2;
    }
    total - outside
}
