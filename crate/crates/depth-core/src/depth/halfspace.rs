//! Exact halfspace (Tukey) depth.
//!
//! The depth of y is the minimum, over closed halfspaces containing y, of
//! the fraction of sample points inside.  Minimizing halfspaces can be taken
//! to have y on their boundary, so the search runs over hyperplane normals:
//!
//! * d = 1: closed-form count min(#{x <= y}, #{x >= y});
//! * d = 2: every boundary line through y and a sample point, with collinear
//!   groups resolved combinatorially;
//! * d >= 3: enumeration of hyperplanes through y and d-1 sample points.
//!   Points falling on a candidate hyperplane are settled by recursing on
//!   the within-hyperplane configuration, which makes the count exact for
//!   ties, duplicates and other degeneracies.
//!
//! A rotating variant (one circular sweep per (d-2)-subset, the
//! O(n^{d-1} log n) scheme) is provided as a fast path for data in general
//! position; it is checked against the enumeration on random instances.

use crate::approx::ApproxConfig;
use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::{DepthNotion, DepthValue, Method};
use crate::rng::RandomSource;

pub struct HalfspaceDepth;

impl DepthNotion for HalfspaceDepth {
    fn name(&self) -> &'static str {
        "halfspace"
    }

    fn supports_approximate(&self) -> bool {
        true
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        data.require_complete("halfspace depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        let rows = data.row_refs();
        let (count, n) = halfspace_count(y, &rows);
        Ok(DepthValue::exact("halfspace", count as f64 / n as f64))
    }

    /// Random Tukey depth: minimum univariate depth over k seeded
    /// directions drawn uniformly on the unit sphere.
    fn approximate(&self, y: &[f64], data: &Dataset, cfg: &ApproxConfig) -> Result<DepthValue> {
        data.require_complete("random Tukey depth")?;
        cfg.validate()?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        let rows = data.row_refs();
        let (count, n) = random_tukey_count(y, &rows, cfg);
        Ok(DepthValue {
            value: count as f64 / n as f64,
            raw_layer: None,
            notion: "halfspace",
            method: Method::Approximate,
        })
    }
}

/// Exact count: depth = count / n.
pub fn halfspace_count(y: &[f64], rows: &[&[f64]]) -> (usize, usize) {
    let n = rows.len();
    let d = y.len();
    assert!(n >= 1);
    let scale = scale_of(y, rows);
    let (zs, coincident) = centered_nonzero(y, rows, scale);
    if zs.is_empty() {
        return (n, n);
    }
    let count = match d {
        1 => {
            let neg = zs.iter().filter(|z| z[0] < 0.0).count();
            neg.min(zs.len() - neg)
        }
        2 => min_count_2d(&zs),
        _ => min_count_recursive(&zs, scale),
    };
    (coincident + count, n)
}

/// Exact count by the rotating sweep; valid for data in general position
/// (no coincidences beyond those involving y itself).  `cutoff` enables
/// early exit: `None` is returned as soon as the running minimum drops
/// below `cutoff`, certifying that the exact count is smaller than it.
pub fn halfspace_count_rotating(
    y: &[f64],
    rows: &[&[f64]],
    cutoff: Option<usize>,
    shuffle_seed: u64,
) -> Option<(usize, usize)> {
    let n = rows.len();
    let d = y.len();
    let scale = scale_of(y, rows);
    let (zs, coincident) = centered_nonzero(y, rows, scale);
    if zs.is_empty() {
        return Some((n, n));
    }
    if d <= 2 {
        let (c, nn) = halfspace_count(y, rows);
        if let Some(cut) = cutoff {
            if c < cut {
                return None;
            }
        }
        return Some((c, nn));
    }

    let m = zs.len();
    if m < d - 2 {
        // Too few points to span any sweep: every direction orthogonal to
        // all of them gives the same degenerate picture; fall back.
        let (c, nn) = halfspace_count(y, rows);
        return Some((c, nn));
    }

    // Flat row-major copy keeps the inner projections cache friendly.
    let mut flat = vec![0.0f64; m * d];
    for (i, z) in zs.iter().enumerate() {
        flat[i * d..(i + 1) * d].copy_from_slice(z);
    }

    let tol = 1e-11 * scale;
    let mut sweep = SweepScratch {
        d,
        basis: vec![0.0; (d - 2) * d],
        scratch: vec![0.0; d],
        axis_a: vec![0.0; d],
        axis_b: vec![0.0; d],
        ws: Vec::with_capacity(m),
        angles: Vec::with_capacity(m),
    };

    // The anchor (smallest subset index) walks a shuffled order so that an
    // early-exit cutoff sees a spread of candidate hyperplanes; the other
    // d-3 indices run lexicographically above the anchor, so each subset is
    // visited exactly once.
    let mut outer: Vec<usize> = (0..m).collect();
    if cutoff.is_some() {
        let mut rng = RandomSource::with_stream(shuffle_seed, 0x726f74);
        rng.shuffle(&mut outer);
    }

    let mut best = usize::MAX;
    let stop_below = cutoff.map(|c| c.saturating_sub(coincident));
    let mut subset = vec![0usize; d - 2];
    for &first in &outer {
        subset[0] = first;
        let mut stopped = false;
        if d == 3 {
            if let Some(cand) = sweep.min_count(&flat, &subset, tol) {
                best = best.min(cand);
            }
            if let Some(stop) = stop_below {
                stopped = best < stop;
            }
        } else {
            let rest: Vec<usize> = ((first + 1)..m).collect();
            stopped = for_each_combination_until(rest.len(), d - 3, |idx| {
                for (pos, &ri) in idx.iter().enumerate() {
                    subset[pos + 1] = rest[ri];
                }
                if let Some(cand) = sweep.min_count(&flat, &subset, tol) {
                    if cand < best {
                        best = cand;
                    }
                }
                stop_below.map(|stop| best < stop).unwrap_or(false)
            });
        }
        if stopped {
            return None;
        }
    }
    Some((coincident + best.min(m), n))
}

struct SweepScratch {
    d: usize,
    basis: Vec<f64>,
    scratch: Vec<f64>,
    axis_a: Vec<f64>,
    axis_b: Vec<f64>,
    ws: Vec<(f64, f64)>,
    angles: Vec<f64>,
}

impl SweepScratch {
    /// Minimum strict one-side count over the circle of directions
    /// orthogonal to the subset's span; None for degenerate subsets.
    fn min_count(&mut self, flat: &[f64], subset: &[usize], tol: f64) -> Option<usize> {
        let d = self.d;
        let k = subset.len();
        // Orthonormalize the subset into the flat basis buffer.
        for (pos, &i) in subset.iter().enumerate() {
            self.scratch.copy_from_slice(&flat[i * d..(i + 1) * d]);
            for b in 0..pos {
                let row = &self.basis[b * d..(b + 1) * d];
                let dot: f64 = self.scratch.iter().zip(row).map(|(x, y)| x * y).sum();
                for (x, y) in self.scratch.iter_mut().zip(row) {
                    *x -= dot * y;
                }
            }
            let norm = self.scratch.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm <= tol {
                return None;
            }
            for x in self.scratch.iter_mut() {
                *x /= norm;
            }
            self.basis[pos * d..(pos + 1) * d].copy_from_slice(&self.scratch);
        }
        // Complete with two orthonormal complement axes.
        let mut found = 0usize;
        for axis in 0..d {
            if found == 2 {
                break;
            }
            self.scratch.iter_mut().for_each(|x| *x = 0.0);
            self.scratch[axis] = 1.0;
            for b in 0..k {
                let row = &self.basis[b * d..(b + 1) * d];
                let dot: f64 = self.scratch.iter().zip(row).map(|(x, y)| x * y).sum();
                for (x, y) in self.scratch.iter_mut().zip(row) {
                    *x -= dot * y;
                }
            }
            if found == 1 {
                let dot: f64 = self
                    .scratch
                    .iter()
                    .zip(&self.axis_a)
                    .map(|(x, y)| x * y)
                    .sum();
                for (x, y) in self.scratch.iter_mut().zip(&self.axis_a) {
                    *x -= dot * y;
                }
            }
            let norm = self.scratch.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-7 {
                for x in self.scratch.iter_mut() {
                    *x /= norm;
                }
                if found == 0 {
                    self.axis_a.copy_from_slice(&self.scratch);
                } else {
                    self.axis_b.copy_from_slice(&self.scratch);
                }
                found += 1;
            }
        }
        if found != 2 {
            return None;
        }
        self.ws.clear();
        let mn = flat.len() / d;
        // Fixed-width paths let the projection loop unroll.
        match d {
            3 => self.project_all::<3>(flat, subset, tol, mn),
            4 => self.project_all::<4>(flat, subset, tol, mn),
            5 => self.project_all::<5>(flat, subset, tol, mn),
            6 => self.project_all::<6>(flat, subset, tol, mn),
            _ => {
                for i in 0..mn {
                    if subset.contains(&i) {
                        continue;
                    }
                    let row = &flat[i * d..(i + 1) * d];
                    let mut wa = 0.0;
                    let mut wb = 0.0;
                    for j in 0..d {
                        wa += row[j] * self.axis_a[j];
                        wb += row[j] * self.axis_b[j];
                    }
                    if wa.abs().max(wb.abs()) > tol {
                        self.ws.push((wa, wb));
                    }
                }
            }
        }
        if self.ws.is_empty() {
            return None;
        }
        Some(min_count_circle(&self.ws, &mut self.angles))
    }

    fn project_all<const D: usize>(&mut self, flat: &[f64], subset: &[usize], tol: f64, mn: usize) {
        let aa: &[f64; D] = self.axis_a[..D].try_into().unwrap();
        let bb: &[f64; D] = self.axis_b[..D].try_into().unwrap();
        for i in 0..mn {
            if subset.contains(&i) {
                continue;
            }
            let row: &[f64; D] = flat[i * D..(i + 1) * D].try_into().unwrap();
            let mut wa = 0.0;
            let mut wb = 0.0;
            for j in 0..D {
                wa += row[j] * aa[j];
                wb += row[j] * bb[j];
            }
            if wa.abs().max(wb.abs()) > tol {
                self.ws.push((wa, wb));
            }
        }
    }
}

/// Like `for_each_combination`, but the callback may stop the enumeration by
/// returning true; the return value reports whether it did.
pub fn for_each_combination_until<F: FnMut(&[usize]) -> bool>(
    len: usize,
    k: usize,
    mut f: F,
) -> bool {
    if k > len {
        return false;
    }
    if k == 0 {
        return f(&[]);
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        if f(&subset) {
            return true;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if subset[i] != i + len - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Visit every size-k index subset of [0, len) in lexicographic order.
pub fn for_each_combination<F: FnMut(&[usize])>(len: usize, k: usize, mut f: F) {
    if k > len {
        return;
    }
    if k == 0 {
        f(&[]);
        return;
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        f(&subset);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if subset[i] != i + len - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn scale_of(y: &[f64], rows: &[&[f64]]) -> f64 {
    let mut s = y.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    for r in rows {
        for &v in r.iter() {
            s = s.max(v.abs());
        }
    }
    s.max(1e-300)
}

/// Centered differences x_i - y, dropping exact coincidences (returned as a
/// count; they lie in every closed halfspace through y).
fn centered_nonzero(y: &[f64], rows: &[&[f64]], scale: f64) -> (Vec<Vec<f64>>, usize) {
    let tol = 1e-13 * scale;
    let mut zs = Vec::with_capacity(rows.len());
    let mut coincident = 0usize;
    for r in rows {
        let z: Vec<f64> = r.iter().zip(y).map(|(a, b)| a - b).collect();
        if z.iter().map(|v| v * v).sum::<f64>().sqrt() <= tol {
            coincident += 1;
        } else {
            zs.push(z);
        }
    }
    (zs, coincident)
}

/// d = 2: enumerate candidate boundary lines (one per collinear group).
/// A group's own points can be rotated off the line; the minimum that must
/// remain is the smaller ray count.
fn min_count_2d(zs: &[Vec<f64>]) -> usize {
    let m = zs.len();
    let mut visited = vec![false; m];
    let mut best = usize::MAX;
    for i in 0..m {
        if visited[i] {
            continue;
        }
        let (zx, zy) = (zs[i][0], zs[i][1]);
        let mut left = 0usize;
        let mut right = 0usize;
        let mut ray_plus = 0usize;
        let mut ray_minus = 0usize;
        for (j, z) in zs.iter().enumerate() {
            let cross = zx * z[1] - zy * z[0];
            if cross > 0.0 {
                left += 1;
            } else if cross < 0.0 {
                right += 1;
            } else {
                visited[j] = true;
                let dot = zx * z[0] + zy * z[1];
                if dot > 0.0 {
                    ray_plus += 1;
                } else {
                    ray_minus += 1;
                }
            }
        }
        let cand = left.min(right) + ray_plus.min(ray_minus);
        best = best.min(cand);
    }
    best.min(m)
}

/// General-dimension enumeration with recursive handling of points on the
/// candidate hyperplane.
fn min_count_recursive(zs: &[Vec<f64>], scale: f64) -> usize {
    let d = zs[0].len();
    let tol = 1e-11 * scale;

    // Reduce to the span when the configuration is not full-dimensional.
    let span = gram_schmidt_span(zs, tol);
    if span.len() < d {
        if span.is_empty() {
            return zs.len();
        }
        let reduced: Vec<Vec<f64>> = zs
            .iter()
            .map(|z| span.iter().map(|b| dot(z, b)).collect())
            .collect();
        return min_count_in_rank(&reduced, scale);
    }
    min_count_in_rank(zs, scale)
}

/// Core recursion over a full-rank configuration.
fn min_count_in_rank(zs: &[Vec<f64>], scale: f64) -> usize {
    let d = zs[0].len();
    let m = zs.len();
    let tol = 1e-11 * scale;
    if d == 1 {
        let neg = zs.iter().filter(|z| z[0] < 0.0).count();
        let pos = zs.iter().filter(|z| z[0] > 0.0).count();
        return neg.min(pos);
    }
    if d == 2 {
        return min_count_2d(zs);
    }

    let k = d - 1;
    if m < k {
        // Cannot span any hyperplane: all points fit in the reduced span
        // already handled by the caller; treat conservatively.
        return m;
    }
    let mut best = m;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        if let Some(cand) = candidate_for_subset(zs, &subset, scale, tol) {
            best = best.min(cand);
        }
        // Next lexicographic combination.
        let mut i = k;
        loop {
            if i == 0 {
                return best;
            }
            i -= 1;
            if subset[i] != i + m - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
    }
}

fn candidate_for_subset(zs: &[Vec<f64>], subset: &[usize], scale: f64, tol: f64) -> Option<usize> {
    let d = zs[0].len();
    // Orthonormalize the subset; a rank-deficient subset spans no hyperplane.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d - 1);
    for &i in subset {
        let mut v = zs[i].clone();
        for b in &basis {
            let p = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm <= tol {
            return None;
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        basis.push(v);
    }
    // Unit normal: any direction orthogonal to the basis.
    let mut normal: Option<Vec<f64>> = None;
    for axis in 0..d {
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        for b in &basis {
            let p = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > 1e-7 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            normal = Some(v);
            break;
        }
    }
    let normal = normal?;

    let mut neg = 0usize;
    let mut pos = 0usize;
    let mut onplane: Vec<Vec<f64>> = Vec::new();
    for z in zs {
        let s = dot(z, &normal);
        if s > tol {
            pos += 1;
        } else if s < -tol {
            neg += 1;
        } else {
            // Coordinates within the hyperplane: the components along the
            // subset basis plus completions orthogonal to the normal.
            onplane.push(z.clone());
        }
    }
    // Points on the hyperplane are settled by the same problem one
    // dimension down, inside the hyperplane.  The subset basis is an
    // orthonormal basis of the hyperplane, so coordinates are plain dots.
    let rec = if onplane.is_empty() {
        0
    } else {
        let reduced: Vec<Vec<f64>> = onplane
            .iter()
            .map(|z| basis.iter().map(|b| dot(z, b)).collect())
            .collect();
        min_count_recursive(&reduced, scale)
    };
    Some(neg.min(pos) + rec)
}

fn gram_schmidt_span(zs: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let d = zs[0].len();
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for z in zs {
        if basis.len() == d {
            break;
        }
        let mut v = z.clone();
        for b in &basis {
            let p = dot(&v, b);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= p * y;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm > tol {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

use super::halfspace_diamond_angle as diamond_angle;

/// Minimum over directions u on the circle of the number of points strictly
/// on one side, for a configuration in general position: at the optimal
/// event the boundary passes through exactly one point, which can always be
/// rotated off.
///
/// After sorting by diamond angle, the half-turn window (p_j, p_j + 2) is
/// counted with two monotone pointers over the circularly doubled array.
fn min_count_circle(ws: &[(f64, f64)], angles: &mut Vec<f64>) -> usize {
    let m = ws.len();
    if m == 0 {
        return usize::MAX;
    }
    angles.clear();
    for &(x, y) in ws {
        angles.push(diamond_angle(x, y));
    }
    angles.sort_unstable_by(f64::total_cmp);
    for i in 0..m {
        let v = angles[i] + 4.0;
        angles.push(v);
    }
    let mut best = usize::MAX;
    let mut lo = 0usize; // first doubled index with value > p_j
    let mut hi = 0usize; // first doubled index with value >= p_j + 2
    for j in 0..m {
        let p = angles[j];
        if lo <= j {
            lo = j + 1;
        }
        while lo < 2 * m && angles[lo] <= p {
            lo += 1;
        }
        if hi < lo {
            hi = lo;
        }
        let t = p + 2.0;
        while hi < 2 * m && angles[hi] < t {
            hi += 1;
        }
        let a = hi - lo;
        let b = m - 1 - a;
        best = best.min(a.min(b));
        if best == 0 {
            break;
        }
    }
    angles.truncate(m);
    best
}

/// Random-Tukey count: minimum univariate count over k seeded directions.
pub fn random_tukey_count(y: &[f64], rows: &[&[f64]], cfg: &ApproxConfig) -> (usize, usize) {
    let d = y.len();
    let n = rows.len();
    let mut rng = cfg.rng();
    let mut best = n;
    for _ in 0..cfg.k {
        let dir = rng.unit_sphere_direction(d);
        let py = dot(y, &dir);
        let mut le = 0usize;
        let mut ge = 0usize;
        for r in rows {
            let p = dot(r, &dir);
            if p <= py {
                le += 1;
            }
            if p >= py {
                ge += 1;
            }
        }
        best = best.min(le.min(ge));
        if best == 0 {
            break;
        }
    }
    (best, n)
}

/// Random Tukey depth of every sample point against the remaining sample,
/// sharing each direction's projections across all points.
pub fn random_tukey_counts_all(data: &Dataset, cfg: &ApproxConfig) -> Result<Vec<(usize, usize)>> {
    data.require_complete("random Tukey depth")?;
    cfg.validate()?;
    let n = data.n();
    let d = data.dim();
    let mut rng = cfg.rng();
    let mut best = vec![n - 1; n];
    let mut proj = vec![0.0f64; n];
    let mut sorted = vec![0.0f64; n];
    for _ in 0..cfg.k {
        let dir = rng.unit_sphere_direction(d);
        for (i, r) in data.rows().enumerate() {
            proj[i] = dot(r, &dir);
        }
        sorted.copy_from_slice(&proj);
        sorted.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
        for i in 0..n {
            let v = proj[i];
            // Leave-one-out counts from the full sorted projections.
            let le = sorted.partition_point(|&x| x <= v) - 1;
            let lt = sorted.partition_point(|&x| x < v);
            let ge = n - lt - 1;
            let c = le.min(ge);
            if c < best[i] {
                best[i] = c;
            }
        }
    }
    Ok(best.into_iter().map(|c| (c, n - 1)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn refs(rows: &[Vec<f64>]) -> Vec<&[f64]> {
        rows.iter().map(|r| r.as_slice()).collect()
    }

    #[test]
    fn univariate_closed_form() {
        // sample {1,2,3,4,5}, y = 2 -> 2/5
        let rows: Vec<Vec<f64>> = [1.0, 2.0, 3.0, 4.0, 5.0].iter().map(|&v| vec![v]).collect();
        let (c, n) = halfspace_count(&[2.0], &refs(&rows));
        assert_eq!((c, n), (2, 5));
    }

    #[test]
    fn square_center_is_half() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        let (c, n) = halfspace_count(&[0.5, 0.5], &refs(&rows));
        assert_eq!((c, n), (2, 4));
    }

    #[test]
    fn outside_hull_is_zero() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ];
        let (c, _) = halfspace_count(&[3.0, 3.0], &refs(&rows));
        assert_eq!(c, 0);
    }

    #[test]
    fn square_plus_center_depths() {
        // With the center included in the sample, every closed halfplane
        // containing the center holds the center plus at least two corners.
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ];
        let r = refs(&rows);
        assert_eq!(halfspace_count(&[0.5, 0.5], &r), (3, 5));
        for corner in &rows[..4] {
            assert_eq!(halfspace_count(corner, &r), (1, 5));
        }
    }

    #[test]
    fn duplicate_points_count_with_multiplicity() {
        let rows = vec![vec![0.0], vec![0.0], vec![1.0], vec![2.0]];
        let (c, n) = halfspace_count(&[0.0], &refs(&rows));
        // x = 0 holds two coincident points; left count 2, right count 4.
        assert_eq!((c, n), (2, 4));
    }

    #[test]
    fn vertex_of_simplex_3d() {
        let rows = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let r = refs(&rows);
        assert_eq!(halfspace_count(&[0.0, 0.0, 0.0], &r), (1, 4));
        // Centroid: any closed halfspace through it keeps at least one vertex
        // on each side pairing; exact value is 1/4 (cut off one vertex).
        let c = halfspace_count(&[0.25, 0.25, 0.25], &r);
        assert_eq!(c, (1, 4));
    }

    #[test]
    fn degenerate_planar_data_in_3d() {
        // All points on the plane z = 0; depth must match the 2-D answer.
        let rows3: Vec<Vec<f64>> = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ];
        let (c, n) = halfspace_count(&[0.5, 0.5, 0.0], &refs(&rows3));
        assert_eq!((c, n), (2, 4));
    }

    #[test]
    fn rotating_matches_enumeration_random() {
        let mut rng = RandomSource::new(123);
        for trial in 0..150 {
            let d = 3 + (trial % 3); // 3, 4, 5
            let n = 8 + (trial % 13);
            let rows: Vec<Vec<f64>> = (0..n).map(|_| rng.gaussian_vec(d)).collect();
            let y = rng.gaussian_vec(d);
            let r = refs(&rows);
            let slow = halfspace_count(&y, &r);
            let fast = halfspace_count_rotating(&y, &r, None, 0).unwrap();
            assert_eq!(slow, fast, "trial {trial} d={d} n={n}");
        }
    }

    #[test]
    fn rotating_cutoff_certifies_smaller() {
        let mut rng = RandomSource::new(321);
        for _ in 0..50 {
            let rows: Vec<Vec<f64>> = (0..20).map(|_| rng.gaussian_vec(3)).collect();
            let y = rng.gaussian_vec(3);
            let r = refs(&rows);
            let (exact, _) = halfspace_count(&y, &r);
            if exact > 0 {
                assert!(halfspace_count_rotating(&y, &r, Some(exact + 1), 7).is_none());
            }
            assert!(halfspace_count_rotating(&y, &r, Some(exact), 7).is_some());
        }
    }

    #[test]
    fn rtd_upper_bounds_exact() {
        let mut rng = RandomSource::new(55);
        for trial in 0..60 {
            let d = 2 + (trial % 3);
            let rows: Vec<Vec<f64>> = (0..15).map(|_| rng.gaussian_vec(d)).collect();
            let y = rng.gaussian_vec(d);
            let r = refs(&rows);
            let (exact, n) = halfspace_count(&y, &r);
            let cfg = ApproxConfig::new(64, trial as u64);
            let (rtd, n2) = random_tukey_count(&y, &r, &cfg);
            assert_eq!(n, n2);
            assert!(rtd >= exact, "trial {trial}: rtd {rtd} < exact {exact}");
        }
    }

    #[test]
    fn rtd_equals_exact_in_1d() {
        let rows: Vec<Vec<f64>> = [3.0, 1.0, 4.0, 1.0, 5.0].iter().map(|&v| vec![v]).collect();
        let r = refs(&rows);
        for y in [0.5, 1.0, 2.0, 4.5] {
            let (exact, _) = halfspace_count(&[y], &r);
            let cfg = ApproxConfig::new(1, 9);
            let (rtd, _) = random_tukey_count(&[y], &r, &cfg);
            assert_eq!(rtd, exact);
        }
    }

    #[test]
    fn rtd_all_matches_per_point() {
        let mut rng = RandomSource::new(77);
        let rows: Vec<Vec<f64>> = (0..12).map(|_| rng.gaussian_vec(2)).collect();
        let data = Dataset::from_rows(rows.clone()).unwrap();
        let cfg = ApproxConfig::new(50, 4);
        let all = random_tukey_counts_all(&data, &cfg).unwrap();
        // The batch variant shares directions; with the same k and seed the
        // per-point variant on the leave-one-out sample must agree.
        for i in 0..rows.len() {
            let rest: Vec<Vec<f64>> = rows
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, r)| r.clone())
                .collect();
            let (c, n) = random_tukey_count(&rows[i], &refs(&rest), &cfg);
            assert_eq!((c, n), all[i], "point {i}");
        }
    }
}
