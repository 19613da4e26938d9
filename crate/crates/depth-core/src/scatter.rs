//! Location/scatter estimation and the whitening transform
//! x -> R^{-1/2}(x - theta) that upgrades rigid-body-invariant depths to
//! affine invariance.
//!
//! Two estimators are provided: the moment pair (mean, covariance with
//! divisor n) and the minimum covariance determinant with C-step refinement
//! over random starts.  MCD values carry no consistency rescaling; the factor
//! cancels wherever only orderings or containments matter, but it does change
//! Mahalanobis depth values, so callers who need the consistent scale must
//! post-multiply the scatter themselves.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::matrix::SquareMatrix;
use crate::rng::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScatterKind {
    Moment,
    Mcd { alpha: f64 },
}

/// A fitted location vector, scatter matrix and derived transforms.
#[derive(Debug, Clone)]
pub struct ScatterModel {
    pub location: Vec<f64>,
    pub scatter: SquareMatrix,
    pub whitener: SquareMatrix,
    pub inverse: SquareMatrix,
    pub kind: ScatterKind,
}

impl ScatterModel {
    fn build(location: Vec<f64>, scatter: SquareMatrix, kind: ScatterKind) -> Result<Self> {
        let whitener = scatter.inverse_sqrt()?;
        let inverse = scatter.cholesky_inverse()?;
        Ok(ScatterModel {
            location,
            scatter,
            whitener,
            inverse,
            kind,
        })
    }

    pub fn dim(&self) -> usize {
        self.location.len()
    }

    /// Squared Mahalanobis norm of (x - location).
    pub fn mahalanobis_sq(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let d = self.dim();
        let mut z = vec![0.0; d];
        for i in 0..d {
            z[i] = x[i] - self.location[i];
        }
        let w = self.inverse.apply(&z);
        Ok(z.iter().zip(&w).map(|(a, b)| a * b).sum())
    }

    pub fn whiten_point(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let d = self.dim();
        let mut z = vec![0.0; d];
        for i in 0..d {
            z[i] = x[i] - self.location[i];
        }
        Ok(self.whitener.apply(&z))
    }
}

fn mean_of(rows: &[&[f64]], d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d];
    for r in rows {
        for j in 0..d {
            m[j] += r[j];
        }
    }
    for v in &mut m {
        *v /= rows.len() as f64;
    }
    m
}

/// Covariance with divisor n (empirical-distribution moments).
fn covariance_of(rows: &[&[f64]], mean: &[f64], d: usize) -> SquareMatrix {
    let mut cov = SquareMatrix::zeros(d);
    for r in rows {
        for i in 0..d {
            let zi = r[i] - mean[i];
            for j in i..d {
                cov[(i, j)] += zi * (r[j] - mean[j]);
            }
        }
    }
    let n = rows.len() as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov[(i, j)] / n;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    cov
}

/// Arithmetic mean and covariance (divisor n).
pub fn moment_scatter(data: &Dataset) -> Result<ScatterModel> {
    data.require_complete("moment scatter")?;
    if data.n() < 2 {
        return Err(DepthError::data("moment scatter needs n >= 2"));
    }
    let rows = data.row_refs();
    let d = data.dim();
    let mean = mean_of(&rows, d);
    let cov = covariance_of(&rows, &mean, d);
    ScatterModel::build(mean, cov, ScatterKind::Moment).map_err(|e| match e {
        DepthError::SingularScatter(m) => DepthError::SingularScatter(format!(
            "covariance is singular ({m}); consider reducing the dimension"
        )),
        other => other,
    })
}

/// Minimum covariance determinant over h = ceil(alpha * n) points, found by
/// C-steps from random (d+1)-point starts.  Deterministic for a given seed;
/// ties between equal determinants resolve to the earliest start.
pub fn mcd_scatter(
    data: &Dataset,
    alpha: f64,
    rng: &mut RandomSource,
    n_starts: usize,
    max_csteps: usize,
) -> Result<ScatterModel> {
    data.require_complete("MCD scatter")?;
    if !(0.5 < alpha && alpha <= 1.0) {
        return Err(DepthError::data("MCD alpha must lie in (0.5, 1]"));
    }
    let n = data.n();
    let d = data.dim();
    let h = (alpha * n as f64).ceil() as usize;
    if h <= d {
        return Err(DepthError::data(format!(
            "MCD subset size h={h} must exceed dimension d={d}"
        )));
    }
    let rows = data.row_refs();
    if h == n {
        let model = moment_scatter(data)?;
        return Ok(ScatterModel {
            kind: ScatterKind::Mcd { alpha },
            ..model
        });
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut idx_buf: Vec<usize> = Vec::new();
    for _start in 0..n_starts {
        // Initial subset: d+1 random points, expanded while singular.
        rng.distinct_indices(n, (d + 1).min(n), &mut idx_buf);
        let mut subset = idx_buf.clone();
        let mut model = fit_subset(&rows, &subset, d);
        while model.is_none() && subset.len() < n {
            let mut extra = rng.next_index(n);
            while subset.contains(&extra) {
                extra = rng.next_index(n);
            }
            subset.push(extra);
            model = fit_subset(&rows, &subset, d);
        }
        let (mut mean, mut inv, mut det) = match model {
            Some(m) => m,
            None => continue,
        };

        // C-steps: keep the h smallest Mahalanobis distances, refit, repeat.
        // The determinant is non-increasing across consecutive h-subset fits.
        let mut current: Vec<usize> = Vec::new();
        let mut have_h_fit = false;
        for _step in 0..max_csteps {
            let mut dists: Vec<(f64, usize)> = (0..n)
                .map(|i| {
                    let z: Vec<f64> = rows[i]
                        .iter()
                        .zip(&mean)
                        .map(|(a, b)| a - b)
                        .collect();
                    let w = inv.apply(&z);
                    let dsq: f64 = z.iter().zip(&w).map(|(a, b)| a * b).sum();
                    (dsq, i)
                })
                .collect();
            dists.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
            let next: Vec<usize> = dists[..h].iter().map(|&(_, i)| i).collect();
            if next == current {
                break;
            }
            match fit_subset(&rows, &next, d) {
                Some((m2, inv2, det2)) => {
                    debug_assert!(!have_h_fit || det2 <= det * (1.0 + 1e-9));
                    mean = m2;
                    inv = inv2;
                    det = det2;
                    have_h_fit = true;
                    current = next;
                }
                None => break,
            }
        }
        if current.is_empty() {
            continue;
        }
        let better = match &best {
            None => true,
            Some((bd, _)) => det < *bd,
        };
        if better {
            best = Some((det, current));
        }
    }

    let (_, subset) = best.ok_or_else(|| {
        DepthError::SingularScatter("every MCD candidate subset was singular".into())
    })?;
    let sub_rows: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
    let mean = mean_of(&sub_rows, d);
    let cov = covariance_of(&sub_rows, &mean, d);
    ScatterModel::build(mean, cov, ScatterKind::Mcd { alpha })
}

/// Mean, inverse covariance and determinant of a subset; None when singular.
#[allow(clippy::type_complexity)]
fn fit_subset(
    rows: &[&[f64]],
    subset: &[usize],
    d: usize,
) -> Option<(Vec<f64>, SquareMatrix, f64)> {
    let sub: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
    let mean = mean_of(&sub, d);
    let cov = covariance_of(&sub, &mean, d);
    let inv = cov.cholesky_inverse().ok()?;
    Some((mean, inv, cov.determinant()))
}

/// Whiten every row of a dataset; ids are preserved.
pub fn whiten(data: &Dataset, model: &ScatterModel) -> Result<Dataset> {
    data.require_complete("whitening")?;
    if data.dim() != model.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: model.dim(),
            got: data.dim(),
        });
    }
    let rows: Result<Vec<Vec<f64>>> = data.rows().map(|r| model.whiten_point(r)).collect();
    data.with_points(rows?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dataset(rows: &[[f64; 2]]) -> Dataset {
        Dataset::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn moment_square_example() {
        // {(0,0),(2,0),(0,2),(2,2)}: mean (1,1), covariance diag(1,1) with divisor n.
        let data = dataset(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0]]);
        let m = moment_scatter(&data).unwrap();
        assert_eq!(m.location, vec![1.0, 1.0]);
        assert!((m.scatter[(0, 0)] - 1.0).abs() <= 1e-12);
        assert!((m.scatter[(1, 1)] - 1.0).abs() <= 1e-12);
        assert!(m.scatter[(0, 1)].abs() <= 1e-12);
    }

    #[test]
    fn moment_needs_two_points() {
        let data = Dataset::from_rows(vec![vec![1.0, 2.0]]).unwrap();
        assert!(moment_scatter(&data).is_err());
    }

    #[test]
    fn moment_collinear_singular() {
        let data = dataset(&[[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]]);
        assert!(matches!(
            moment_scatter(&data),
            Err(DepthError::SingularScatter(_))
        ));
    }

    #[test]
    fn whiten_gives_identity_covariance() {
        let mut rng = RandomSource::new(21);
        let rows: Vec<Vec<f64>> = (0..200)
            .map(|_| {
                let g = rng.gaussian_vec(2);
                vec![2.0 * g[0] + 1.0, 3.0 * g[1] + 0.5 * g[0] - 2.0]
            })
            .collect();
        let data = Dataset::from_rows(rows).unwrap();
        let model = moment_scatter(&data).unwrap();
        let white = whiten(&data, &model).unwrap();
        let wm = moment_scatter(&white).unwrap();
        assert!(wm.location.iter().all(|&v| v.abs() <= 1e-8));
        assert!(wm.scatter.max_abs_diff(&SquareMatrix::identity(2)) <= 1e-8);
    }

    #[test]
    fn whiten_idempotent_on_white_data() {
        let data = dataset(&[[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
        let model = moment_scatter(&data).unwrap();
        let white = whiten(&data, &model).unwrap();
        // Already has mean 0 and covariance I/2 -> whitening only rescales;
        // applying the fitted transform to already-white data is identity.
        let model2 = moment_scatter(&white).unwrap();
        let white2 = whiten(&white, &model2).unwrap();
        for (a, b) in white.rows().zip(white2.rows()) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn whiten_dimension_mismatch() {
        let data = dataset(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let model = moment_scatter(&data).unwrap();
        let other = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(whiten(&other, &model).is_err());
    }

    #[test]
    fn mcd_alpha_one_is_moment() {
        let data = dataset(&[[0.0, 0.0], [2.0, 0.0], [0.0, 2.0], [2.0, 2.0], [1.0, 1.5]]);
        let mut rng = RandomSource::new(3);
        let mcd = mcd_scatter(&data, 1.0, &mut rng, 10, 20).unwrap();
        let moment = moment_scatter(&data).unwrap();
        assert!(mcd.scatter.max_abs_diff(&moment.scatter) <= 1e-12);
        assert_eq!(mcd.location, moment.location);
    }

    #[test]
    fn mcd_deterministic_for_seed() {
        let mut rng1 = RandomSource::new(5);
        let mut rng2 = RandomSource::new(5);
        let mut rng_data = RandomSource::new(6);
        let rows: Vec<Vec<f64>> = (0..40).map(|_| rng_data.gaussian_vec(3)).collect();
        let data = Dataset::from_rows(rows).unwrap();
        let a = mcd_scatter(&data, 0.75, &mut rng1, 50, 30).unwrap();
        let b = mcd_scatter(&data, 0.75, &mut rng2, 50, 30).unwrap();
        assert_eq!(a.location, b.location);
        assert!(a.scatter.max_abs_diff(&b.scatter) == 0.0);
    }

    #[test]
    fn mcd_h_must_exceed_dim() {
        let data = dataset(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
        let mut rng = RandomSource::new(1);
        assert!(mcd_scatter(&data, 0.51, &mut rng, 10, 10).is_err());
    }

    /// Exhaustive minimum-determinant search over all h-subsets.
    fn exhaustive_mcd(rows: &[&[f64]], h: usize, d: usize) -> (f64, Vec<usize>) {
        let n = rows.len();
        let mut best = (f64::INFINITY, Vec::new());
        let mut subset: Vec<usize> = (0..h).collect();
        loop {
            let sub: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
            let mean = mean_of(&sub, d);
            let cov = covariance_of(&sub, &mean, d);
            if cov.cholesky().is_ok() {
                let det = cov.determinant();
                if det < best.0 {
                    best = (det, subset.clone());
                }
            }
            // Next combination in lexicographic order.
            let mut i = h;
            loop {
                if i == 0 {
                    return best;
                }
                i -= 1;
                if subset[i] != i + n - h {
                    break;
                }
            }
            if subset[i] == i + n - h {
                return best;
            }
            subset[i] += 1;
            for j in (i + 1)..h {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }

    #[test]
    fn mcd_matches_exhaustive_on_contaminated_sample() {
        // 10 clean points and 2 gross outliers; alpha = 0.75 -> h = 9.
        let mut rng = RandomSource::new(8);
        let mut rows: Vec<Vec<f64>> = (0..10).map(|_| rng.gaussian_vec(2)).collect();
        rows.push(vec![50.0, 50.0]);
        rows.push(vec![-60.0, 45.0]);
        let data = Dataset::from_rows(rows).unwrap();
        let refs = data.row_refs();
        let h = (0.75 * 12.0_f64).ceil() as usize;
        let (best_det, best_subset) = exhaustive_mcd(&refs, h, 2);

        let mut fit_rng = RandomSource::new(77);
        let model = mcd_scatter(&data, 0.75, &mut fit_rng, 500, 50).unwrap();
        let det = model.scatter.determinant();
        assert!(
            (det - best_det).abs() <= 1e-9 * best_det.max(1e-300),
            "C-step determinant {det} vs exhaustive {best_det} (subset {best_subset:?})"
        );
        // Outliers must not be in the optimal subset.
        assert!(!best_subset.contains(&10) && !best_subset.contains(&11));
    }
}
