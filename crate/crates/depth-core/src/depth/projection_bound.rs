//! Upper bounds from the projection property: for the halfspace, Mahalanobis
//! and zonoid depths, the depth is the infimum of the corresponding
//! univariate depths over all directions, so any finite direction set yields
//! an upper bound.  Queries with missing coordinates are bounded by
//! restricting everything to the observed coordinate subspace.

use crate::dataset::Dataset;
use crate::depth::univariate_halfspace_count;
use crate::depth::zonoid::zonoid_depth_1d;
use crate::error::{DepthError, Result};
use crate::dataset::QueryPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectableNotion {
    Halfspace,
    Mahalanobis,
    Zonoid,
}

impl ProjectableNotion {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "halfspace" => Ok(Self::Halfspace),
            "mahalanobis" => Ok(Self::Mahalanobis),
            "zonoid" => Ok(Self::Zonoid),
            other => Err(DepthError::Unsupported(format!(
                "the projection property bound applies to halfspace, mahalanobis and zonoid, not '{other}'"
            ))),
        }
    }
}

/// Minimum univariate depth over the supplied directions; always an upper
/// bound on the exact depth.  Directions live in the observed-coordinate
/// subspace when the query has missing entries.
pub fn projection_property_bound(
    query: &QueryPoint,
    data: &Dataset,
    notion: ProjectableNotion,
    directions: &[Vec<f64>],
) -> Result<f64> {
    data.require_complete("projection property bound")?;
    if directions.is_empty() {
        return Err(DepthError::data("no projection directions supplied"));
    }
    if query.dim() != data.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: data.dim(),
            got: query.dim(),
        });
    }
    let axes = query.observed_axes();
    if axes.is_empty() {
        return Err(DepthError::data("query point has no observed coordinates"));
    }
    let y: Vec<f64> = axes.iter().map(|&a| query.coords[a].unwrap()).collect();
    let n = data.n();
    let mut best = 1.0f64;
    let mut proj = vec![0.0f64; n];
    for dir in directions {
        if dir.len() != axes.len() {
            return Err(DepthError::DimensionMismatch {
                expected: axes.len(),
                got: dir.len(),
            });
        }
        for (i, row) in data.rows().enumerate() {
            proj[i] = axes.iter().zip(dir).map(|(&a, &c)| row[a] * c).sum();
        }
        let py: f64 = y.iter().zip(dir).map(|(a, b)| a * b).sum();
        let value = match notion {
            ProjectableNotion::Halfspace => {
                univariate_halfspace_count(py, &proj) as f64 / n as f64
            }
            ProjectableNotion::Mahalanobis => {
                let mean = proj.iter().sum::<f64>() / n as f64;
                let var = proj.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / n as f64;
                if var <= 0.0 {
                    return Err(DepthError::SingularScatter(
                        "projected sample has zero variance".into(),
                    ));
                }
                1.0 / (1.0 + (py - mean) * (py - mean) / var)
            }
            ProjectableNotion::Zonoid => zonoid_depth_1d(py, &proj),
        };
        best = best.min(value);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::halfspace::halfspace_count;
    use crate::rng::RandomSource;

    #[test]
    fn axis_directions_on_square_are_tight() {
        let data = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let q = QueryPoint::complete(vec![0.5, 0.5]);
        let dirs = vec![vec![1.0, 0.0], vec![0.0, 1.0]];
        let bound =
            projection_property_bound(&q, &data, ProjectableNotion::Halfspace, &dirs).unwrap();
        assert_eq!(bound, 0.5);
    }

    #[test]
    fn bound_dominates_exact_halfspace() {
        let mut rng = RandomSource::new(23);
        for trial in 0..40 {
            let d = 2 + trial % 2;
            let rows: Vec<Vec<f64>> = (0..12).map(|_| rng.gaussian_vec(d)).collect();
            let data = Dataset::from_rows(rows.clone()).unwrap();
            let y = rng.gaussian_vec(d);
            let dirs: Vec<Vec<f64>> = (0..6).map(|_| rng.unit_sphere_direction(d)).collect();
            let q = QueryPoint::complete(y.clone());
            let bound =
                projection_property_bound(&q, &data, ProjectableNotion::Halfspace, &dirs).unwrap();
            let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
            let (c, n) = halfspace_count(&y, &refs);
            assert!(bound >= c as f64 / n as f64 - 1e-15, "trial {trial}");
        }
    }

    #[test]
    fn missing_coordinate_restriction_bounds_full_depth() {
        // Restricting to the observed coordinate gives the marginal depth,
        // an upper bound for the full-space depth.
        let data = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.2],
            vec![2.0, -0.1],
            vec![3.0, 0.4],
        ])
        .unwrap();
        let q = QueryPoint {
            coords: vec![Some(1.5), None],
        };
        let dirs = vec![vec![1.0]];
        let bound =
            projection_property_bound(&q, &data, ProjectableNotion::Halfspace, &dirs).unwrap();
        assert_eq!(bound, 0.5);
        let full_q = [1.5, 10.0]; // any completion's exact depth is below the bound
        let refs: Vec<&[f64]> = data.row_refs();
        let (c, n) = halfspace_count(&full_q, &refs);
        assert!(bound >= c as f64 / n as f64);
    }

    #[test]
    fn empty_directions_rejected() {
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let q = QueryPoint::complete(vec![0.5]);
        assert!(
            projection_property_bound(&q, &data, ProjectableNotion::Zonoid, &[]).is_err()
        );
    }
}
