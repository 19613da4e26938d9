//! Lens depth from ordinal dissimilarity information alone: the fraction of
//! sample pairs {i, j} with v(y, x_i) < v(x_i, x_j) and v(y, x_j) < v(x_i, x_j).
//! Only comparisons of dissimilarities enter, so any strictly increasing
//! transform of v leaves the depth unchanged.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::{DepthNotion, DepthValue};

pub struct OrdinalLensDepth;

impl DepthNotion for OrdinalLensDepth {
    fn name(&self) -> &'static str {
        "lens-ordinal"
    }

    /// `y` is a row of dissimilarities from the query to every sample point.
    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        let n = data.n();
        if data.dissimilarity().is_none() {
            return Err(DepthError::data(
                "ordinal lens depth requires a dissimilarity matrix",
            ));
        }
        if y.len() != n {
            return Err(DepthError::DimensionMismatch {
                expected: n,
                got: y.len(),
            });
        }
        if y.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(DepthError::data("dissimilarities must be finite and nonnegative"));
        }
        let value = lens_depth_from_row(y, data);
        Ok(DepthValue::exact("lens-ordinal", value))
    }
}

fn lens_depth_from_row(to_query: &[f64], data: &Dataset) -> f64 {
    let n = data.n();
    let mut hits = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let vij = data.dissimilarity_at(i, j);
            if to_query[i] < vij && to_query[j] < vij {
                hits += 1;
            }
        }
    }
    let total = (n as u64) * (n as u64 - 1) / 2;
    hits as f64 / total as f64
}

/// Depth of sample point `index` using its own row of the matrix.
pub fn lens_depth_of_sample_point(index: usize, data: &Dataset) -> Result<f64> {
    if data.dissimilarity().is_none() {
        return Err(DepthError::data(
            "ordinal lens depth requires a dissimilarity matrix",
        ));
    }
    let n = data.n();
    if index >= n {
        return Err(DepthError::data(format!("sample index {index} out of range")));
    }
    let row: Vec<f64> = (0..n).map(|j| data.dissimilarity_at(index, j)).collect();
    Ok(lens_depth_from_row(&row, data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::depth::skeleton::SkeletonDepth;
    use crate::notion::{DepthNotion, Strictness};
    use crate::rng::RandomSource;

    fn euclidean_matrix(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = rows.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        rows[i]
                            .iter()
                            .zip(&rows[j])
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn euclidean_dissimilarity_equals_lens_beta2() {
        let mut rng = RandomSource::new(7);
        for _ in 0..20 {
            let rows: Vec<Vec<f64>> = (0..8).map(|_| rng.gaussian_vec(2)).collect();
            let y = rng.gaussian_vec(2);
            let matrix = euclidean_matrix(&rows);
            let data = Dataset::from_rows(rows.clone())
                .unwrap()
                .with_dissimilarity(matrix)
                .unwrap();
            let to_query: Vec<f64> = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .zip(&y)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .collect();
            let ordinal = OrdinalLensDepth.exact(&to_query, &data).unwrap().value;
            let skeleton = SkeletonDepth {
                beta: 2.0,
                strictness: Strictness::Strict,
                model: None,
            }
            .exact(&y, &data)
            .unwrap()
            .value;
            assert!((ordinal - skeleton).abs() <= 1e-15);
        }
    }

    #[test]
    fn monotone_transform_invariant() {
        let mut rng = RandomSource::new(8);
        let rows: Vec<Vec<f64>> = (0..7).map(|_| rng.gaussian_vec(3)).collect();
        let y = rng.gaussian_vec(3);
        let matrix = euclidean_matrix(&rows);
        let squared: Vec<Vec<f64>> = matrix
            .iter()
            .map(|r| r.iter().map(|v| v * v).collect())
            .collect();
        let to_query: Vec<f64> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&y)
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum::<f64>()
                    .sqrt()
            })
            .collect();
        let to_query_sq: Vec<f64> = to_query.iter().map(|v| v * v).collect();

        let d1 = Dataset::from_rows(rows.clone())
            .unwrap()
            .with_dissimilarity(matrix)
            .unwrap();
        let d2 = Dataset::from_rows(rows)
            .unwrap()
            .with_dissimilarity(squared)
            .unwrap();
        let a = OrdinalLensDepth.exact(&to_query, &d1).unwrap().value;
        let b = OrdinalLensDepth.exact(&to_query_sq, &d2).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn most_central_of_single_pair() {
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]])
            .unwrap()
            .with_dissimilarity(vec![vec![0.0, 1.0], vec![1.0, 0.0]])
            .unwrap();
        // Query closer to both points than they are to each other.
        let v = OrdinalLensDepth.exact(&[0.4, 0.4], &data).unwrap().value;
        assert_eq!(v, 1.0);
    }

    #[test]
    fn missing_matrix_is_error() {
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(OrdinalLensDepth.exact(&[0.5, 0.5], &data).is_err());
    }
}
