//! Moment Mahalanobis depth: (1 + ||y - mu||^2_Sigma)^{-1}.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::{DepthNotion, DepthValue};
use crate::scatter::{moment_scatter, ScatterModel};
use std::sync::Arc;

pub struct MahalanobisDepth {
    /// Fixed model (moment or MCD); refit from the data when absent.
    pub model: Option<Arc<ScatterModel>>,
}

impl MahalanobisDepth {
    fn depth_with_model(y: &[f64], model: &ScatterModel) -> Result<f64> {
        let dsq = model.mahalanobis_sq(y)?;
        Ok(1.0 / (1.0 + dsq))
    }
}

impl DepthNotion for MahalanobisDepth {
    fn name(&self) -> &'static str {
        "mahalanobis"
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        data.require_complete("Mahalanobis depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        let value = match &self.model {
            Some(m) => Self::depth_with_model(y, m)?,
            None => Self::depth_with_model(y, &moment_scatter(data)?)?,
        };
        Ok(DepthValue::exact("mahalanobis", value))
    }
}

pub fn mahalanobis_depth(y: &[f64], model: &ScatterModel) -> Result<f64> {
    MahalanobisDepth::depth_with_model(y, model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximal_at_mean() {
        let data = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![0.0, 2.0],
            vec![2.0, 2.0],
        ])
        .unwrap();
        let model = moment_scatter(&data).unwrap();
        assert!((mahalanobis_depth(&[1.0, 1.0], &model).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn one_dimensional_hand_value() {
        // Sample {0, 2}: mean 1, divisor-n variance 1; y = 3 -> 1/(1+4) = 0.2.
        let data = Dataset::from_rows(vec![vec![0.0], vec![2.0]]).unwrap();
        let model = moment_scatter(&data).unwrap();
        assert!((mahalanobis_depth(&[3.0], &model).unwrap() - 0.2).abs() <= 1e-12);
    }

    #[test]
    fn half_at_unit_mahalanobis_distance() {
        let data = Dataset::from_rows(vec![vec![0.0], vec![2.0]]).unwrap();
        let model = moment_scatter(&data).unwrap();
        // Squared Mahalanobis distance 1 at y = 2 (variance 1, mean 1).
        assert!((mahalanobis_depth(&[2.0], &model).unwrap() - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let data = Dataset::from_rows(vec![vec![0.0, 1.0], vec![2.0, 0.5], vec![1.0, 2.0]]).unwrap();
        let notion = MahalanobisDepth { model: None };
        assert!(notion.exact(&[0.0], &data).is_err());
    }
}
