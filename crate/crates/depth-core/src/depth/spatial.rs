//! Spatial depth: 1 - || mean_i (y - x_i)/||y - x_i|| ||, with 0/0 = 0 for
//! sample points coinciding with the query.  The whitened variant computes
//! the same statistic on R^{-1/2}-transformed coordinates.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::{DepthNotion, DepthValue};
use crate::scatter::ScatterModel;
use std::sync::Arc;

pub struct SpatialDepth {
    pub model: Option<Arc<ScatterModel>>,
}

pub fn spatial_depth_raw(y: &[f64], rows: &[&[f64]]) -> f64 {
    let d = y.len();
    let n = rows.len();
    let mut sum = vec![0.0; d];
    for r in rows {
        let mut norm_sq = 0.0;
        for k in 0..d {
            let z = y[k] - r[k];
            norm_sq += z * z;
        }
        if norm_sq > 0.0 {
            let inv = 1.0 / norm_sq.sqrt();
            for k in 0..d {
                sum[k] += (y[k] - r[k]) * inv;
            }
        }
    }
    let mean_norm = sum
        .iter()
        .map(|v| (v / n as f64) * (v / n as f64))
        .sum::<f64>()
        .sqrt();
    1.0 - mean_norm
}

impl DepthNotion for SpatialDepth {
    fn name(&self) -> &'static str {
        "spatial"
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        data.require_complete("spatial depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        let value = match &self.model {
            None => spatial_depth_raw(y, &data.row_refs()),
            Some(model) => {
                let wy = model.whiten_point(y)?;
                let wrows: Result<Vec<Vec<f64>>> =
                    data.rows().map(|r| model.whiten_point(r)).collect();
                let wrows = wrows?;
                let refs: Vec<&[f64]> = wrows.iter().map(|r| r.as_slice()).collect();
                spatial_depth_raw(&wy, &refs)
            }
        };
        Ok(DepthValue::exact("spatial", value))
    }
}
