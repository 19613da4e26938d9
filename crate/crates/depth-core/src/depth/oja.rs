//! Simplicial volume (Oja) depth: one over 1 plus the average d-volume of
//! the simplex spanned by y and d sample points.  The affine-invariant
//! version divides the volumes by sqrt(det R) of a scatter model.

use crate::approx::{binomial, sample_subsets, ApproxConfig};
use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::geom::simplex_volume;
use crate::notion::{DepthNotion, DepthValue, Method};
use crate::scatter::ScatterModel;
use std::sync::Arc;

pub struct OjaDepth {
    pub model: Option<Arc<ScatterModel>>,
}

impl OjaDepth {
    fn check(&self, y: &[f64], data: &Dataset) -> Result<()> {
        data.require_complete("Oja depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        if data.n() < data.dim() {
            return Err(DepthError::data(format!(
                "Oja depth needs n >= d ({} < {})",
                data.n(),
                data.dim()
            )));
        }
        Ok(())
    }

    fn normalizer(&self) -> Result<f64> {
        match &self.model {
            None => Ok(1.0),
            Some(m) => {
                let det = m.scatter.determinant();
                if det <= 0.0 {
                    return Err(DepthError::SingularScatter(
                        "scatter determinant not positive".into(),
                    ));
                }
                Ok(det.sqrt())
            }
        }
    }
}

impl DepthNotion for OjaDepth {
    fn name(&self) -> &'static str {
        "oja"
    }

    fn supports_approximate(&self) -> bool {
        true
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        self.check(y, data)?;
        let d = data.dim();
        let rows = data.row_refs();
        let norm = self.normalizer()?;
        let mut sum = 0.0f64;
        let mut count = 0u64;
        let mut verts: Vec<&[f64]> = Vec::with_capacity(d);
        super::halfspace::for_each_combination(rows.len(), d, |subset| {
            verts.clear();
            verts.extend(subset.iter().map(|&i| rows[i]));
            sum += simplex_volume(y, &verts);
            count += 1;
        });
        debug_assert_eq!(count as u128, binomial(rows.len(), d));
        let mean = sum / count as f64 / norm;
        Ok(DepthValue::exact("oja", 1.0 / (1.0 + mean)))
    }

    fn approximate(&self, y: &[f64], data: &Dataset, cfg: &ApproxConfig) -> Result<DepthValue> {
        self.check(y, data)?;
        let d = data.dim();
        let rows = data.row_refs();
        let norm = self.normalizer()?;
        let mut sum = 0.0f64;
        let mut count = 0u64;
        sample_subsets(rows.len(), d, cfg, |subset| {
            let verts: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
            sum += simplex_volume(y, &verts);
            count += 1;
        })?;
        let mean = sum / count as f64 / norm;
        Ok(DepthValue {
            value: 1.0 / (1.0 + mean),
            raw_layer: None,
            notion: "oja",
            method: Method::Approximate,
        })
    }
}
