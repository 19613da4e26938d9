//! L_p depth: (1 + mean_i ||y - x_i||_p)^{-1}, the inverted expected
//! outlyingness.  With a scatter model the distance is taken on whitened
//! coordinates, which for p = 2 upgrades the depth to affine invariance.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::{DepthNotion, DepthValue};
use crate::scatter::ScatterModel;
use std::sync::Arc;

pub struct LpDepth {
    pub p: f64,
    pub model: Option<Arc<ScatterModel>>,
}

fn norm_p(v: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        v.iter().map(|x| x * x).sum::<f64>().sqrt()
    } else if p == 1.0 {
        v.iter().map(|x| x.abs()).sum()
    } else if p.is_infinite() {
        v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    } else {
        v.iter()
            .map(|x| x.abs().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }
}

impl DepthNotion for LpDepth {
    fn name(&self) -> &'static str {
        "lp"
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        data.require_complete("L_p depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        let value = match &self.model {
            None => {
                let mean_dist = data
                    .rows()
                    .map(|r| {
                        let diff: Vec<f64> = r.iter().zip(y).map(|(a, b)| a - b).collect();
                        norm_p(&diff, self.p)
                    })
                    .sum::<f64>()
                    / data.n() as f64;
                1.0 / (1.0 + mean_dist)
            }
            Some(model) => {
                let wy = model.whiten_point(y)?;
                let mean_dist = data
                    .rows()
                    .map(|r| {
                        let wr = model.whiten_point(r).expect("dims checked");
                        let diff: Vec<f64> = wr.iter().zip(&wy).map(|(a, b)| a - b).collect();
                        norm_p(&diff, self.p)
                    })
                    .sum::<f64>()
                    / data.n() as f64;
                1.0 / (1.0 + mean_dist)
            }
        };
        Ok(DepthValue::exact("lp", value))
    }
}

pub fn lp_depth(y: &[f64], data: &Dataset, p: f64) -> Result<f64> {
    LpDepth { p, model: None }.exact(y, data).map(|d| d.value)
}
