//! Beta-skeleton depth: the fraction of sample pairs whose beta-dependent
//! lens region contains the query.  beta = 2 gives the Euclidean lens depth,
//! beta = 1 the spherical depth.
//!
//! A pair {x_i, x_j} covers y when, with x_ibj = (b/2) x_i + (1 - b/2) x_j,
//!
//!   ||y - x_ibj|| < (b/2) ||x_i - x_j||   and   ||y - x_jbi|| < (b/2) ||x_i - x_j||.
//!
//! The inequalities are strict, exactly as printed; a closed variant is
//! exposed for sensitivity checks.

use crate::approx::{sample_subsets, ApproxConfig};
use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::{DepthNotion, DepthValue, Method, Strictness};
use crate::scatter::ScatterModel;
use std::sync::Arc;

pub struct SkeletonDepth {
    pub beta: f64,
    pub strictness: Strictness,
    pub model: Option<Arc<ScatterModel>>,
}

impl SkeletonDepth {
    fn check(&self, y: &[f64], data: &Dataset) -> Result<()> {
        data.require_complete("beta-skeleton depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        if data.n() < 2 {
            return Err(DepthError::data("beta-skeleton depth needs n >= 2"));
        }
        if !(self.beta >= 1.0) {
            return Err(DepthError::data("beta must satisfy beta >= 1"));
        }
        Ok(())
    }

    fn prepared(&self, y: &[f64], data: &Dataset) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        match &self.model {
            None => Ok((y.to_vec(), data.rows().map(|r| r.to_vec()).collect())),
            Some(model) => {
                let wy = model.whiten_point(y)?;
                let wrows: Result<Vec<Vec<f64>>> =
                    data.rows().map(|r| model.whiten_point(r)).collect();
                Ok((wy, wrows?))
            }
        }
    }
}

pub fn pair_covers(
    y: &[f64],
    xi: &[f64],
    xj: &[f64],
    beta: f64,
    strictness: Strictness,
) -> bool {
    let d = y.len();
    let half_beta = beta / 2.0;
    let mut dist_ij_sq = 0.0;
    for k in 0..d {
        let t = xi[k] - xj[k];
        dist_ij_sq += t * t;
    }
    let radius_sq = half_beta * half_beta * dist_ij_sq;
    let mut a_sq = 0.0;
    let mut b_sq = 0.0;
    for k in 0..d {
        let center_i = half_beta * xi[k] + (1.0 - half_beta) * xj[k];
        let center_j = half_beta * xj[k] + (1.0 - half_beta) * xi[k];
        let ta = y[k] - center_i;
        let tb = y[k] - center_j;
        a_sq += ta * ta;
        b_sq += tb * tb;
    }
    match strictness {
        Strictness::Strict => a_sq < radius_sq && b_sq < radius_sq,
        Strictness::Closed => a_sq <= radius_sq && b_sq <= radius_sq,
    }
}

impl DepthNotion for SkeletonDepth {
    fn name(&self) -> &'static str {
        "skeleton"
    }

    fn supports_approximate(&self) -> bool {
        true
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        self.check(y, data)?;
        let (wy, wrows) = self.prepared(y, data)?;
        let n = wrows.len();
        let mut hits = 0u64;
        for i in 0..n {
            for j in (i + 1)..n {
                if pair_covers(&wy, &wrows[i], &wrows[j], self.beta, self.strictness) {
                    hits += 1;
                }
            }
        }
        let total = (n as u64) * (n as u64 - 1) / 2;
        Ok(DepthValue::exact("skeleton", hits as f64 / total as f64))
    }

    fn approximate(&self, y: &[f64], data: &Dataset, cfg: &ApproxConfig) -> Result<DepthValue> {
        self.check(y, data)?;
        let (wy, wrows) = self.prepared(y, data)?;
        let mut hits = 0u64;
        let mut total = 0u64;
        sample_subsets(wrows.len(), 2, cfg, |pair| {
            if pair_covers(&wy, &wrows[pair[0]], &wrows[pair[1]], self.beta, self.strictness) {
                hits += 1;
            }
            total += 1;
        })?;
        Ok(DepthValue {
            value: hits as f64 / total as f64,
            raw_layer: None,
            notion: "skeleton",
            method: Method::Approximate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn notion(beta: f64) -> SkeletonDepth {
        SkeletonDepth {
            beta,
            strictness: Strictness::Strict,
            model: None,
        }
    }

    #[test]
    fn lens_midpoint_covered() {
        // {0, 1}, beta = 2, y = 0.5: max distance 0.5 < 1 -> depth 1.
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let v = notion(2.0).exact(&[0.5], &data).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn lens_endpoint_fails_strictly() {
        // y = 0: ||y - x_2|| = 1 is not < 1 under the strict convention.
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let v = notion(2.0).exact(&[0.0], &data).unwrap();
        assert_eq!(v.value, 0.0);
        // The closed variant accepts the boundary.
        let closed = SkeletonDepth {
            beta: 2.0,
            strictness: Strictness::Closed,
            model: None,
        };
        assert_eq!(closed.exact(&[0.0], &data).unwrap().value, 1.0);
    }

    #[test]
    fn spherical_midpoint() {
        // beta = 1: |0.5 - midpoint| = 0 < 0.5 -> covered.
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let v = notion(1.0).exact(&[0.5], &data).unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn far_point_zero() {
        let data = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let v = notion(2.0).exact(&[100.0, 100.0], &data).unwrap();
        assert_eq!(v.value, 0.0);
    }
}
