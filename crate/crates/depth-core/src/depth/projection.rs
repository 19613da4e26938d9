//! Projection depth, approximated from above over random directions:
//! (1 + max_p |<p,y> - med| / MAD)^{-1} with lower-midpoint sample medians.
//! No exact algorithm is provided.

use crate::approx::ApproxConfig;
use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::{DepthNotion, DepthValue, Method};

pub struct ProjectionDepth;

impl DepthNotion for ProjectionDepth {
    fn name(&self) -> &'static str {
        "projection"
    }

    fn supports_exact(&self) -> bool {
        false
    }

    fn supports_approximate(&self) -> bool {
        true
    }

    fn exact(&self, _y: &[f64], _data: &Dataset) -> Result<DepthValue> {
        Err(DepthError::Unsupported(
            "exact projection depth is not provided; use the approximate engine".into(),
        ))
    }

    fn approximate(&self, y: &[f64], data: &Dataset, cfg: &ApproxConfig) -> Result<DepthValue> {
        data.require_complete("projection depth")?;
        cfg.validate()?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        if data.n() < 2 {
            return Err(DepthError::data("projection depth needs n >= 2"));
        }
        let d = data.dim();
        let n = data.n();
        let mut rng = cfg.rng();
        let mut proj = vec![0.0f64; n];
        let mut devs = vec![0.0f64; n];
        let mut worst = 0.0f64;
        for _ in 0..cfg.k {
            let dir = rng.unit_sphere_direction(d);
            for (i, r) in data.rows().enumerate() {
                proj[i] = r.iter().zip(&dir).map(|(a, b)| a * b).sum();
            }
            let py: f64 = y.iter().zip(&dir).map(|(a, b)| a * b).sum();
            proj.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            let med = super::lower_median(&proj);
            for (dv, &p) in devs.iter_mut().zip(proj.iter()) {
                *dv = (p - med).abs();
            }
            devs.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            let mad = super::lower_median(&devs);
            let numer = (py - med).abs();
            if mad == 0.0 {
                if numer == 0.0 {
                    continue; // zero outlyingness in this direction
                }
                worst = f64::INFINITY;
                break;
            }
            worst = worst.max(numer / mad);
        }
        let value = if worst.is_infinite() {
            0.0
        } else {
            1.0 / (1.0 + worst)
        };
        Ok(DepthValue {
            value,
            raw_layer: None,
            notion: "projection",
            method: Method::Approximate,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_outlyingness() {
        // {0,1,2}, y = 2: med 1, MAD 1 -> (1 + 1)^{-1} = 0.5 for any k.
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        for k in [1, 3, 10] {
            let v = ProjectionDepth
                .approximate(&[2.0], &data, &ApproxConfig::new(k, 5))
                .unwrap();
            assert!((v.value - 0.5).abs() <= 1e-12);
        }
    }

    #[test]
    fn median_of_symmetric_sample_is_one() {
        let data =
            Dataset::from_rows(vec![vec![-2.0], vec![-1.0], vec![0.0], vec![1.0], vec![2.0]])
                .unwrap();
        let v = ProjectionDepth
            .approximate(&[0.0], &data, &ApproxConfig::new(7, 3))
            .unwrap();
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn nested_directions_non_increasing() {
        use crate::rng::RandomSource;
        let mut rng = RandomSource::new(17);
        let rows: Vec<Vec<f64>> = (0..15).map(|_| rng.gaussian_vec(3)).collect();
        let data = Dataset::from_rows(rows).unwrap();
        let y = [0.3, -0.2, 0.5];
        let mut last = f64::INFINITY;
        for k in [1, 4, 16, 64, 256] {
            let v = ProjectionDepth
                .approximate(&y, &data, &ApproxConfig::new(k, 11))
                .unwrap()
                .value;
            assert!(v <= last + 1e-15, "k={k}: {v} > {last}");
            last = v;
        }
    }

    #[test]
    fn exact_unsupported() {
        let data = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(
            ProjectionDepth.exact(&[0.5], &data),
            Err(DepthError::Unsupported(_))
        ));
    }

    #[test]
    fn degenerate_mad_caps_depth_at_zero() {
        // All sample points identical: MAD = 0 in every direction.
        let data = Dataset::from_rows(vec![vec![1.0, 1.0]; 4]).unwrap();
        let off = ProjectionDepth
            .approximate(&[2.0, 1.0], &data, &ApproxConfig::new(5, 1))
            .unwrap();
        assert_eq!(off.value, 0.0);
        let on = ProjectionDepth
            .approximate(&[1.0, 1.0], &data, &ApproxConfig::new(5, 1))
            .unwrap();
        assert_eq!(on.value, 1.0);
    }
}
