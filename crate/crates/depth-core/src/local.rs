//! Local depth notions: kernelized spatial depth and the beta-localization
//! of a global depth by conditioning on a central region of the sample
//! symmetrized about the query.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::notion::DepthNotion;
use crate::regions::prob_central_region;
use crate::dataset::Region;

/// Gaussian kernel specification with bandwidth h > 0:
/// k_h(t) = (sqrt(2 pi h))^{-d} exp(-||t/h||^2 / 2).
#[derive(Debug, Clone, Copy)]
pub struct KernelSpec {
    pub bandwidth: f64,
}

impl KernelSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0) {
            return Err(DepthError::data("kernel bandwidth must be positive"));
        }
        Ok(())
    }

    pub fn at_zero(&self, d: usize) -> f64 {
        (2.0 * std::f64::consts::PI * self.bandwidth).powf(-(d as f64) / 2.0)
    }

    fn eval(&self, diff_norm_sq: f64, d: usize) -> f64 {
        self.at_zero(d) * (-diff_norm_sq / (2.0 * self.bandwidth * self.bandwidth)).exp()
    }
}

/// Kernelized spatial depth value: the raw statistic (bounded by k_h(0))
/// and the k_h(0)-normalized value in [0, 1].
#[derive(Debug, Clone, Copy)]
pub struct KernelizedValue {
    pub raw: f64,
    pub normalized: f64,
}

/// mean_i k_h(y - x_i) - || mean_i k_h(y - x_i) (y - x_i)/||y - x_i|| ||,
/// with 0/0 = 0; optionally computed on whitened coordinates.
pub fn kernelized_spatial_depth(
    y: &[f64],
    data: &Dataset,
    kernel: KernelSpec,
    whiten_first: bool,
) -> Result<KernelizedValue> {
    data.require_complete("kernelized spatial depth")?;
    kernel.validate()?;
    if y.len() != data.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: data.dim(),
            got: y.len(),
        });
    }
    let d = data.dim();
    let (yv, rows): (Vec<f64>, Vec<Vec<f64>>) = if whiten_first {
        let model = crate::scatter::moment_scatter(data)?;
        (
            model.whiten_point(y)?,
            data.rows()
                .map(|r| model.whiten_point(r))
                .collect::<Result<_>>()?,
        )
    } else {
        (y.to_vec(), data.rows().map(|r| r.to_vec()).collect())
    };

    let n = rows.len() as f64;
    let mut mean_kernel = 0.0;
    let mut weighted_units = vec![0.0; d];
    for r in &rows {
        let mut norm_sq = 0.0;
        for k in 0..d {
            let t = yv[k] - r[k];
            norm_sq += t * t;
        }
        let kv = kernel.eval(norm_sq, d);
        mean_kernel += kv / n;
        if norm_sq > 0.0 {
            let inv = 1.0 / norm_sq.sqrt();
            for k in 0..d {
                weighted_units[k] += kv * (yv[k] - r[k]) * inv / n;
            }
        }
    }
    let raw = mean_kernel
        - weighted_units
            .iter()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt();
    Ok(KernelizedValue {
        raw,
        normalized: raw / kernel.at_zero(d),
    })
}

/// Beta-localized depth: build the 2n-point sample symmetrized about y,
/// take its probability-content region at beta as the neighborhood, keep
/// the original sample points inside it, and evaluate the global notion on
/// the kept points.  beta = 1 reproduces the global depth exactly.
pub fn beta_localized_depth(
    y: &[f64],
    data: &Dataset,
    notion: &dyn DepthNotion,
    beta: f64,
) -> Result<f64> {
    beta_localized_depth_with(y, data, notion, beta, None)
}

/// `beta_localized_depth` with an explicit method for both the neighborhood
/// depths and the final evaluation (exact when `cfg` is None).
pub fn beta_localized_depth_with(
    y: &[f64],
    data: &Dataset,
    notion: &dyn DepthNotion,
    beta: f64,
    cfg: Option<&crate::approx::ApproxConfig>,
) -> Result<f64> {
    data.require_complete("beta-localized depth")?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(DepthError::data("localization beta must lie in (0, 1]"));
    }
    if y.len() != data.dim() {
        return Err(DepthError::DimensionMismatch {
            expected: data.dim(),
            got: y.len(),
        });
    }
    let n = data.n();
    let d = data.dim();
    let sym = symmetrized_sample(y, data)?;

    let (region, _) = prob_central_region(&sym, notion, beta, cfg)?;
    let members = match region {
        Region::MemberSet { members, .. } => members,
        _ => unreachable!("prob_central_region returns member sets"),
    };
    let kept: Vec<usize> = members.into_iter().filter(|&i| i < n).collect();
    if kept.len() < d + 1 {
        return Err(DepthError::data(format!(
            "localization too aggressive: only {} original points kept, need {}",
            kept.len(),
            d + 1
        )));
    }
    if kept.len() == n {
        // Conditioning kept everything: identical to the global depth.
        return notion.compute(y, data, cfg).map(|v| v.value);
    }
    let conditioned = data.subset(&kept)?;
    notion.compute(y, &conditioned, cfg).map(|v| v.value)
}

/// The 2n-point mixture sample: original points at indices 0..n, their
/// reflections 2y - x_i at indices n..2n.  Centrally symmetric about y by
/// construction.
pub fn symmetrized_sample(y: &[f64], data: &Dataset) -> Result<Dataset> {
    let n = data.n();
    let d = data.dim();
    let mut sym_rows: Vec<Vec<f64>> = data.rows().map(|r| r.to_vec()).collect();
    for i in 0..n {
        let mut reflected = vec![0.0; d];
        for k in 0..d {
            reflected[k] = 2.0 * y[k] - data.row(i)[k];
        }
        sym_rows.push(reflected);
    }
    Dataset::from_rows(sym_rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notion::{build_notion, NotionParams};
    use crate::rng::RandomSource;

    #[test]
    fn kernel_single_point_value() {
        // n = 1, y = x_1: second term vanishes, raw = k_h(0).
        let data = Dataset::from_rows(vec![vec![1.0, 2.0]]).unwrap();
        let kernel = KernelSpec { bandwidth: 0.7 };
        let v = kernelized_spatial_depth(&[1.0, 2.0], &data, kernel, false).unwrap();
        assert!((v.raw - kernel.at_zero(2)).abs() <= 1e-15);
        assert!((v.normalized - 1.0).abs() <= 1e-15);
    }

    #[test]
    fn kernel_symmetric_pair() {
        // {-1, 1}, y = 0: unit vectors cancel, value = mean kernel weight.
        let data = Dataset::from_rows(vec![vec![-1.0], vec![1.0]]).unwrap();
        let kernel = KernelSpec { bandwidth: 1.0 };
        let v = kernelized_spatial_depth(&[0.0], &data, kernel, false).unwrap();
        let expect = kernel.at_zero(1) * (-0.5f64).exp();
        assert!((v.raw - expect).abs() <= 1e-15);
    }

    #[test]
    fn kernel_value_in_unit_range() {
        let mut rng = RandomSource::new(20);
        let rows: Vec<Vec<f64>> = (0..30).map(|_| rng.gaussian_vec(2)).collect();
        let data = Dataset::from_rows(rows).unwrap();
        for _ in 0..20 {
            let y = rng.gaussian_vec(2);
            let v =
                kernelized_spatial_depth(&y, &data, KernelSpec { bandwidth: 0.8 }, false).unwrap();
            assert!(v.normalized >= -1e-12 && v.normalized <= 1.0 + 1e-12);
            assert!(v.raw >= -1e-12);
        }
    }

    #[test]
    fn wide_bandwidth_ranks_like_spatial() {
        use crate::depth::spatial::spatial_depth_raw;
        let mut rng = RandomSource::new(21);
        let rows: Vec<Vec<f64>> = (0..20).map(|_| rng.gaussian_vec(2)).collect();
        let data = Dataset::from_rows(rows.clone()).unwrap();
        let h = 1e3 * data.diameter();
        let kernel = KernelSpec { bandwidth: h };
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let kd: Vec<f64> = rows
            .iter()
            .map(|r| {
                kernelized_spatial_depth(r, &data, kernel, false)
                    .unwrap()
                    .raw
            })
            .collect();
        let sd: Vec<f64> = rows.iter().map(|r| spatial_depth_raw(r, &refs)).collect();
        // Rank agreement at huge bandwidth.
        let rank = |v: &[f64]| -> Vec<usize> {
            let mut idx: Vec<usize> = (0..v.len()).collect();
            idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
            let mut r = vec![0usize; v.len()];
            for (pos, &i) in idx.iter().enumerate() {
                r[i] = pos;
            }
            r
        };
        assert_eq!(rank(&kd), rank(&sd));
    }

    #[test]
    fn beta_one_is_global_exactly() {
        let mut rng = RandomSource::new(22);
        let rows: Vec<Vec<f64>> = (0..15).map(|_| rng.gaussian_vec(2)).collect();
        let data = Dataset::from_rows(rows).unwrap();
        let y = rng.gaussian_vec(2);
        for name in ["halfspace", "spatial", "simplicial", "zonoid", "mahalanobis"] {
            let notion = build_notion(name, &NotionParams::default()).unwrap();
            let global = notion.exact(&y, &data).unwrap().value;
            let localized = beta_localized_depth(&y, &data, notion.as_ref(), 1.0).unwrap();
            assert_eq!(global, localized, "{name}");
        }
    }

    #[test]
    fn bimodal_localization_uses_near_cluster() {
        // Two clusters far apart; beta = 0.5 keeps only the near one.
        let rows = vec![
            vec![0.0],
            vec![0.1],
            vec![0.2],
            vec![10.0],
            vec![10.1],
            vec![10.2],
        ];
        let data = Dataset::from_rows(rows).unwrap();
        let notion = build_notion("halfspace", &NotionParams::default()).unwrap();
        let y = [0.1];
        let localized = beta_localized_depth(&y, &data, notion.as_ref(), 0.5).unwrap();
        // The symmetrized 12-point sample keeps {0, 0.1, 0.2} from the
        // original sample; 0.1 is the middle of those three: depth 2/3.
        let global = notion.exact(&y, &data).unwrap().value;
        assert!((global - 1.0 / 3.0).abs() <= 1e-12);
        assert!((localized - 2.0 / 3.0).abs() <= 1e-12);
    }

    #[test]
    fn symmetrized_sample_reflects_exactly() {
        let mut rng = RandomSource::new(23);
        let rows: Vec<Vec<f64>> = (0..10).map(|_| rng.gaussian_vec(3)).collect();
        let data = Dataset::from_rows(rows).unwrap();
        let y = rng.gaussian_vec(3);
        let sym = symmetrized_sample(&y, &data).unwrap();
        assert_eq!(sym.n(), 20);
        for i in 0..10 {
            for k in 0..3 {
                let a = sym.row(i)[k];
                let b = sym.row(i + 10)[k];
                assert_eq!(b, 2.0 * y[k] - a);
            }
        }
    }

    #[test]
    fn too_aggressive_localization_errors() {
        let rows = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let data = Dataset::from_rows(rows).unwrap();
        let notion = build_notion("halfspace", &NotionParams::default()).unwrap();
        let err = beta_localized_depth(&[5.0, 5.0], &data, notion.as_ref(), 0.2);
        assert!(err.is_err());
    }
}
