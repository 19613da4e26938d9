//! Depth central regions, probability-content regions, exact bivariate
//! Tukey regions, onion layers, and depth medians.

use crate::dataset::{Dataset, Region};
use crate::depth::halfspace::halfspace_count;
use crate::depth::onion;
use crate::error::{DepthError, Result};
use crate::geom::{intersect_halfplanes, Halfplane};
use crate::approx::ApproxConfig;
use crate::notion::DepthNotion;
use rayon::prelude::*;

/// Depth of every sample point with respect to the full sample, by the
/// requested method (exact when `cfg` is None).
pub fn sample_depths(
    data: &Dataset,
    notion: &dyn DepthNotion,
    cfg: Option<&ApproxConfig>,
) -> Result<Vec<f64>> {
    let queries: Vec<Vec<f64>> = if notion.name() == "lens-ordinal" {
        (0..data.n())
            .map(|i| (0..data.n()).map(|j| data.dissimilarity_at(i, j)).collect())
            .collect()
    } else {
        data.rows().map(|r| r.to_vec()).collect()
    };
    queries
        .par_iter()
        .map(|q| notion.compute(q, data, cfg).map(|v| v.value))
        .collect()
}

/// Indices of sample points with depth >= alpha.
pub fn depth_region_members(
    data: &Dataset,
    notion: &dyn DepthNotion,
    alpha: f64,
    cfg: Option<&ApproxConfig>,
) -> Result<Region> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(DepthError::data("alpha must lie in (0, 1]"));
    }
    let depths = sample_depths(data, notion, cfg)?;
    let members: Vec<usize> = depths
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v >= alpha)
        .map(|(i, _)| i)
        .collect();
    Ok(Region::MemberSet {
        members,
        alpha,
        notion: notion.name().to_string(),
    })
}

/// Smallest-by-inclusion level set holding at least ceil(beta * n) sample
/// points: sort depths descending, cut at the ceil(beta n)-th value, include
/// all ties.  Returns the region and the achieved depth level.
pub fn prob_central_region(
    data: &Dataset,
    notion: &dyn DepthNotion,
    beta: f64,
    cfg: Option<&ApproxConfig>,
) -> Result<(Region, f64)> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(DepthError::data("beta must lie in (0, 1]"));
    }
    let depths = sample_depths(data, notion, cfg)?;
    let n = data.n();
    let need = ((beta * n as f64).ceil() as usize).clamp(1, n);
    let mut sorted: Vec<f64> = depths.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let cut = sorted[need - 1];
    let members: Vec<usize> = depths
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v >= cut)
        .map(|(i, _)| i)
        .collect();
    Ok((
        Region::MemberSet {
            members,
            alpha: cut,
            notion: notion.name().to_string(),
        },
        cut,
    ))
}

/// Exact bivariate Tukey region {z : halfspace depth >= alpha} as a convex
/// polygon.
///
/// For each direction u normal to a line through two data points, every
/// region point must satisfy <u, z> <= (k-th largest projection), where
/// k = ceil(alpha n): a closed halfspace containing z must hold at least k
/// sample points.  Between consecutive pair-normals the k-th order statistic
/// is attained by a fixed point and the constraint is linear, so pair
/// normals are exactly the binding directions.
pub fn tukey_region_2d(data: &Dataset, alpha: f64) -> Result<Region> {
    data.require_complete("Tukey region")?;
    if data.dim() != 2 {
        return Err(DepthError::data("tukey_region_2d requires d = 2"));
    }
    let n = data.n();
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(DepthError::data("alpha must lie in (0, 1]"));
    }
    let k = (alpha * n as f64).ceil() as usize;
    let rows = data.row_refs();
    let scale = data.diameter().max(1e-12);

    let mut halfplanes: Vec<Halfplane> = Vec::new();
    let mut proj: Vec<f64> = vec![0.0; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let ex = rows[j][0] - rows[i][0];
            let ey = rows[j][1] - rows[i][1];
            let norm = (ex * ex + ey * ey).sqrt();
            if norm <= 1e-14 * scale {
                continue;
            }
            for u in [[-ey / norm, ex / norm], [ey / norm, -ex / norm]] {
                for (p, r) in proj.iter_mut().zip(&rows) {
                    *p = u[0] * r[0] + u[1] * r[1];
                }
                proj.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
                let offset = proj[k - 1]; // k-th largest projection
                halfplanes.push(Halfplane {
                    normal: [u[0], u[1]],
                    offset,
                });
            }
        }
    }
    if halfplanes.is_empty() {
        // All points coincide: the region is that single point.
        return Ok(Region::Polygon2d {
            vertices: vec![[rows[0][0], rows[0][1]]],
            alpha,
            notion: "halfspace".to_string(),
        });
    }

    let bound = 10.0 * scale
        + rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0f64, |m, &v| m.max(v.abs()));
    match intersect_halfplanes(&halfplanes, bound, 1e-9 * scale) {
        None => Ok(Region::Empty {
            alpha,
            notion: "halfspace".to_string(),
        }),
        Some(poly) => Ok(Region::Polygon2d {
            vertices: poly,
            alpha,
            notion: "halfspace".to_string(),
        }),
    }
}

pub use crate::depth::onion::onion_layers;

/// Member-set regions for the onion layers, outermost first.
pub fn onion_layer_regions(data: &Dataset) -> Result<Vec<Region>> {
    let layers = onion::onion_layers(data)?;
    let total = layers.len();
    Ok(layers
        .into_iter()
        .enumerate()
        .map(|(j, members)| Region::MemberSet {
            members,
            alpha: (j + 1) as f64 / total as f64,
            notion: "onion".to_string(),
        })
        .collect())
}

/// The deepest sample points for a notion: all ties are reported, the
/// first index is the representative.  For Mahalanobis and zonoid depth the
/// maximum is the mean, which is returned directly with depth 1.
pub struct MedianResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub tied_indices: Vec<usize>,
}

pub fn depth_median(data: &Dataset, notion: &dyn DepthNotion) -> Result<MedianResult> {
    if matches!(notion.name(), "mahalanobis" | "zonoid") {
        data.require_complete("depth median")?;
        let d = data.dim();
        let mut mean = vec![0.0; d];
        for r in data.rows() {
            for (m, v) in mean.iter_mut().zip(r) {
                *m += v;
            }
        }
        for m in mean.iter_mut() {
            *m /= data.n() as f64;
        }
        return Ok(MedianResult {
            point: mean,
            value: 1.0,
            tied_indices: Vec::new(),
        });
    }
    let depths = sample_depths(data, notion, None)?;
    let best = depths.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tied: Vec<usize> = depths
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v == best)
        .map(|(i, _)| i)
        .collect();
    Ok(MedianResult {
        point: data.row(tied[0]).to_vec(),
        value: best,
        tied_indices: tied,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialMedianStatus {
    Converged,
    MaxIterations,
}

/// Weiszfeld iteration for the spatial median (minimizer of the mean
/// Euclidean distance), with the data-point singularity handled by the
/// subgradient test: at a data point with multiplicity m, optimality holds
/// when the residual pull has norm at most m.
pub fn spatial_median(
    data: &Dataset,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, SpatialMedianStatus)> {
    data.require_complete("spatial median")?;
    let d = data.dim();
    let n = data.n();
    let rows = data.row_refs();
    let scale = data.diameter();
    if scale == 0.0 {
        return Ok((rows[0].to_vec(), SpatialMedianStatus::Converged));
    }
    let snap = 1e-12 * scale;

    // Start at the coordinate-wise mean.
    let mut y = vec![0.0; d];
    for r in &rows {
        for (a, b) in y.iter_mut().zip(r.iter()) {
            *a += b / n as f64;
        }
    }

    for _ in 0..max_iter {
        // Pull of non-coincident points and the multiplicity at y.
        let mut tilde = vec![0.0; d]; // sum x_i / dist
        let mut wsum = 0.0;
        let mut pull = vec![0.0; d]; // sum (x_i - y)/dist
        let mut multiplicity = 0usize;
        for r in &rows {
            let mut dist_sq = 0.0;
            for k in 0..d {
                let t = r[k] - y[k];
                dist_sq += t * t;
            }
            let dist = dist_sq.sqrt();
            if dist <= snap {
                multiplicity += 1;
                continue;
            }
            let w = 1.0 / dist;
            wsum += w;
            for k in 0..d {
                tilde[k] += r[k] * w;
                pull[k] += (r[k] - y[k]) * w;
            }
        }
        if wsum == 0.0 {
            // All points coincide with y.
            return Ok((y, SpatialMedianStatus::Converged));
        }
        let pull_norm = pull.iter().map(|v| v * v).sum::<f64>().sqrt();
        if multiplicity > 0 {
            // Vardi-Zhang step at a data point.
            if pull_norm <= multiplicity as f64 {
                return Ok((y, SpatialMedianStatus::Converged));
            }
            let shrink = 1.0 - multiplicity as f64 / pull_norm;
            let mut next = vec![0.0; d];
            for k in 0..d {
                let t = tilde[k] / wsum; // plain Weiszfeld target over others
                next[k] = y[k] + shrink * (t - y[k]);
            }
            let step: f64 = next
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            y = next;
            if step <= tol * scale {
                return Ok((y, SpatialMedianStatus::Converged));
            }
        } else {
            let mut next = vec![0.0; d];
            for k in 0..d {
                next[k] = tilde[k] / wsum;
            }
            let step: f64 = next
                .iter()
                .zip(&y)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            y = next;
            if step <= tol * scale {
                return Ok((y, SpatialMedianStatus::Converged));
            }
        }
    }
    Ok((y, SpatialMedianStatus::MaxIterations))
}

/// Exact halfspace depths of all sample points (leave-in convention),
/// shared by regions and the robustness experiments.
pub fn halfspace_sample_depths(data: &Dataset) -> Result<Vec<f64>> {
    data.require_complete("halfspace depths")?;
    let rows = data.row_refs();
    Ok((0..data.n())
        .into_par_iter()
        .map(|i| {
            let (c, n) = halfspace_count(rows[i], &rows);
            c as f64 / n as f64
        })
        .collect())
}
