//! Convex hull peeling (onion) depth.
//!
//! Layers are peeled by removing every point on the boundary of the current
//! hull (vertices and collinear boundary points alike).  The raw depth of a
//! query is the number of closed layers containing it, so a hull vertex has
//! raw depth 1 and points outside the hull raw depth 0; the normalized value
//! divides by the sample's layer count so the [0, 1] contract holds.

use crate::dataset::Dataset;
use crate::error::{DepthError, Result};
use crate::geom::{convex_hull_2d, in_convex_hull, Membership};
use crate::notion::{DepthNotion, DepthValue, Method};

pub struct OnionDepth;

impl DepthNotion for OnionDepth {
    fn name(&self) -> &'static str {
        "onion"
    }

    fn exact(&self, y: &[f64], data: &Dataset) -> Result<DepthValue> {
        data.require_complete("onion depth")?;
        if y.len() != data.dim() {
            return Err(DepthError::DimensionMismatch {
                expected: data.dim(),
                got: y.len(),
            });
        }
        let layers = onion_layers(data)?;
        let (raw, value) = onion_depth_from_layers(y, data, &layers)?;
        Ok(DepthValue {
            value,
            raw_layer: Some(raw),
            notion: "onion",
            method: Method::Exact,
        })
    }
}

/// Partition of sample indices into convex layers, outermost first.
pub fn onion_layers(data: &Dataset) -> Result<Vec<Vec<usize>>> {
    data.require_complete("onion peeling")?;
    let d = data.dim();
    let mut remaining: Vec<usize> = (0..data.n()).collect();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    while !remaining.is_empty() {
        let pts: Vec<&[f64]> = remaining.iter().map(|&i| data.row(i)).collect();
        let boundary_local = boundary_points(&pts, d)?;
        debug_assert!(!boundary_local.is_empty());
        let mut is_boundary = vec![false; remaining.len()];
        for &b in &boundary_local {
            is_boundary[b] = true;
        }
        let layer: Vec<usize> = remaining
            .iter()
            .enumerate()
            .filter(|&(k, _)| is_boundary[k])
            .map(|(_, &i)| i)
            .collect();
        remaining = remaining
            .iter()
            .enumerate()
            .filter(|&(k, _)| !is_boundary[k])
            .map(|(_, &i)| i)
            .collect();
        layers.push(layer);
    }
    Ok(layers)
}

/// Indices (into `pts`) of points on the hull boundary of the set.
fn boundary_points(pts: &[&[f64]], d: usize) -> Result<Vec<usize>> {
    match d {
        1 => {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            Ok((0..pts.len())
                .filter(|&i| pts[i][0] == lo || pts[i][0] == hi)
                .collect())
        }
        2 => {
            let hull = convex_hull_2d(pts);
            let mut out = hull.vertices;
            out.extend(hull.on_boundary);
            out.sort_unstable();
            Ok(out)
        }
        _ => {
            let mut out = Vec::new();
            for i in 0..pts.len() {
                if !matches!(in_convex_hull(pts[i], pts)?, Membership::Interior) {
                    out.push(i);
                }
            }
            Ok(out)
        }
    }
}

/// Raw layer count and normalized value of a query, given peeled layers.
pub fn onion_depth_from_layers(
    y: &[f64],
    data: &Dataset,
    layers: &[Vec<usize>],
) -> Result<(u64, f64)> {
    let total = layers.len() as u64;
    let d = data.dim();
    // Remaining index sets S_j; C_j = conv(S_j).
    let mut remaining: Vec<usize> = (0..data.n()).collect();
    let mut raw = 0u64;
    for layer in layers {
        let pts: Vec<&[f64]> = remaining.iter().map(|&i| data.row(i)).collect();
        if contains_closed(y, &pts, d)? {
            raw += 1;
        } else {
            break;
        }
        let strip: std::collections::HashSet<usize> = layer.iter().copied().collect();
        remaining.retain(|i| !strip.contains(i));
    }
    Ok((raw, raw as f64 / total as f64))
}

fn contains_closed(y: &[f64], pts: &[&[f64]], d: usize) -> Result<bool> {
    match d {
        1 => {
            let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
            let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
            Ok(y[0] >= lo && y[0] <= hi)
        }
        2 => {
            let hull = convex_hull_2d(pts);
            let verts: Vec<&[f64]> = hull.vertices.iter().map(|&i| pts[i]).collect();
            Ok(point_in_convex_polygon(y, &verts))
        }
        _ => Ok(!matches!(in_convex_hull(y, pts)?, Membership::Outside)),
    }
}

/// Closed membership in a CCW convex polygon (degenerate cases included).
fn point_in_convex_polygon(y: &[f64], verts: &[&[f64]]) -> bool {
    let scale = verts
        .iter()
        .flat_map(|v| v.iter())
        .chain(y.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1e-300);
    let tol = 1e-12 * scale * scale;
    match verts.len() {
        0 => false,
        1 => {
            let dx = y[0] - verts[0][0];
            let dy = y[1] - verts[0][1];
            (dx * dx + dy * dy).sqrt() <= 1e-12 * scale
        }
        2 => on_segment(y, verts[0], verts[1], tol, scale),
        h => {
            for k in 0..h {
                let a = verts[k];
                let b = verts[(k + 1) % h];
                let cross = (b[0] - a[0]) * (y[1] - a[1]) - (b[1] - a[1]) * (y[0] - a[0]);
                if cross < -tol {
                    return false;
                }
            }
            true
        }
    }
}

fn on_segment(y: &[f64], a: &[f64], b: &[f64], tol: f64, scale: f64) -> bool {
    let cross = (b[0] - a[0]) * (y[1] - a[1]) - (b[1] - a[1]) * (y[0] - a[0]);
    if cross.abs() > tol {
        return false;
    }
    let dot = (y[0] - a[0]) * (b[0] - a[0]) + (y[1] - a[1]) * (b[1] - a[1]);
    let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
    dot >= -1e-12 * scale * scale && dot <= len2 + 1e-12 * scale * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notion::DepthNotion;

    fn square_plus_center() -> Dataset {
        Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
        ])
        .unwrap()
    }

    #[test]
    fn layers_square_plus_center() {
        let layers = onion_layers(&square_plus_center()).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[0], vec![0, 1, 2, 3]);
        assert_eq!(layers[1], vec![4]);
    }

    #[test]
    fn depth_center_is_two_layers() {
        let data = square_plus_center();
        let v = OnionDepth.exact(&[0.5, 0.5], &data).unwrap();
        assert_eq!(v.raw_layer, Some(2));
        assert_eq!(v.value, 1.0);
    }

    #[test]
    fn depth_vertex_is_one_layer() {
        let data = square_plus_center();
        let v = OnionDepth.exact(&[0.0, 0.0], &data).unwrap();
        assert_eq!(v.raw_layer, Some(1));
        assert_eq!(v.value, 0.5);
    }

    #[test]
    fn outside_is_zero() {
        let data = square_plus_center();
        let v = OnionDepth.exact(&[5.0, 5.0], &data).unwrap();
        assert_eq!(v.raw_layer, Some(0));
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn convex_position_single_layer() {
        let data = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let layers = onion_layers(&data).unwrap();
        assert_eq!(layers.len(), 1);
    }

    #[test]
    fn collinear_boundary_points_peel_with_layer() {
        // The midpoint of an edge belongs to layer 1 even though it is not
        // a hull vertex.
        let data = Dataset::from_rows(vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![2.0, 2.0],
            vec![0.0, 2.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
        ])
        .unwrap();
        let layers = onion_layers(&data).unwrap();
        assert_eq!(layers.len(), 2);
        assert!(layers[0].contains(&4));
        assert_eq!(layers[1], vec![5]);
    }

    #[test]
    fn three_d_peeling() {
        let mut rows = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0],
        ];
        rows.push(vec![0.4, 0.4, 0.4]); // interior point
        let data = Dataset::from_rows(rows).unwrap();
        let layers = onion_layers(&data).unwrap();
        assert_eq!(layers.len(), 2);
        assert_eq!(layers[1], vec![5]);
        let v = OnionDepth.exact(&[0.4, 0.4, 0.4], &data).unwrap();
        assert_eq!(v.raw_layer, Some(2));
    }

    #[test]
    fn one_dimensional_layers() {
        let data =
            Dataset::from_rows(vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0], vec![4.0]]).unwrap();
        let layers = onion_layers(&data).unwrap();
        assert_eq!(layers.len(), 3);
        assert_eq!(layers[0], vec![0, 4]);
        assert_eq!(layers[1], vec![1, 3]);
        assert_eq!(layers[2], vec![2]);
        let v = OnionDepth.exact(&[2.0], &data).unwrap();
        assert_eq!(v.raw_layer, Some(3));
        let v = OnionDepth.exact(&[0.5], &data).unwrap();
        assert_eq!(v.raw_layer, Some(1));
    }
}
