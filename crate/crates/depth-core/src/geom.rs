//! Convex-geometry primitives: planar hulls with boundary bookkeeping,
//! hull membership in any dimension, simplex volumes and halfplane clipping.

use crate::error::{DepthError, Result};
use crate::lp::{BoundedSimplex, LpStatus};

/// Result of `convex_hull_2d`: counterclockwise vertex indices plus the
/// indices of non-vertex points lying on the hull boundary (collinear with
/// an edge or duplicating a vertex).
#[derive(Debug, Clone)]
pub struct Hull2d {
    pub vertices: Vec<usize>,
    pub on_boundary: Vec<usize>,
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; collinear points are excluded from the vertex
/// list and reported as on-boundary.
pub fn convex_hull_2d(points: &[&[f64]]) -> Hull2d {
    let n = points.len();
    assert!(n >= 1);
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1e-300);
    let eps = 1e-12 * scale * scale;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        points[a][0]
            .partial_cmp(&points[b][0])
            .unwrap()
            .then(points[a][1].partial_cmp(&points[b][1]).unwrap())
    });
    order.dedup_by(|&mut a, &mut b| points[a] == points[b]);

    if order.len() == 1 {
        let v = order[0];
        let on_boundary = (0..n).filter(|&i| i != v).collect();
        return Hull2d {
            vertices: vec![v],
            on_boundary,
        };
    }

    let build = |iter: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut chain: Vec<usize> = Vec::new();
        for i in iter {
            while chain.len() >= 2
                && cross(
                    points[chain[chain.len() - 2]],
                    points[chain[chain.len() - 1]],
                    points[i],
                ) <= eps
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain
    };
    let mut lower = build(&mut order.iter().copied());
    let mut upper = build(&mut order.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.extend(upper);

    let vertices = lower;
    if vertices.len() < 2 {
        // All points collinear: keep the two extremes as the hull.
        let first = order[0];
        let last = *order.last().unwrap();
        let verts = if first == last {
            vec![first]
        } else {
            vec![first, last]
        };
        let on_boundary = (0..n).filter(|&i| !verts.contains(&i)).collect();
        return Hull2d {
            vertices: verts,
            on_boundary,
        };
    }

    // Boundary classification of the remaining points.
    let vset: Vec<bool> = {
        let mut v = vec![false; n];
        for &i in &vertices {
            v[i] = true;
        }
        v
    };
    let mut on_boundary = Vec::new();
    let h = vertices.len();
    for i in 0..n {
        if vset[i] {
            continue;
        }
        let p = points[i];
        let mut boundary = false;
        for k in 0..h {
            let a = points[vertices[k]];
            let b = points[vertices[(k + 1) % h]];
            let c = cross(a, b, p);
            if c.abs() <= eps {
                let dot =
                    (p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1]);
                let len2 = (b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2);
                if dot >= -eps && dot <= len2 + eps {
                    boundary = true;
                    break;
                }
            }
        }
        if boundary {
            on_boundary.push(i);
        }
    }
    Hull2d {
        vertices,
        on_boundary,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// Position of `y` relative to the convex hull of `points`, decided by
/// linear programming in any dimension.
///
/// Feasibility of the convex-combination system decides inside/outside;
/// interiority maximizes the smallest combination weight, which is positive
/// exactly when `y` cannot be supported by a hyperplane.
pub fn in_convex_hull(y: &[f64], points: &[&[f64]]) -> Result<Membership> {
    if points.is_empty() {
        return Err(DepthError::data("empty point set for hull membership"));
    }
    let d = y.len();
    let n = points.len();
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .chain(y.iter())
        .fold(0.0f64, |m, &v| m.max(v.abs()))
        .max(1.0);

    // Variables gamma_i >= 0 and eps >= 0 with lambda_i = gamma_i + eps:
    //   sum_i lambda_i (x_i - y) = 0,  sum_i lambda_i = 1,  maximize eps.
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for p in points {
        let mut col = Vec::with_capacity(d + 1);
        for k in 0..d {
            col.push(p[k] - y[k]);
        }
        col.push(1.0);
        cols.push(col);
    }
    let mut eps_col = vec![0.0; d + 1];
    for p in points {
        for k in 0..d {
            eps_col[k] += p[k] - y[k];
        }
    }
    eps_col[d] = n as f64;
    cols.push(eps_col);

    let mut b = vec![0.0; d + 1];
    b[d] = 1.0;
    let mut objective = vec![0.0; n + 1];
    objective[n] = -1.0; // maximize eps
    let mut upper = vec![f64::INFINITY; n + 1];
    upper[n] = 1.0;

    let simplex = BoundedSimplex::new(cols, b, upper);
    let outcome = simplex.solve(&objective, scale)?;
    match outcome.status {
        LpStatus::Infeasible => Ok(Membership::Outside),
        LpStatus::Unbounded => Err(DepthError::Numeric(
            "membership program cannot be unbounded".into(),
        )),
        LpStatus::Optimal => {
            let eps = outcome.x[n];
            // A positive weight margin certifies interiority only when the
            // differences x_i - y span the full space; otherwise the hull is
            // flat and has no interior.
            if eps > 1e-9 / n as f64 && spans_full_dimension(y, points, scale) {
                Ok(Membership::Interior)
            } else {
                Ok(Membership::Boundary)
            }
        }
    }
}

fn spans_full_dimension(y: &[f64], points: &[&[f64]], scale: f64) -> bool {
    let d = y.len();
    let tol = 1e-9 * scale;
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d);
    for p in points {
        if basis.len() == d {
            return true;
        }
        let mut v: Vec<f64> = p.iter().zip(y).map(|(a, b)| a - b).collect();
        for b in &basis {
            let proj: f64 = v.iter().zip(b).map(|(x, c)| x * c).sum();
            for (x, c) in v.iter_mut().zip(b) {
                *x -= proj * c;
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > tol {
            for x in v.iter_mut() {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    basis.len() == d
}

/// Volume of the simplex spanned by `apex` and `base` (d points in d-space):
/// |det| / d!.
pub fn simplex_volume(apex: &[f64], base: &[&[f64]]) -> f64 {
    let d = apex.len();
    debug_assert_eq!(base.len(), d);
    let mut m: Vec<Vec<f64>> = base
        .iter()
        .map(|p| p.iter().zip(apex).map(|(a, b)| a - b).collect())
        .collect();
    // LU determinant with partial pivoting.
    let mut det = 1.0;
    for col in 0..d {
        let mut piv = col;
        for r in (col + 1)..d {
            if m[r][col].abs() > m[piv][col].abs() {
                piv = r;
            }
        }
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        for r in (col + 1)..d {
            let f = m[r][col] / m[col][col];
            for c in col..d {
                m[r][c] -= f * m[col][c];
            }
        }
    }
    let mut fact = 1.0;
    for k in 2..=d {
        fact *= k as f64;
    }
    det.abs() / fact
}

/// Does the closed simplex with the given d+1 vertices contain `y`?
/// Decided by barycentric coordinates; degenerate simplices fall back to the
/// hull-membership program.
pub fn point_in_simplex_closed(y: &[f64], verts: &[&[f64]], scale: f64) -> Result<bool> {
    let d = y.len();
    debug_assert_eq!(verts.len(), d + 1);
    // Solve sum lambda_i v_i = y, sum lambda_i = 1.
    let m = d + 1;
    let mut a: Vec<Vec<f64>> = vec![vec![0.0; m]; m];
    let mut rhs = vec![0.0; m];
    for (j, v) in verts.iter().enumerate() {
        for i in 0..d {
            a[i][j] = v[i];
        }
        a[d][j] = 1.0;
    }
    rhs[..d].copy_from_slice(y);
    rhs[d] = 1.0;
    // Gaussian elimination with partial pivoting.
    let tol_piv = 1e-12 * scale.max(1.0);
    for col in 0..m {
        let mut piv = col;
        for r in (col + 1)..m {
            if a[r][col].abs() > a[piv][col].abs() {
                piv = r;
            }
        }
        if a[piv][col].abs() <= tol_piv {
            // Degenerate simplex: decide by hull membership in the flat.
            return Ok(!matches!(in_convex_hull(y, verts)?, Membership::Outside));
        }
        a.swap(piv, col);
        rhs.swap(piv, col);
        for r in (col + 1)..m {
            let f = a[r][col] / a[col][col];
            for c in col..m {
                a[r][c] -= f * a[col][c];
            }
            rhs[r] -= f * rhs[col];
        }
    }
    let mut lambda = vec![0.0; m];
    for row in (0..m).rev() {
        let mut v = rhs[row];
        for c in (row + 1)..m {
            v -= a[row][c] * lambda[c];
        }
        lambda[row] = v / a[row][row];
    }
    let tol = 1e-10;
    Ok(lambda.iter().all(|&l| l >= -tol))
}

/// A closed halfplane { z : n . z <= c }.
#[derive(Debug, Clone, Copy)]
pub struct Halfplane {
    pub normal: [f64; 2],
    pub offset: f64,
}

/// Intersect halfplanes by clipping a large box.  Returns the CCW vertex
/// cycle of the (possibly degenerate) intersection, or None when empty.
pub fn intersect_halfplanes(
    halfplanes: &[Halfplane],
    bound: f64,
    tol: f64,
) -> Option<Vec<[f64; 2]>> {
    let mut poly: Vec<[f64; 2]> = vec![
        [-bound, -bound],
        [bound, -bound],
        [bound, bound],
        [-bound, bound],
    ];
    for hp in halfplanes {
        if poly.is_empty() {
            return None;
        }
        let mut next: Vec<[f64; 2]> = Vec::with_capacity(poly.len() + 1);
        let val =
            |p: &[f64; 2]| hp.normal[0] * p[0] + hp.normal[1] * p[1] - hp.offset;
        for i in 0..poly.len() {
            let cur = poly[i];
            let nxt = poly[(i + 1) % poly.len()];
            let vc = val(&cur);
            let vn = val(&nxt);
            if vc <= tol {
                next.push(cur);
            }
            if (vc < -tol && vn > tol) || (vc > tol && vn < -tol) {
                let t = vc / (vc - vn);
                next.push([
                    cur[0] + t * (nxt[0] - cur[0]),
                    cur[1] + t * (nxt[1] - cur[1]),
                ]);
            }
        }
        poly = dedupe_ring(next, tol);
    }
    if poly.is_empty() {
        None
    } else {
        Some(poly)
    }
}

fn dedupe_ring(poly: Vec<[f64; 2]>, tol: f64) -> Vec<[f64; 2]> {
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(poly.len());
    for p in poly {
        if out
            .last()
            .map(|q| (q[0] - p[0]).abs() <= tol && (q[1] - p[1]).abs() <= tol)
            .unwrap_or(false)
        {
            continue;
        }
        out.push(p);
    }
    while out.len() > 1 {
        let first = out[0];
        let last = *out.last().unwrap();
        if (first[0] - last[0]).abs() <= tol && (first[1] - last[1]).abs() <= tol {
            out.pop();
        } else {
            break;
        }
    }
    out
}
