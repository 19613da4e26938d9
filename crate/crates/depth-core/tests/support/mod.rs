//! Independent oracles for the acceptance suite.  These reimplement the
//! checked quantities along different algorithmic routes (cofactor normals,
//! orientation predicates, direct enumeration, bisected mass allocation)
//! and stay deliberately naive.

use depth_core::dataset::Dataset;
use depth_core::rng::RandomSource;

pub fn refs(rows: &[Vec<f64>]) -> Vec<&[f64]> {
    rows.iter().map(|r| r.as_slice()).collect()
}

fn det2(m: &[Vec<f64>]) -> f64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

fn det3(m: &[Vec<f64>]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Determinant by cofactor expansion (small d only).
pub fn det_small(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => det2(m),
        3 => det3(m),
        k => {
            let mut total = 0.0;
            for j in 0..k {
                let minor: Vec<Vec<f64>> = (1..k)
                    .map(|r| (0..k).filter(|&c| c != j).map(|c| m[r][c]).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                total += sign * m[0][j] * det_small(&minor);
            }
            total
        }
    }
}

/// Normal to the span of d-1 vectors in d-space, by cofactor expansion of
/// the (d-1) x d matrix (the generalized cross product).
fn cross_normal(vs: &[&[f64]], d: usize) -> Vec<f64> {
    let mut u = vec![0.0; d];
    for k in 0..d {
        let minor: Vec<Vec<f64>> = vs
            .iter()
            .map(|v| (0..d).filter(|&c| c != k).map(|c| v[c]).collect())
            .collect();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        u[k] = sign * det_small(&minor);
    }
    u
}

/// Brute-force halfspace count for data in general position: every
/// hyperplane through y and d-1 sample points, strict side counts, the
/// smaller side wins; points coincident with y always count.
pub fn oracle_halfspace_count(y: &[f64], rows: &[&[f64]]) -> usize {
    let d = y.len();
    let mut zs: Vec<Vec<f64>> = Vec::new();
    let mut coincident = 0usize;
    for r in rows {
        let z: Vec<f64> = r.iter().zip(y).map(|(a, b)| a - b).collect();
        if z.iter().all(|&v| v == 0.0) {
            coincident += 1;
        } else {
            zs.push(z);
        }
    }
    let m = zs.len();
    if m == 0 {
        return rows.len();
    }
    if d == 1 {
        let neg = zs.iter().filter(|z| z[0] < 0.0).count();
        return coincident + neg.min(m - neg);
    }
    let mut best = m;
    let mut subset: Vec<usize> = (0..d - 1).collect();
    if m < d - 1 {
        return coincident; // no spanning hyperplane; degenerate, all pushable
    }
    loop {
        let vs: Vec<&[f64]> = subset.iter().map(|&i| zs[i].as_slice()).collect();
        let u = cross_normal(&vs, d);
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            let mut neg = 0;
            let mut pos = 0;
            for z in &zs {
                let s: f64 = z.iter().zip(&u).map(|(a, b)| a * b).sum();
                if s > 0.0 {
                    pos += 1;
                } else if s < 0.0 {
                    neg += 1;
                }
            }
            best = best.min(neg.min(pos));
        }
        // next combination
        let k = d - 1;
        let mut i = k;
        let mut done = false;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if subset[i] != i + m - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
        if done {
            break;
        }
    }
    coincident + best
}

/// Orientation-based closed containment of y in the simplex with the given
/// d+1 vertices (general position).
fn oracle_in_simplex(y: &[f64], verts: &[&[f64]]) -> bool {
    let d = y.len();
    let orient = |pts: &[&[f64]]| -> f64 {
        let m: Vec<Vec<f64>> = (1..=d)
            .map(|i| (0..d).map(|c| pts[i][c] - pts[0][c]).collect())
            .collect();
        det_small(&m)
    };
    let base = orient(verts);
    if base == 0.0 {
        return false; // flat simplex: ignored on general-position data
    }
    for i in 0..=d {
        let mut replaced: Vec<&[f64]> = verts.to_vec();
        replaced[i] = y;
        let s = orient(&replaced);
        if s != 0.0 && (s > 0.0) != (base > 0.0) {
            return false;
        }
    }
    true
}

/// Direct enumeration of simplices containing y.
pub fn oracle_simplicial_count(y: &[f64], rows: &[&[f64]]) -> u128 {
    let d = y.len();
    let n = rows.len();
    let mut count = 0u128;
    let mut subset: Vec<usize> = (0..=d).collect();
    loop {
        let verts: Vec<&[f64]> = subset.iter().map(|&i| rows[i]).collect();
        if oracle_in_simplex(y, &verts) {
            count += 1;
        }
        let k = d + 1;
        let mut i = k;
        let mut done = false;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if subset[i] != i + n - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
        if done {
            break;
        }
    }
    count
}

/// Direct mean simplex volume for the Oja depth.
pub fn oracle_oja_depth(y: &[f64], rows: &[&[f64]]) -> f64 {
    let d = y.len();
    let n = rows.len();
    let mut fact = 1.0;
    for k in 2..=d {
        fact *= k as f64;
    }
    let mut total = 0.0f64;
    let mut count = 0u64;
    let mut subset: Vec<usize> = (0..d).collect();
    loop {
        let m: Vec<Vec<f64>> = subset
            .iter()
            .map(|&i| (0..d).map(|c| rows[i][c] - y[c]).collect())
            .collect();
        total += det_small(&m).abs() / fact;
        count += 1;
        let k = d;
        let mut i = k;
        let mut done = false;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if subset[i] != i + n - k {
                subset[i] += 1;
                for j in (i + 1)..k {
                    subset[j] = subset[j - 1] + 1;
                }
                break;
            }
        }
        if done {
            break;
        }
    }
    1.0 / (1.0 + total / count as f64)
}

/// Direct pair count for the beta-skeleton depth (strict convention).
pub fn oracle_skeleton_count(y: &[f64], rows: &[&[f64]], beta: f64) -> u64 {
    let d = y.len();
    let n = rows.len();
    let dist = |a: &[f64], b: &[f64]| -> f64 {
        (0..d).map(|k| (a[k] - b[k]) * (a[k] - b[k])).sum::<f64>().sqrt()
    };
    let mut hits = 0u64;
    for i in 0..n {
        for j in (i + 1)..n {
            let radius = beta / 2.0 * dist(rows[i], rows[j]);
            let ci: Vec<f64> = (0..d)
                .map(|k| beta / 2.0 * rows[i][k] + (1.0 - beta / 2.0) * rows[j][k])
                .collect();
            let cj: Vec<f64> = (0..d)
                .map(|k| beta / 2.0 * rows[j][k] + (1.0 - beta / 2.0) * rows[i][k])
                .collect();
            if dist(y, &ci) < radius && dist(y, &cj) < radius {
                hits += 1;
            }
        }
    }
    hits
}

/// Univariate zonoid depth by bisection on alpha: load the smallest points
/// at the weight ceiling 1/(alpha n) and compare the reachable lower
/// endpoint with v.
pub fn oracle_zonoid_1d(v: f64, values: &[f64]) -> f64 {
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = sorted.iter().sum::<f64>() / n as f64;
    if v < sorted[0] || v > sorted[n - 1] {
        return 0.0;
    }
    let lower_endpoint = |alpha: f64, asc: &[f64]| -> f64 {
        // Greedy: cap each weight at 1/(alpha n), fill from the smallest.
        let cap = 1.0 / (alpha * n as f64);
        let mut mass = 0.0;
        let mut acc = 0.0;
        for &x in asc {
            let w = cap.min(1.0 - mass);
            acc += w * x;
            mass += w;
            if mass >= 1.0 - 1e-15 {
                break;
            }
        }
        acc
    };
    if v <= mean {
        // lower endpoint rises with alpha; find alpha with ell(alpha) = v
        let (mut lo, mut hi) = (1e-12, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if lower_endpoint(mid, &sorted) <= v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    } else {
        let desc: Vec<f64> = sorted.iter().rev().map(|x| -x).collect();
        let (mut lo, mut hi) = (1e-12, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if lower_endpoint(mid, &desc) <= -v {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// A centrally symmetric sample: `pairs` reflected pairs about the origin,
/// plus the center itself, scaled by `scale`.
pub fn symmetric_sample(
    pairs: usize,
    d: usize,
    scale: f64,
    rng: &mut RandomSource,
) -> Dataset {
    let mut rows = vec![vec![0.0; d]];
    for _ in 0..pairs {
        let x: Vec<f64> = rng.gaussian_vec(d).iter().map(|v| v * scale).collect();
        rows.push(x.iter().map(|v| -v).collect());
        rows.push(x);
    }
    Dataset::from_rows(rows).unwrap()
}

/// Spearman rank correlation.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&x, &y| v[x].partial_cmp(&v[y]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let ra = rank(a);
    let rb = rank(b);
    let n = a.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let mut num = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for i in 0..a.len() {
        num += (ra[i] - mean) * (rb[i] - mean);
        va += (ra[i] - mean) * (ra[i] - mean);
        vb += (rb[i] - mean) * (rb[i] - mean);
    }
    num / (va.sqrt() * vb.sqrt())
}
