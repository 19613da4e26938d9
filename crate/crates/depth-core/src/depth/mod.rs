//! The eleven depth notions.

pub mod halfspace;
pub mod lens_ordinal;
pub mod lp_norm;
pub mod mahalanobis;
pub mod oja;
pub mod onion;
pub mod projection;
pub mod projection_bound;
pub mod simplicial;
pub mod skeleton;
pub mod spatial;
pub mod zonoid;

/// Closed univariate halfspace count of `v` against `values`:
/// min(#{x <= v}, #{x >= v}).  Coincident values count on both sides.
pub fn univariate_halfspace_count(v: f64, values: &[f64]) -> usize {
    let le = values.iter().filter(|&&x| x <= v).count();
    let ge = values.iter().filter(|&&x| x >= v).count();
    le.min(ge)
}

/// Same count from a sorted slice, O(log n).
pub fn univariate_halfspace_count_sorted(v: f64, sorted: &[f64]) -> usize {
    let le = sorted.partition_point(|&x| x <= v);
    let lt = sorted.partition_point(|&x| x < v);
    le.min(sorted.len() - lt)
}

/// Lower-midpoint sample median: element at index (n-1)/2 of the sorted data.
pub fn lower_median(sorted: &[f64]) -> f64 {
    debug_assert!(!sorted.is_empty());
    sorted[(sorted.len() - 1) / 2]
}

/// Monotone stand-in for atan2 on [0, 4), exact under negation:
/// angle(-v) = angle(v) + 2 holds bit-for-bit, so antipodal tests and the
/// "+ half turn" sweep threshold stay exact in floating point.
pub fn halfspace_diamond_angle(x: f64, y: f64) -> f64 {
    if y >= 0.0 {
        if x >= 0.0 {
            y / (x + y)
        } else {
            1.0 - x / (-x + y)
        }
    } else if x < 0.0 {
        2.0 - y / (-x - y)
    } else {
        3.0 + x / (x - y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn univariate_counts() {
        let vals = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(univariate_halfspace_count(2.0, &vals), 2);
        assert_eq!(univariate_halfspace_count(0.0, &vals), 0);
        assert_eq!(univariate_halfspace_count(3.0, &vals), 3);
        let mut sorted = vals.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for v in [0.0, 1.0, 1.5, 2.0, 3.0, 5.0, 6.0] {
            assert_eq!(
                univariate_halfspace_count(v, &vals),
                univariate_halfspace_count_sorted(v, &sorted)
            );
        }
    }

    #[test]
    fn lower_median_convention() {
        assert_eq!(lower_median(&[1.0, 2.0, 3.0]), 2.0);
        assert_eq!(lower_median(&[1.0, 2.0, 3.0, 4.0]), 2.0);
        assert_eq!(lower_median(&[5.0]), 5.0);
    }
}
