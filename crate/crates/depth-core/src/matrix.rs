//! Dense square matrices and the few factorizations the depth notions need:
//! Cholesky inversion for Mahalanobis norms and a symmetric eigendecomposition
//! for the whitening transform R^{-1/2}.

use crate::error::{DepthError, Result};

/// A dense d x d matrix, row major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(DepthError::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                if (self[(i, j)] - self[(j, i)]).abs() > tol {
                    return false;
                }
            }
        }
        true
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = SquareMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// y = M x
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * x[j]).sum())
            .collect()
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Lower Cholesky factor; pivots must exceed `1e-12 * trace / d`.
    pub fn cholesky(&self) -> Result<SquareMatrix> {
        let d = self.dim;
        if !self.is_symmetric(1e-8 * (1.0 + self.trace().abs())) {
            return Err(DepthError::Numeric("matrix not symmetric".into()));
        }
        let floor = 1e-12 * self.trace().abs().max(f64::MIN_POSITIVE) / d as f64;
        let mut l = SquareMatrix::zeros(d);
        for i in 0..d {
            for j in 0..=i {
                let mut sum = self[(i, j)];
                for k in 0..j {
                    sum -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if sum <= floor {
                        return Err(DepthError::SingularScatter(format!(
                            "Cholesky pivot {sum:.3e} at index {i}"
                        )));
                    }
                    l[(i, j)] = sum.sqrt();
                } else {
                    l[(i, j)] = sum / l[(j, j)];
                }
            }
        }
        Ok(l)
    }

    /// Inverse of a symmetric positive definite matrix via Cholesky.
    pub fn cholesky_inverse(&self) -> Result<SquareMatrix> {
        let d = self.dim;
        let l = self.cholesky()?;
        // Invert L (lower triangular), then A^{-1} = L^{-T} L^{-1}.
        let mut linv = SquareMatrix::zeros(d);
        for i in 0..d {
            linv[(i, i)] = 1.0 / l[(i, i)];
            for j in 0..i {
                let mut sum = 0.0;
                for k in j..i {
                    sum -= l[(i, k)] * linv[(k, j)];
                }
                linv[(i, j)] = sum / l[(i, i)];
            }
        }
        let mut inv = SquareMatrix::zeros(d);
        for i in 0..d {
            for j in 0..=i {
                let mut sum = 0.0;
                for k in i.max(j)..d {
                    sum += linv[(k, i)] * linv[(k, j)];
                }
                inv[(i, j)] = sum;
                inv[(j, i)] = sum;
            }
        }
        Ok(inv)
    }

    /// Determinant via Cholesky for SPD input, LU with partial pivoting
    /// otherwise.
    pub fn determinant(&self) -> f64 {
        if let Ok(l) = self.cholesky() {
            let mut det = 1.0;
            for i in 0..self.dim {
                det *= l[(i, i)];
            }
            return det * det;
        }
        let d = self.dim;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..d {
            let mut piv = col;
            for r in (col + 1)..d {
                if a[(r, col)].abs() > a[(piv, col)].abs() {
                    piv = r;
                }
            }
            if a[(piv, col)] == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..d {
                    let tmp = a[(col, j)];
                    a[(col, j)] = a[(piv, j)];
                    a[(piv, j)] = tmp;
                }
                det = -det;
            }
            det *= a[(col, col)];
            for r in (col + 1)..d {
                let f = a[(r, col)] / a[(col, col)];
                for j in col..d {
                    a[(r, j)] -= f * a[(col, j)];
                }
            }
        }
        det
    }

    /// Eigendecomposition of a symmetric matrix by the cyclic Jacobi method.
    /// Returns (eigenvalues, eigenvectors as columns of the returned matrix).
    pub fn symmetric_eigen(&self) -> Result<(Vec<f64>, SquareMatrix)> {
        let d = self.dim;
        if !self.is_symmetric(1e-8 * (1.0 + self.trace().abs())) {
            return Err(DepthError::Numeric("matrix not symmetric".into()));
        }
        let mut a = self.clone();
        let mut v = SquareMatrix::identity(d);
        let scale = self
            .data
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
            .max(f64::MIN_POSITIVE);
        for _sweep in 0..100 {
            let mut off = 0.0;
            for i in 0..d {
                for j in (i + 1)..d {
                    off += a[(i, j)] * a[(i, j)];
                }
            }
            if off.sqrt() <= 1e-14 * scale * d as f64 {
                break;
            }
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = a[(p, q)];
                    if apq.abs() <= 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..d {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..d {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..d {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        let eigvals: Vec<f64> = (0..d).map(|i| a[(i, i)]).collect();
        Ok((eigvals, v))
    }

    /// R^{-1/2} of a symmetric positive definite matrix, by symmetric
    /// eigendecomposition.  Satisfies R^{-1/2} A R^{-1/2} = I within 1e-8.
    pub fn inverse_sqrt(&self) -> Result<SquareMatrix> {
        let d = self.dim;
        let (vals, vecs) = self.symmetric_eigen()?;
        let floor = 1e-12 * self.trace().abs().max(f64::MIN_POSITIVE) / d as f64;
        let mut out = SquareMatrix::zeros(d);
        for (k, &lambda) in vals.iter().enumerate() {
            if lambda <= floor {
                return Err(DepthError::SingularScatter(format!(
                    "eigenvalue {lambda:.3e} not positive"
                )));
            }
            let w = 1.0 / lambda.sqrt();
            for i in 0..d {
                for j in 0..d {
                    out[(i, j)] += w * vecs[(i, k)] * vecs[(j, k)];
                }
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}
