//! Small dense complex linear algebra: LU with partial pivoting for
//! determinants and solves, and a Jacobi eigensolver for Hermitian matrices
//! (used for singular-value analysis of period matrices).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Max entry modulus.
    pub fn norm_max(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }

    /// Determinant via LU with partial pivoting. A numerically singular
    /// matrix simply returns a value near zero.
    pub fn det(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a[col * n + col].norm();
            for r in col + 1..n {
                let mag = a[r * n + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                det = -det;
            }
            let pivot = a[col * n + col];
            det *= pivot;
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
            }
        }
        det
    }

    /// Solve `self * x = rhs`, failing when a pivot falls below
    /// `pivot_rel_tol * max|entry|`.
    pub fn solve(&self, rhs: &[Complex64], pivot_rel_tol: f64) -> Result<Vec<Complex64>> {
        assert_eq!(self.rows, self.cols, "solve needs a square matrix");
        assert_eq!(rhs.len(), self.rows, "rhs length mismatch");
        let n = self.rows;
        let threshold = pivot_rel_tol * self.norm_max();
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let mut pivot_row = col;
            let mut pivot_mag = a[col * n + col].norm();
            for r in col + 1..n {
                let mag = a[r * n + col].norm();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = r;
                }
            }
            if pivot_mag <= threshold {
                return Err(Error::SingularMatrix {
                    pivot: pivot_mag,
                    threshold,
                });
            }
            if pivot_row != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot_row * n + j);
                }
                b.swap(col, pivot_row);
            }
            let pivot = a[col * n + col];
            for r in col + 1..n {
                let factor = a[r * n + col] / pivot;
                if factor == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in col..n {
                    let v = a[col * n + j];
                    a[r * n + j] -= factor * v;
                }
                let bc = b[col];
                b[r] -= factor * bc;
            }
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for row in (0..n).rev() {
            let mut acc = b[row];
            for j in row + 1..n {
                acc -= a[row * n + j] * x[j];
            }
            x[row] = acc / a[row * n + row];
        }
        Ok(x)
    }

    /// Eigenvalues (ascending) and eigenvectors (as columns) of a Hermitian
    /// matrix, by cyclic Jacobi rotations.
    pub fn hermitian_eigen(&self) -> (Vec<f64>, CMatrix) {
        assert_eq!(self.rows, self.cols, "eigen of non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut v = CMatrix::identity(n);
        let scale = self.norm_max().max(f64::MIN_POSITIVE);
        for _sweep in 0..100 {
            let mut off = 0.0f64;
            for p in 0..n {
                for q in p + 1..n {
                    off = off.max(a[(p, q)].norm());
                }
            }
            if off <= 1e-15 * scale {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let mag = apq.norm();
                    if mag <= 1e-18 * scale {
                        continue;
                    }
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    // phase so the rotated off-diagonal entry is real
                    let phase = apq / mag;
                    let tau = (aqq - app) / (2.0 * mag);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // columns: [p, q] <- [c*p - s*conj(phase)*q, s*phase*p + c*q]
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = akp * c - akq * phase.conj() * s;
                        a[(k, q)] = akp * phase * s + akq * c;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = apk * c - aqk * phase * s;
                        a[(q, k)] = apk * phase.conj() * s + aqk * c;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * phase.conj() * s;
                        v[(k, q)] = vkp * phase * s + vkq * c;
                    }
                }
            }
        }
        let mut idx: Vec<usize> = (0..n).collect();
        let eigs: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        idx.sort_by(|&i, &j| eigs[i].partial_cmp(&eigs[j]).unwrap());
        let sorted_eigs: Vec<f64> = idx.iter().map(|&i| eigs[i]).collect();
        let mut vecs = CMatrix::zeros(n, n);
        for (new_col, &old_col) in idx.iter().enumerate() {
            for r in 0..n {
                vecs[(r, new_col)] = v[(r, old_col)];
            }
        }
        (sorted_eigs, vecs)
    }

    /// Singular values (ascending) and right singular vectors of a possibly
    /// rectangular matrix, via the Hermitian eigenproblem of `A^H A`.
    pub fn singular_values(&self) -> (Vec<f64>, CMatrix) {
        let ata = self.adjoint().matmul(self);
        let (eigs, vecs) = ata.hermitian_eigen();
        (eigs.iter().map(|&e| e.max(0.0).sqrt()).collect(), vecs)
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn det_identity_and_swap() {
        assert!((CMatrix::identity(4).det() - c(1.0, 0.0)).norm() < 1e-15);
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        assert!((m.det() + c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn det_known_complex() {
        // det [[1, i], [i, 1]] = 1 - i^2 = 2
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, 1.0), c(1.0, 0.0)],
        ]);
        assert!((m.det() - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn solve_roundtrip() {
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 1.0), c(-1.0, 0.5), c(0.0, 0.3)],
            vec![c(0.1, -0.2), c(3.0, 0.0), c(1.0, 1.0)],
            vec![c(0.0, 0.0), c(-0.5, 0.1), c(1.5, -0.7)],
        ]);
        let x_true = vec![c(1.0, -1.0), c(0.5, 2.0), c(-0.25, 0.0)];
        let mut rhs = vec![c(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..3 {
                rhs[i] += m[(i, j)] * x_true[j];
            }
        }
        let x = m.solve(&rhs, 1e-14).unwrap();
        for (a, b) in x.iter().zip(&x_true) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn solve_singular_rejected() {
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        assert!(matches!(
            m.solve(&[c(1.0, 0.0), c(1.0, 0.0)], 1e-12),
            Err(Error::SingularMatrix { .. })
        ));
    }

    #[test]
    fn hermitian_eigen_known() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(0.0, 1.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ]);
        let (eigs, vecs) = m.hermitian_eigen();
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0).abs() < 1e-12);
        // residual check: M v = lambda v
        for col in 0..2 {
            for row in 0..2 {
                let mut mv = c(0.0, 0.0);
                for k in 0..2 {
                    mv += m[(row, k)] * vecs[(k, col)];
                }
                assert!((mv - vecs[(row, col)] * eigs[col]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn singular_values_of_rectangular() {
        // [[1, 0, 0], [0, 2, 0]] has singular values {1, 2} and a null right-vector e3
        let m = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
        ]);
        let (sv, vecs) = m.singular_values();
        assert!(sv[0].abs() < 1e-12);
        assert!((sv[1] - 1.0).abs() < 1e-12);
        assert!((sv[2] - 2.0).abs() < 1e-12);
        assert!((vecs[(2, 0)].norm() - 1.0).abs() < 1e-12);
    }
}
