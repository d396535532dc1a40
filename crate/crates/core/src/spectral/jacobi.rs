//! Cyclic Jacobi eigensolver for real symmetric matrices.
//!
//! Rotations sweep the upper triangle row by row until the off-diagonal
//! Frobenius mass drops below tolerance. Dependency-free and accurate enough
//! for the matrix sizes this crate works at (k up to about 1000).

use crate::matrix::Mat;

const SWEEP_CAP: usize = 100;
const OFF_TOL: f64 = 1e-12;

/// Eigendecomposition of a symmetric matrix: `a = q * diag(values) * q^T`.
pub struct SymEigen {
    /// Eigenvalues sorted in descending order.
    pub values: Vec<f64>,
    /// Matching eigenvectors as columns of `q` (when requested).
    pub q: Option<Mat>,
}

fn off_frobenius(a: &Mat) -> f64 {
    let n = a.n();
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += 2.0 * a[(i, j)] * a[(i, j)];
        }
    }
    s.sqrt()
}

/// Computes eigenvalues (descending) of symmetric `a`; eigenvectors are
/// accumulated when `with_vectors` is set.
pub fn sym_eigen(a: &Mat, with_vectors: bool) -> SymEigen {
    let n = a.n();
    let mut m = a.clone();
    let mut q = if with_vectors { Some(Mat::identity(n)) } else { None };
    let tol = OFF_TOL * m.frobenius().max(1.0);

    for _sweep in 0..SWEEP_CAP {
        if off_frobenius(&m) <= tol {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apq = m[(p, r)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(r, r)];
                // rotation angle zeroing m[p][r]
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mrj = m[(r, j)];
                    m[(p, j)] = c * mpj - s * mrj;
                    m[(r, j)] = s * mpj + c * mrj;
                }
                for j in 0..n {
                    let mjp = m[(j, p)];
                    let mjr = m[(j, r)];
                    m[(j, p)] = c * mjp - s * mjr;
                    m[(j, r)] = s * mjp + c * mjr;
                }
                if let Some(q) = q.as_mut() {
                    for j in 0..n {
                        let qjp = q[(j, p)];
                        let qjr = q[(j, r)];
                        q[(j, p)] = c * qjp - s * qjr;
                        q[(j, r)] = s * qjp + c * qjr;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].partial_cmp(&m[(i, i)]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| m[(i, i)]).collect();
    let q = q.map(|qm| {
        let mut sorted = Mat::zeros(n);
        for (col, &src) in order.iter().enumerate() {
            for row in 0..n {
                sorted[(row, col)] = qm[(row, src)];
            }
        }
        sorted
    });
    SymEigen { values, q }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_its_own_spectrum() {
        let a = Mat::from_rows(&[vec![3.0, 0.0], vec![0.0, -1.0]]);
        let e = sym_eigen(&a, false);
        assert_eq!(e.values, vec![3.0, -1.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        // eigenvalues of [[2,1],[1,2]] are 3 and 1
        let a = Mat::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let e = sym_eigen(&a, true);
        assert!((e.values[0] - 3.0).abs() < 1e-12);
        assert!((e.values[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_self_check() {
        // q * diag * q^T must reproduce the input within 1e-9
        let n = 12;
        let mut a = Mat::zeros(n);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..n {
            for j in i..n {
                let v = next();
                a[(i, j)] = v;
                a[(j, i)] = v;
            }
        }
        let e = sym_eigen(&a, true);
        let q = e.q.unwrap();
        let mut lam = Mat::zeros(n);
        for i in 0..n {
            lam[(i, i)] = e.values[i];
        }
        let rec = q.matmul(&lam).matmul(&q.transpose());
        assert!(rec.max_abs_diff(&a) < 1e-9);
    }
}
