//! Matrix quantities behind the quasiconformal cross-product inequality
//!
//! `|A x_1 x ... x A x_{n-1}| <= [K^2 / (1 + (n-1) K^2)]^{(n-1)/2} ||A||_2^{n-1} |x_1 x ... x x_{n-1}|`
//!
//! where `K = lambda_n / lambda_1` is the ratio of extreme singular values and
//! `||A||_2` is the Hilbert-Schmidt norm.
//!
//! The generalized cross product is normalized so that
//! `<v, x_1 x ... x x_{n-1}> = det[x_1; ...; x_{n-1}; v]` (rows). With this
//! normalization `A x_1 x ... x A x_{n-1} = cof(A) (x_1 x ... x x_{n-1})`, where
//! `cof(A) = adj(A)^T` is the cofactor matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// Singular values below `RANK_TOL * lambda_max` count as zero.
pub const RANK_TOL: f64 = 1e-13;

/// Relative slack allowed before the inequality counts as violated.
pub const INEQUALITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct MatrixAnalysis {
    pub entries: DMatrix<f64>,
    /// Nondecreasing.
    pub singular_values: Vec<f64>,
    pub hs_norm: f64,
    pub op_norm: f64,
    /// `+inf` for singular matrices.
    pub qc_constant: f64,
    pub determinant: f64,
    pub adjugate: DMatrix<f64>,
    /// Transpose of the adjugate.
    pub cofactor: DMatrix<f64>,
}

impl MatrixAnalysis {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_singular(&self) -> bool {
        self.qc_constant.is_infinite()
    }
}

fn check_square(a: &DMatrix<f64>) -> Result<usize> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::domain(format!("matrix dimension {n} outside 2..={MAX_DIM}")));
    }
    Ok(n)
}

pub fn analyze(a: &DMatrix<f64>) -> Result<MatrixAnalysis> {
    let n = check_square(a)?;
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("matrix has non-finite entries"));
    }
    let singular_values = singular_values(a);
    let op_norm = singular_values[n - 1];
    let smallest = singular_values[0];
    let qc_constant = if op_norm == 0.0 || smallest <= RANK_TOL * op_norm {
        f64::INFINITY
    } else {
        op_norm / smallest
    };
    let cofactor = cofactor_matrix(a);
    Ok(MatrixAnalysis {
        entries: a.clone(),
        hs_norm: a.iter().map(|v| v * v).sum::<f64>().sqrt(),
        op_norm,
        qc_constant,
        determinant: determinant(a),
        adjugate: cofactor.transpose(),
        cofactor,
        singular_values,
    })
}

/// Square roots of the eigenvalues of `A^T A`, ascending.
pub fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let ata = a.transpose() * a;
    let eig = SymmetricEigen::new(ata);
    let mut out: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    out.sort_by(f64::total_cmp);
    out
}

pub fn determinant(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    match n {
        0 => 1.0,
        1 => a[(0, 0)],
        2 => a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)],
        3 | 4 => (0..n)
            .map(|j| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * a[(0, j)] * determinant(&minor(a, 0, j))
            })
            .sum(),
        _ => lu_determinant(a.clone()),
    }
}

fn lu_determinant(mut m: DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].abs().total_cmp(&m[(j, col)].abs()))
            .unwrap();
        if m[(pivot, col)] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap_rows(pivot, col);
            det = -det;
        }
        let p = m[(col, col)];
        det *= p;
        for row in col + 1..n {
            let f = m[(row, col)] / p;
            for k in col..n {
                m[(row, k)] -= f * m[(col, k)];
            }
        }
    }
    det
}

fn minor(a: &DMatrix<f64>, row: usize, col: usize) -> DMatrix<f64> {
    a.clone().remove_row(row).remove_column(col)
}

/// `cof(A)_{ij} = (-1)^{i+j} det(minor_{ij})`. Computed entry by entry, so it is
/// exact in structure for singular matrices too.
pub fn cofactor_matrix(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    DMatrix::from_fn(n, n, |i, j| {
        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
        sign * determinant(&minor(a, i, j))
    })
}

pub fn adjugate(a: &DMatrix<f64>) -> DMatrix<f64> {
    cofactor_matrix(a).transpose()
}

/// Generalized cross product of `n - 1` vectors in `R^n`.
pub fn cross<V: AsRef<[f64]>>(vectors: &[V]) -> Result<Vec<f64>> {
    let n = vectors.len() + 1;
    if n < 2 {
        return Err(Error::domain("cross product needs at least one vector"));
    }
    for v in vectors {
        if v.as_ref().len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.as_ref().len(),
            });
        }
    }
    if n == 3 {
        let (x, y) = (vectors[0].as_ref(), vectors[1].as_ref());
        return Ok(vec![
            x[1] * y[2] - x[2] * y[1],
            x[2] * y[0] - x[0] * y[2],
            x[0] * y[1] - x[1] * y[0],
        ]);
    }
    let rows = DMatrix::from_fn(n - 1, n, |i, j| vectors[i].as_ref()[j]);
    Ok((0..n)
        .map(|i| {
            let sign = if (n - 1 + i).is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * determinant(&rows.clone().remove_column(i))
        })
        .collect())
}

/// `[K^2 / (1 + (n-1) K^2)]^{(n-1)/2}`, equal to `(1/(n-1))^{(n-1)/2}` at `K = inf`.
pub fn bound_factor(k: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("dimension {n} < 2")));
    }
    if !(k >= 1.0) {
        return Err(Error::domain(format!("quasiconformality constant {k} < 1")));
    }
    let m = (n - 1) as f64;
    // K^2/(1 + m K^2) = 1/(K^-2 + m); K = inf gives 1/m.
    let base = 1.0 / (1.0 / (k * k) + m);
    Ok(base.powf(0.5 * m))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// `rhs - lhs`.
    pub slack: f64,
}

fn apply<V: AsRef<[f64]>>(a: &DMatrix<f64>, vectors: &[V]) -> Result<Vec<Vec<f64>>> {
    let n = a.nrows();
    if vectors.len() + 1 != n {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            got: vectors.len(),
        });
    }
    vectors
        .iter()
        .map(|v| {
            let v = v.as_ref();
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
            Ok((0..n).map(|i| (0..n).map(|j| a[(i, j)] * v[j]).sum()).collect())
        })
        .collect()
}

fn length(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

pub fn verify_cross_inequality<V: AsRef<[f64]>>(a: &DMatrix<f64>, vectors: &[V]) -> Result<CrossCheck> {
    verify_with_factor(a, vectors, 1.0)
}

/// Same as [`verify_cross_inequality`] with the bound factor multiplied by
/// `scale`. Only used to build negative controls.
#[doc(hidden)]
pub fn verify_with_factor<V: AsRef<[f64]>>(
    a: &DMatrix<f64>,
    vectors: &[V],
    scale: f64,
) -> Result<CrossCheck> {
    let analysis = analyze(a)?;
    let n = analysis.dim();
    let images = apply(a, vectors)?;
    let lhs = length(&cross(&images)?);
    let base = length(&cross(vectors)?);
    let hs_pow = analysis.hs_norm.powi(n as i32 - 1);
    let rhs = scale * bound_factor(analysis.qc_constant, n)? * hs_pow * base;
    let scale_floor: f64 = hs_pow * vectors.iter().map(|v| length(v.as_ref())).product::<f64>();
    let tol = INEQUALITY_TOL * rhs + 1e-14 * scale_floor;
    Ok(CrossCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + tol,
        slack: rhs - lhs,
    })
}

/// `|A x_1 x ... x A x_{n-1} - cof(A)(x_1 x ... x x_{n-1})|`.
pub fn adjugate_identity_residual<V: AsRef<[f64]>>(a: &DMatrix<f64>, vectors: &[V]) -> Result<f64> {
    check_square(a)?;
    let images = apply(a, vectors)?;
    let lhs = cross(&images)?;
    let base = cross(vectors)?;
    let cof = cofactor_matrix(a);
    let n = a.nrows();
    let rhs: Vec<f64> = (0..n).map(|i| (0..n).map(|j| cof[(i, j)] * base[j]).sum()).collect();
    Ok(lhs.iter().zip(&rhs).map(|(u, v)| (u - v) * (u - v)).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(d: &[f64]) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(d))
    }

    fn e(n: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        v
    }

    #[test]
    fn identity_analysis() {
        let m = analyze(&DMatrix::identity(3, 3)).unwrap();
        assert!(m.singular_values.iter().all(|l| (l - 1.0).abs() < 1e-15));
        assert_eq!(m.qc_constant, 1.0);
        assert_eq!(m.adjugate, DMatrix::identity(3, 3));
        assert!((m.hs_norm - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn diagonal_qc_constants() {
        let m = analyze(&diag(&[1.0, 7.0, 7.0])).unwrap();
        assert!((m.qc_constant - 7.0).abs() < 1e-13);
        let s = analyze(&diag(&[0.0, 1.0, 1.0])).unwrap();
        assert!(s.qc_constant.is_infinite());
        let z = analyze(&DMatrix::zeros(3, 3)).unwrap();
        assert!(z.qc_constant.is_infinite());
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(
            analyze(&DMatrix::zeros(2, 3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adjugate_of_singular_matrix() {
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.5, -1.0, 2.0]);
        let adj = adjugate(&a);
        assert!((&a * &adj).iter().all(|v| v.abs() < 1e-12));
        assert!(determinant(&a).abs() < 1e-15);
    }

    #[test]
    fn lu_and_laplace_determinants_agree() {
        let a = DMatrix::from_fn(4, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.7 + (i == j) as u8 as f64);
        assert!((determinant(&a) - lu_determinant(a.clone())).abs() < 1e-12);
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(&[e(3, 0), e(3, 1)]).unwrap(), e(3, 2));
        assert_eq!(cross(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]).unwrap(), vec![0.0; 3]);
        assert_eq!(cross(&[e(4, 0), e(4, 1), e(4, 2)]).unwrap(), e(4, 3));
        assert!(cross(&[e(3, 0), e(4, 1)]).is_err());
    }

    #[test]
    fn bound_factor_values() {
        assert!((bound_factor(1.0, 3).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(bound_factor(f64::INFINITY, 3).unwrap(), 0.5);
        assert!((bound_factor(f64::INFINITY, 5).unwrap() - 0.25f64.powi(2)).abs() < 1e-16);
        assert!(bound_factor(0.9, 3).is_err());
        let mut prev = 0.0;
        for i in 0..2000 {
            let k = 1.0 + 0.05 * i as f64;
            let f = bound_factor(k, 3).unwrap();
            assert!(f >= prev);
            prev = f;
        }
    }

    #[test]
    fn equality_families() {
        for k in [1.0, 2.0, 10.0] {
            let a = diag(&[1.0, k, k]);
            let c = verify_cross_inequality(&a, &[e(3, 1), e(3, 2)]).unwrap();
            assert!((c.lhs - k * k).abs() < 1e-12 * k * k);
            assert!((c.lhs - c.rhs).abs() < 1e-10 * c.rhs);
        }
        // K = inf family named at the end of the lemma: equality holds as well.
        let a = diag(&[0.0, 1.0, 1.0]);
        let c = verify_cross_inequality(&a, &[e(3, 1), e(3, 2)]).unwrap();
        assert_eq!(c.lhs, 1.0);
        assert!((c.rhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn adjugate_residual_identity() {
        let r = adjugate_identity_residual(&DMatrix::identity(3, 3), &[vec![0.3, 1.0, -2.0], vec![1.0, 0.0, 4.0]]).unwrap();
        assert_eq!(r, 0.0);
        let a = diag(&[0.0, 1.0, 1.0]);
        let r = adjugate_identity_residual(&a, &[vec![0.3, 1.0, -2.0], vec![1.0, 0.0, 4.0]]).unwrap();
        assert!(r < 1e-14);
    }
}
