//! Cyclic Jacobi eigensolver for dense complex Hermitian matrices.
//!
//! The matrices handled here are tiny (single-copy operators with d <= 16 and
//! collective operators of a few copies), so every rotation is applied to the
//! full rows and columns and the eigenvectors are accumulated explicitly.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, Ket, C64, ZERO};
use crate::tolerances::TOL;

/// Eigen-decomposition `M = V diag(values) V^†`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Ket {
        self.vectors.column(k)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)].conj()).sum()
        })
    }
}

fn hermitian_threshold(m: &ComplexMatrix) -> f64 {
    TOL.hermitian * m.max_abs().max(1.0)
}

/// Diagonalizes a Hermitian matrix with cyclic complex Jacobi rotations.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let defect = m.hermitian_defect();
    if defect > hermitian_threshold(m) {
        return Err(Error::NotHermitian(defect));
    }
    let n = m.dim();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let target = TOL.jacobi_offdiag * a.frobenius_norm();

    let mut converged = false;
    for _ in 0..=TOL.jacobi_max_sweeps {
        if off_diagonal_norm(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(TOL.jacobi_max_sweeps));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Annihilates `a[p][q]` with `J = D R`, where `D` removes the phase of the
/// pivot and `R` is the real Jacobi rotation; `a <- J^† a J`, `v <- v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let phase = apq / g;
    let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = phase.conj() * (-s);
    let jqq = phase.conj() * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// Largest eigenvalue of a Hermitian matrix; for PSD inputs this is the operator norm.
pub fn operator_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(m)?.values[0])
}

pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(*hermitian_eigen(m)?.values.last().expect("empty matrix"))
}

/// Applies `f` to the spectrum of a Hermitian matrix.
pub fn spectral_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let mapped = HermitianEigen { values: eig.values.iter().map(|&x| f(x)).collect(), vectors: eig.vectors };
    Ok(mapped.reconstruct())
}

/// `M^{-1/2}` for a positive definite matrix.
pub fn inverse_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(m)?;
    let smallest = *eig.values.last().expect("empty matrix");
    if smallest <= 1e-12 * eig.values[0].max(1.0) {
        return Err(Error::DomainError(format!("matrix is not positive definite (min eigenvalue {smallest:.3e})")));
    }
    Ok(HermitianEigen { values: eig.values.iter().map(|x| 1.0 / x.sqrt()).collect(), vectors: eig.vectors }
        .reconstruct())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::pauli;

    #[test]
    fn pauli_z_spectrum() {
        let [_, _, z] = pauli();
        let e = hermitian_eigen(&z).unwrap();
        assert_eq!(e.values, vec![1.0, -1.0]);
    }

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eigen(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn plus_projector_spectrum() {
        // (1 + sigma_x)/2 has characteristic polynomial l^2 - l = 0.
        let [x, _, _] = pauli();
        let m = (&ComplexMatrix::identity(2) + &x).scale_real(0.5);
        let e = hermitian_eigen(&m).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!(e.values[1].abs() < 1e-14);
        assert!(e.reconstruct().max_abs_diff(&m) < 1e-14);
    }

    #[test]
    fn complex_pivots_converge() {
        let [x, y, z] = pauli();
        let m = &(&x.scale_real(0.3) + &y.scale_real(-0.7)) + &z.scale_real(0.2);
        let e = hermitian_eigen(&m).unwrap();
        let r = (0.09f64 + 0.49 + 0.04).sqrt();
        assert!((e.values[0] - r).abs() < 1e-14);
        assert!((e.values[1] + r).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigen(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn zero_matrix_is_fine() {
        let e = hermitian_eigen(&ComplexMatrix::zeros(3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn inverse_sqrt_of_diagonal() {
        let m = ComplexMatrix::diagonal(&[4.0, 0.25]);
        let r = inverse_sqrt(&m).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::diagonal(&[0.5, 2.0])) < 1e-14);
    }
}
