use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// A column vector of complex amplitudes.
pub type Ket = Vec<C64>;

pub(crate) const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub(crate) const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Dense square complex matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![ZERO; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries; the length must be `dim * dim`.
    pub fn from_vec(dim: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimMismatch(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let dim = rows.len();
        Self::from_fn(dim, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * values.len() + i] = C64::new(v, 0.0);
        }
        m
    }

    /// `|a><b|`
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len(), "outer product of kets with different lengths");
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    /// `|psi><psi|`
    pub fn projector(psi: &[C64]) -> Self {
        Self::outer(psi, psi)
    }

    /// Matrix whose columns are the given kets.
    pub fn from_columns(cols: &[Ket]) -> Self {
        let dim = cols.len();
        Self::from_fn(dim, |i, j| cols[j][i])
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Ket {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// `tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> C64 {
        self.check_same(other);
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        acc
    }

    /// Hilbert-Schmidt inner product `tr(self^† other)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.check_same(other);
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|x| x * s).collect() }
    }

    /// `self + s * 1`
    pub fn add_identity(&self, s: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m.data[i * self.dim + i] += s;
        }
        m
    }

    pub fn apply(&self, v: &[C64]) -> Ket {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        let n = self.dim;
        (0..n).map(|i| (0..n).map(|k| self.data[i * n + k] * v[k]).sum()).collect()
    }

    /// `<u| self |v>`
    pub fn sandwich(&self, u: &[C64], v: &[C64]) -> C64 {
        let mv = self.apply(v);
        u.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.check_same(other);
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_jk |M_jk - conj(M_kj)|`
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.data[i * n + j] - self.data[j * n + i].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Returns `(M + M^†)/2`, removing rounding asymmetry.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5)
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        &(self * other) + &(other * self)
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch ({} vs {})", self.dim, other.dim);
    }
}

/// Kronecker product with the standard layout `(A ⊗ B)[(i,k),(j,l)] = A[i,j] B[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (n, m) = (a.dim, b.dim);
    let dim = n * m;
    let mut data = vec![ZERO; dim * dim];
    for i in 0..n {
        for j in 0..n {
            let aij = a.data[i * n + j];
            if aij == ZERO {
                continue;
            }
            for k in 0..m {
                let row = (i * m + k) * dim + j * m;
                for l in 0..m {
                    data[row + l] = aij * b.data[k * m + l];
                }
            }
        }
    }
    ComplexMatrix { dim, data }
}

/// Kronecker product of kets.
pub fn kron_ket(a: &[C64], b: &[C64]) -> Ket {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn ket_norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalized(a: &[C64]) -> Ket {
    let n = ket_norm(a);
    a.iter().map(|x| x / n).collect()
}

/// Computational basis ket `|index>` in dimension `dim`.
pub fn basis_ket(dim: usize, index: usize) -> Ket {
    let mut v = vec![ZERO; dim];
    v[index] = ONE;
    v
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same(rhs);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        self.check_same(rhs);
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same(rhs);
        ComplexMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.check_same(rhs);
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.data[k * n..(k + 1) * n];
                let out = &mut data[i * n..(i + 1) * n];
                for (o, b) in out.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, data }
    }
}

impl Mul<f64> for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: f64) -> ComplexMatrix {
        self.scale_real(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  [")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, " {:+.6}{:+.6}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Pauli matrices `(sigma_x, sigma_y, sigma_z)`.
pub fn pauli() -> [ComplexMatrix; 3] {
    let x = ComplexMatrix::from_vec(2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
    let y = ComplexMatrix::from_vec(2, vec![ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO]).unwrap();
    let z = ComplexMatrix::from_vec(2, vec![ONE, ZERO, ZERO, -ONE]).unwrap();
    [x, y, z]
}

/// `(c0 * 1 + r . sigma)` on a qubit.
pub fn bloch_operator(c0: f64, r: [f64; 3]) -> ComplexMatrix {
    let [sx, sy, sz] = pauli();
    let mut m = ComplexMatrix::identity(2).scale_real(c0);
    m += &sx.scale_real(r[0]);
    m += &sy.scale_real(r[1]);
    m += &sz.scale_real(r[2]);
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_of_basis_projectors() {
        let p0 = ComplexMatrix::projector(&basis_ket(2, 0));
        let p1 = ComplexMatrix::projector(&basis_ket(2, 1));
        let k = kron(&p0, &p1);
        let expected = ComplexMatrix::projector(&basis_ket(4, 1));
        assert_eq!(k, expected);
    }

    #[test]
    fn xx_flips_both_qubits() {
        let [sx, _, _] = pauli();
        let xx = kron(&sx, &sx);
        let out = xx.apply(&basis_ket(4, 0));
        assert_eq!(out, basis_ket(4, 3));
    }

    #[test]
    fn from_vec_rejects_wrong_length() {
        assert!(matches!(ComplexMatrix::from_vec(2, vec![ZERO; 3]), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn trace_product_matches_full_product() {
        let [sx, sy, sz] = pauli();
        let a = &(&sx + &sz) * &sy;
        let b = &sy + &sz.scale_real(0.3);
        let direct = (&a * &b).trace();
        assert!((a.trace_product(&b) - direct).norm() < 1e-15);
    }
}
