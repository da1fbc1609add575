//! Multipartite helpers: permutation operators, symmetric projectors and
//! partial traces on `H^{⊗n}` with the first factor most significant.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64};

/// Largest tensor-space dimension any dense multipartite routine will build.
pub const MAX_TENSOR_DIM: usize = 4096;

/// Projector onto the symmetric subspace of `H^{⊗t}`.
#[derive(Debug, Clone)]
pub struct SymmetricProjector {
    pub single_dim: usize,
    pub copies: usize,
    pub matrix: ComplexMatrix,
}

impl SymmetricProjector {
    /// `D_t = binom(d + t - 1, t)`
    pub fn rank(&self) -> u64 {
        binomial((self.single_dim + self.copies - 1) as u64, self.copies as u64)
    }
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `d^t`, or `None` when it exceeds [`MAX_TENSOR_DIM`].
pub fn guarded_power(d: usize, t: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..t {
        acc = acc.checked_mul(d)?;
        if acc > MAX_TENSOR_DIM {
            return None;
        }
    }
    Some(acc)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(factorial(n) as usize);
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

pub(crate) fn to_digits(mut index: usize, d: usize, n: usize, out: &mut [usize]) {
    for k in (0..n).rev() {
        out[k] = index % d;
        index /= d;
    }
}

pub(crate) fn from_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Permutation operator `U_pi |x_1 ... x_n> = |x_pi(1) ... x_pi(n)>`.
pub fn permutation_operator(d: usize, perm: &[usize]) -> Result<ComplexMatrix> {
    let n = perm.len();
    let dim = guarded_power(d, n).ok_or_else(|| Error::TooLarge(format!("{d}^{n} > {MAX_TENSOR_DIM}")))?;
    let mut m = ComplexMatrix::zeros(dim);
    let mut src = vec![0; n];
    let mut dst = vec![0; n];
    for x in 0..dim {
        to_digits(x, d, n, &mut src);
        for k in 0..n {
            dst[k] = src[perm[k]];
        }
        m[(from_digits(&dst, d), x)] = C64::new(1.0, 0.0);
    }
    Ok(m)
}

/// `P_t = (1/t!) sum_{pi in S_t} U_pi` as a dense matrix.
pub fn symmetric_projector(d: usize, t: usize) -> Result<SymmetricProjector> {
    let dim = guarded_power(d, t).ok_or_else(|| Error::TooLarge(format!("{d}^{t} > {MAX_TENSOR_DIM}")))?;
    let perms = permutations(t);
    let w = 1.0 / perms.len() as f64;
    let mut m = ComplexMatrix::zeros(dim);
    let mut src = vec![0; t];
    let mut dst = vec![0; t];
    for x in 0..dim {
        to_digits(x, d, t, &mut src);
        for perm in &perms {
            for k in 0..t {
                dst[k] = src[perm[k]];
            }
            m[(from_digits(&dst, d), x)].re += w;
        }
    }
    Ok(SymmetricProjector { single_dim: d, copies: t, matrix: m })
}

/// Swap operator `W |jk> = |kj>` on `H ⊗ H`.
pub fn swap_operator(d: usize) -> ComplexMatrix {
    permutation_operator(d, &[1, 0]).expect("swap of a small space")
}

/// Traces out the first `n_traced` factors of an operator on `H^{⊗(n_traced+1)}`.
pub fn partial_trace_first_n(m: &ComplexMatrix, d: usize, n_traced: usize) -> Result<ComplexMatrix> {
    let expected = d.checked_pow(n_traced as u32 + 1);
    if expected != Some(m.dim()) {
        return Err(Error::DimMismatch(format!(
            "operator of dim {} is not on {d}^{}",
            m.dim(),
            n_traced + 1
        )));
    }
    let blocks = m.dim() / d;
    Ok(ComplexMatrix::from_fn(d, |a, b| (0..blocks).map(|i| m[(i * d + a, i * d + b)]).sum()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{basis_ket, kron};

    #[test]
    fn projector_traces_match_binomials() {
        for (d, t, expected) in [(2, 2, 3.0), (3, 2, 6.0), (2, 3, 4.0)] {
            let p = symmetric_projector(d, t).unwrap();
            assert!((p.matrix.trace().re - expected).abs() < 1e-12);
            assert_eq!(p.rank() as f64, expected);
            let sq = &p.matrix * &p.matrix;
            assert!(sq.max_abs_diff(&p.matrix) < 1e-12);
        }
    }

    #[test]
    fn projector_guard() {
        assert!(matches!(symmetric_projector(2, 13), Err(Error::TooLarge(_))));
    }

    #[test]
    fn swap_properties() {
        let w = swap_operator(2);
        assert!((w.trace().re - 2.0).abs() < 1e-15);
        assert_eq!(w.apply(&basis_ket(4, 1)), basis_ket(4, 2));
        let p2 = symmetric_projector(3, 2).unwrap().matrix;
        let w3 = swap_operator(3);
        let two_p_minus_one = p2.scale_real(2.0).add_identity(C64::new(-1.0, 0.0));
        assert!(w3.max_abs_diff(&two_p_minus_one) < 1e-12);
    }

    #[test]
    fn partial_trace_examples() {
        let mixed = ComplexMatrix::identity(4).scale_real(0.25);
        let r = partial_trace_first_n(&mixed, 2, 1).unwrap();
        assert!(r.max_abs_diff(&ComplexMatrix::identity(2).scale_real(0.5)) < 1e-15);

        let rho = ComplexMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]);
        let p0 = ComplexMatrix::projector(&basis_ket(2, 0));
        let r = partial_trace_first_n(&kron(&p0, &rho), 2, 1).unwrap();
        assert!(r.max_abs_diff(&rho) < 1e-15);

        assert!(matches!(partial_trace_first_n(&rho, 2, 1), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn half_q_of_basis_projector() {
        // tr_1[P_2 (|0><0| ⊗ 1)] = (1 + |0><0|)/2 with P_2 = (1 + W)/2.
        let p2 = symmetric_projector(2, 2).unwrap().matrix;
        let p0 = ComplexMatrix::projector(&basis_ket(2, 0));
        let m = &p2 * &kron(&p0, &ComplexMatrix::identity(2));
        let r = partial_trace_first_n(&m, 2, 1).unwrap();
        let expected = (&ComplexMatrix::identity(2) + &p0).scale_real(0.5);
        assert!(r.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(1), vec![vec![0]]);
        assert_eq!(binomial(5, 2), 10);
    }
}
