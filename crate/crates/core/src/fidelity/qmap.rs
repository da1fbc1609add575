//! The map `Q(O) = (N+1)! tr_{1..N}[P_{N+1} (O ⊗ 1)]`: closed forms for
//! product inputs with up to three factors, and a permutation-sum oracle
//! for arbitrary operators on `H^{⊗N}`.

use crate::error::{Error, Result};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::tensor::{from_digits, guarded_power, permutations, to_digits, MAX_TENSOR_DIM};

/// `Q(A) = tr(A) + A`
pub fn q_map_1(a: &ComplexMatrix) -> ComplexMatrix {
    a.add_identity(a.trace())
}

/// `Q(A ⊗ B) = trA trB + tr(AB) + tr(B) A + tr(A) B + AB + BA`
pub fn q_map_2(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ta, tb) = (a.trace(), b.trace());
    let mut q = a.anticommutator(b);
    q += &a.scale(tb);
    q += &b.scale(ta);
    q.add_identity(ta * tb + a.trace_product(b))
}

/// The 24-term expansion of `Q(A ⊗ B ⊗ C)`.
pub fn q_map_3(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> ComplexMatrix {
    let (ta, tb, tc) = (a.trace(), b.trace(), c.trace());
    let (ab, bc, ca) = (a * b, b * c, c * a);
    let (ba, cb, ac) = (b * a, c * b, a * c);
    let (tab, tbc, tca) = (ab.trace(), bc.trace(), ca.trace());
    let scalar = ta * tb * tc + tab * tc + tbc * ta + tca * tb + (&ab * c).trace() + (&ac * b).trace();

    let mut q = &ab * c;
    q += &(&ac * b);
    q += &(&bc * a);
    q += &(&ba * c);
    q += &(&ca * b);
    q += &(&cb * a);
    q += &a.scale(tb * tc + tbc);
    q += &b.scale(tc * ta + tca);
    q += &c.scale(ta * tb + tab);
    q += &(&ab + &ba).scale(tc);
    q += &(&ac + &ca).scale(tb);
    q += &(&bc + &cb).scale(ta);
    q.add_identity(scalar)
}

/// Permutation-sum evaluation of `Q(O)` for an operator `O` on `H^{⊗n}`,
/// without building the symmetric projector:
/// `Q(O) = sum_pi tr_{1..n}[U_pi (O ⊗ 1)]`.
pub fn q_map_collective(o: &ComplexMatrix, d: usize, n: usize) -> Result<ComplexMatrix> {
    let rows = guarded_power(d, n + 1)
        .ok_or_else(|| Error::TooLarge(format!("{d}^{} exceeds {MAX_TENSOR_DIM}", n + 1)))?;
    let block = rows / d;
    if o.dim() != block {
        return Err(Error::DimMismatch(format!("operator of dim {} is not on {d}^{n}", o.dim())));
    }
    let perms = permutations(n + 1);
    let mut out = ComplexMatrix::zeros(d);
    let mut src = vec![0usize; n + 1];
    let mut dst = vec![0usize; n + 1];
    for perm in &perms {
        for j in 0..block {
            for b in 0..d {
                to_digits(j * d + b, d, n + 1, &mut src);
                for k in 0..=n {
                    dst[k] = src[perm[k]];
                }
                let i = from_digits(&dst[..n], d);
                let a = dst[n];
                out[(a, b)] += o[(j, i)];
            }
        }
    }
    Ok(out)
}

/// `Q(A_1 ⊗ ... ⊗ A_N)` through the oracle; the product operator is materialized.
pub fn q_map_general(ops: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let d = ops.first().map(ComplexMatrix::dim).ok_or_else(|| Error::BadCount("no operators".into()))?;
    if ops.iter().any(|o| o.dim() != d) {
        return Err(Error::DimMismatch("factors have different dimensions".into()));
    }
    let n = ops.len();
    guarded_power(d, n + 1).ok_or_else(|| Error::TooLarge(format!("{d}^{} exceeds {MAX_TENSOR_DIM}", n + 1)))?;
    let mut prod = ops[0].clone();
    for o in &ops[1..] {
        prod = prod.kron(o);
    }
    q_map_collective(&prod, d, n)
}

/// Closed form when available (`N <= 3`), otherwise the oracle.
pub fn q_map_product(ops: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    match ops {
        [a] => Ok(q_map_1(a)),
        [a, b] => Ok(q_map_2(a, b)),
        [a, b, c] => Ok(q_map_3(a, b, c)),
        _ => q_map_general(&ops.iter().map(|&o| o.clone()).collect::<Vec<_>>()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigen::operator_norm;
    use crate::linalg::matrix::basis_ket;
    use crate::linalg::random::{random_psd, seeded};
    use crate::linalg::tensor::{factorial, partial_trace_first_n, symmetric_projector};

    fn proj(d: usize, j: usize) -> ComplexMatrix {
        ComplexMatrix::projector(&basis_ket(d, j))
    }

    #[test]
    fn basis_norms() {
        let n1 = operator_norm(&q_map_1(&proj(3, 0))).unwrap();
        assert!((n1 - 2.0).abs() < 1e-12);
        let q = q_map_1(&ComplexMatrix::identity(2));
        assert!(q.max_abs_diff(&ComplexMatrix::identity(2).scale_real(3.0)) < 1e-15);
        for (j, k, expect) in [(0, 0, 6.0), (0, 1, 2.0)] {
            let v = operator_norm(&q_map_2(&proj(3, j), &proj(3, k))).unwrap();
            assert!((v - expect).abs() < 1e-12);
        }
        for (j, k, l, expect) in [(1, 1, 1, 24.0), (1, 1, 2, 6.0), (0, 1, 2, 2.0)] {
            let v = operator_norm(&q_map_3(&proj(3, j), &proj(3, k), &proj(3, l))).unwrap();
            assert!((v - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn oracle_agrees_with_projector_definition() {
        // (N+1)! tr_{1..N}[P_{N+1}(O ⊗ 1)] built densely
        let mut rng = seeded(5);
        for (d, n) in [(2usize, 1usize), (2, 2), (3, 2), (2, 3)] {
            let dim = d.pow(n as u32);
            let o = random_psd(&mut rng, dim, 2);
            let p = symmetric_projector(d, n + 1).unwrap().matrix;
            let dense = partial_trace_first_n(&(&p * &o.kron(&ComplexMatrix::identity(d))), d, n)
                .unwrap()
                .scale_real(factorial(n + 1) as f64);
            let fast = q_map_collective(&o, d, n).unwrap();
            assert!(fast.max_abs_diff(&dense) < 1e-10);
        }
    }

    #[test]
    fn closed_forms_match_oracle() {
        let mut rng = seeded(9);
        for d in [2, 3] {
            for _ in 0..5 {
                let a = random_psd(&mut rng, d, 1 + d / 2);
                let b = random_psd(&mut rng, d, 1);
                let cc = random_psd(&mut rng, d, 2);
                assert!(q_map_1(&a).max_abs_diff(&q_map_general(&[a.clone()]).unwrap()) < 1e-9);
                assert!(q_map_2(&a, &b).max_abs_diff(&q_map_general(&[a.clone(), b.clone()]).unwrap()) < 1e-9);
                let q3 = q_map_general(&[a.clone(), b.clone(), cc.clone()]).unwrap();
                assert!(q_map_3(&a, &b, &cc).max_abs_diff(&q3) < 1e-8);
            }
        }
    }

    #[test]
    fn guard_and_shape_errors() {
        let a = ComplexMatrix::identity(4);
        assert!(matches!(q_map_general(&vec![a; 6]), Err(Error::TooLarge(_))));
        assert!(matches!(q_map_collective(&ComplexMatrix::identity(3), 2, 1), Err(Error::DimMismatch(_))));
        assert!(q_map_product(&[&ComplexMatrix::identity(2); 4]).is_ok());
    }
}
