//! Seeded random kets, unitaries and PSD operators for property tests and
//! verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::matrix::{inner, normalized, ComplexMatrix, Ket, C64};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniformly distributed unit ket (normalized complex Gaussian vector).
pub fn random_ket(rng: &mut impl Rng, d: usize) -> Ket {
    let v: Ket = (0..d).map(|_| gaussian_complex(rng)).collect();
    normalized(&v)
}

/// Unitary from Gram-Schmidt on the columns of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let mut cols: Vec<Ket> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Ket = (0..d).map(|_| gaussian_complex(rng)).collect();
        for c in &cols {
            let proj = inner(c, &v);
            for (x, y) in v.iter_mut().zip(c) {
                *x -= proj * y;
            }
        }
        let n = crate::linalg::matrix::ket_norm(&v);
        if n < 1e-8 {
            continue;
        }
        cols.push(v.iter().map(|x| x / n).collect());
    }
    ComplexMatrix::from_columns(&cols)
}

/// Random PSD operator `G G^†` with `G` a `d x rank` complex Gaussian matrix.
pub fn random_psd(rng: &mut impl Rng, d: usize, rank: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d);
    for _ in 0..rank {
        let v: Ket = (0..d).map(|_| gaussian_complex(rng)).collect();
        m += &ComplexMatrix::projector(&v);
    }
    m
}

/// Random Hermitian matrix with entries drawn uniformly from the unit square, then symmetrized.
pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let raw = ComplexMatrix::from_fn(d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    raw.hermitian_part()
}

/// `U^{⊗n}`
pub fn tensor_power(u: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let mut acc = u.clone();
    for _ in 1..n {
        acc = acc.kron(u);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(7);
        for d in 1..6 {
            let u = random_unitary(&mut rng, d);
            let uu = &u.adjoint() * &u;
            assert!(uu.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let a = random_ket(&mut seeded(3), 4);
        let b = random_ket(&mut seeded(3), 4);
        assert_eq!(a, b);
    }
}
