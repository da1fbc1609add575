//! Estimation fidelities of product and collective measurements on
//! Haar-random pure states, optimal estimators, and the criteria built on
//! extremal fidelities.

pub mod criteria;
pub mod qmap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::eigen::hermitian_eigen;
use crate::linalg::matrix::{ComplexMatrix, Ket};
use crate::linalg::tensor::{guarded_power, swap_operator, MAX_TENSOR_DIM};
use crate::povm::Povm;
use crate::tolerances::TOL;

pub use criteria::{
    classify_by_fidelity_signature, family_sum_criteria, fidelity_bound_report, incompatibility_witness,
    BoundCheck, BoundKind, FamilyReport, FidelityBoundReport, FidelitySignature, Verdict, WitnessReport,
};
pub use qmap::{q_map_1, q_map_2, q_map_3, q_map_collective, q_map_general, q_map_product};

/// `d (d+1) ... (d+N)`
pub fn fidelity_denominator(d: usize, copies: usize) -> f64 {
    (0..=copies).map(|k| (d + k) as f64).product()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityResult {
    pub value: f64,
    /// `||Q(A_j)||` in element order (first POVM outermost for products).
    pub per_element_norms: Vec<f64>,
    pub copies: usize,
    pub dim: usize,
}

impl FidelityResult {
    fn from_norms(dim: usize, copies: usize, per_element_norms: Vec<f64>) -> Self {
        let value = per_element_norms.iter().sum::<f64>() / fidelity_denominator(dim, copies);
        Self { value, per_element_norms, copies, dim }
    }

    /// Re-evaluates `sum ||Q|| / (d (d+1) ... (d+N))`.
    pub fn recompute(&self) -> f64 {
        self.per_element_norms.iter().sum::<f64>() / fidelity_denominator(self.dim, self.copies)
    }
}

/// Reference fidelities for dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityConstants {
    pub d: usize,
    pub f1: f64,
    pub f2_iid: f64,
    pub f2_sep: f64,
    pub f3_proj: f64,
}

impl FidelityConstants {
    pub fn new(d: usize) -> Self {
        let df = d as f64;
        Self {
            d,
            f1: 2.0 / (df + 1.0),
            f2_iid: 2.0 * (df * df + df + 1.0 + (df - 1.0) * (df + 1.0).sqrt()) / (df * (df + 1.0) * (df + 2.0)),
            f2_sep: 2.0 * (df + 1.0 + df.sqrt()) / ((df + 1.0) * (df + 2.0)),
            f3_proj: 2.0 * (df + 5.0) / ((df + 2.0) * (df + 3.0)),
        }
    }

    /// `(N+1)/(N+d)`, the best `N`-copy fidelity of any collective measurement.
    pub fn n_copy_ub(&self, copies: usize) -> f64 {
        (copies as f64 + 1.0) / (copies + self.d) as f64
    }

    /// Two-copy fidelity of `m` tight equiangular lines (`d <= m <= d^2`).
    pub fn equiangular_f2(&self, m: usize) -> f64 {
        let (df, mf) = (self.d as f64, m as f64);
        2.0 / (df + 2.0) + (2.0 * df + 2.0 * (df * (mf - 1.0) * (mf - df)).sqrt()) / (mf * (df + 1.0) * (df + 2.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FidelityMode {
    /// Closed forms for up to three factors, the oracle beyond.
    #[default]
    Auto,
    /// Always materialize the product elements and use the permutation sum.
    Oracle,
}

fn check_same_dim(povms: &[&Povm]) -> Result<usize> {
    let d = povms.first().map(|p| p.dim()).ok_or_else(|| Error::BadCount("no POVMs given".into()))?;
    if povms.iter().any(|p| p.dim() != d) {
        return Err(Error::DimMismatch("POVMs have different dimensions".into()));
    }
    Ok(d)
}

/// Element index tuples of a product POVM in lexicographic order.
fn index_tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().product();
    (0..total)
        .map(|mut x| {
            let mut idx = vec![0; sizes.len()];
            for k in (0..sizes.len()).rev() {
                idx[k] = x % sizes[k];
                x /= sizes[k];
            }
            idx
        })
        .collect()
}

fn product_q(povms: &[&Povm], idx: &[usize], mode: FidelityMode) -> Result<ComplexMatrix> {
    let ops: Vec<&ComplexMatrix> = povms.iter().zip(idx).map(|(p, &j)| &p.elements()[j]).collect();
    match mode {
        FidelityMode::Auto => q_map_product(&ops),
        FidelityMode::Oracle => q_map_general(&ops.into_iter().cloned().collect::<Vec<_>>()),
    }
}

fn top_eigenvalue(q: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(q)?.values[0])
}

/// `F(A_1 ⊗ ... ⊗ A_N)` for a product of single-copy POVMs.
pub fn estimation_fidelity(povms: &[&Povm]) -> Result<FidelityResult> {
    estimation_fidelity_with(povms, FidelityMode::Auto)
}

pub fn estimation_fidelity_with(povms: &[&Povm], mode: FidelityMode) -> Result<FidelityResult> {
    let d = check_same_dim(povms)?;
    let n = povms.len();
    if mode == FidelityMode::Oracle || n > 3 {
        guarded_power(d, n + 1).ok_or_else(|| Error::TooLarge(format!("{d}^{} exceeds {MAX_TENSOR_DIM}", n + 1)))?;
    }
    let sizes: Vec<usize> = povms.iter().map(|p| p.len()).collect();
    let norms = index_tuples(&sizes)
        .par_iter()
        .map(|idx| {
            if n == 1 && mode == FidelityMode::Auto {
                // ||Q(A)|| = tr A + ||A||
                let a = &povms[0].elements()[idx[0]];
                return Ok(a.trace().re + top_eigenvalue(a)?);
            }
            top_eigenvalue(&product_q(povms, idx, mode)?)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(FidelityResult::from_norms(d, n, norms))
}

/// Fidelity of a collective POVM on `H^{⊗n}` with single-copy dimension `d`.
pub fn collective_fidelity(p: &Povm, d: usize, n: usize) -> Result<FidelityResult> {
    let norms = p
        .elements()
        .par_iter()
        .map(|a| top_eigenvalue(&q_map_collective(a, d, n)?))
        .collect::<Result<Vec<f64>>>()?;
    Ok(FidelityResult::from_norms(d, n, norms))
}

#[derive(Debug, Clone)]
pub struct Estimator {
    pub state: Ket,
    pub top: f64,
    pub second: f64,
    /// Top eigenvalue of `Q` is (near) degenerate, so the estimator is not unique.
    pub degenerate: bool,
}

/// Optimal estimator (a top eigenvector of `Q`) for every product element.
pub fn optimal_estimators(povms: &[&Povm]) -> Result<Vec<Estimator>> {
    check_same_dim(povms)?;
    let sizes: Vec<usize> = povms.iter().map(|p| p.len()).collect();
    index_tuples(&sizes)
        .par_iter()
        .map(|idx| {
            let eig = hermitian_eigen(&product_q(povms, idx, FidelityMode::Auto)?)?;
            let top = eig.values[0];
            let second = eig.values.get(1).copied().unwrap_or(f64::NEG_INFINITY);
            Ok(Estimator { state: eig.vector(0), top, second, degenerate: top - second <= TOL.degenerate_top })
        })
        .collect()
}

/// Average fidelity `sum_j <psi_j|Q(A_j)|psi_j> / (d ... (d+N))` achieved by given estimators.
pub fn fidelity_with_estimators(povms: &[&Povm], estimators: &[Ket]) -> Result<f64> {
    let d = check_same_dim(povms)?;
    let sizes: Vec<usize> = povms.iter().map(|p| p.len()).collect();
    let tuples = index_tuples(&sizes);
    if tuples.len() != estimators.len() {
        return Err(Error::DimMismatch(format!("{} estimators for {} outcomes", estimators.len(), tuples.len())));
    }
    let mut acc = 0.0;
    for (idx, psi) in tuples.iter().zip(estimators) {
        acc += product_q(povms, idx, FidelityMode::Auto)?.sandwich(psi, psi).re;
    }
    Ok(acc / fidelity_denominator(d, povms.len()))
}

/// `d tr(W A) - tr(A)` for an operator on `H ⊗ H`; zero marks elements that
/// attain the separable two-copy bound.
pub fn separable_saturation_defect(a: &ComplexMatrix, d: usize) -> f64 {
    (swap_operator(d).trace_product(a).re * d as f64) - a.trace().re
}
