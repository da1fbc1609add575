//! Weighted state sets, frame potentials, and the half-moment bounds built
//! on the function `zeta`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::eigen::{hermitian_eigen, inverse_sqrt};
use crate::linalg::matrix::{inner, ket_norm, normalized, ComplexMatrix, Ket, C64};
use crate::linalg::random::random_ket;
use crate::linalg::tensor::binomial;
use crate::povm::Povm;
use crate::special::{ln_gamma, twice_if_half_integer};
use crate::tolerances::TOL;

/// `{|psi_j>, w_j}` with unit kets and weights summing to `d`.
#[derive(Debug, Clone)]
pub struct WeightedStateSet {
    dim: usize,
    states: Vec<Ket>,
    weights: Vec<f64>,
}

impl WeightedStateSet {
    pub fn new(dim: usize, states: Vec<Ket>, weights: Vec<f64>) -> Result<Self> {
        if states.len() != weights.len() {
            return Err(Error::DimMismatch(format!("{} states, {} weights", states.len(), weights.len())));
        }
        if states.is_empty() {
            return Err(Error::BadCount("empty state set".into()));
        }
        for (j, s) in states.iter().enumerate() {
            if s.len() != dim {
                return Err(Error::DimMismatch(format!("state {j} has length {} (expected {dim})", s.len())));
            }
            let n = ket_norm(s);
            if (n - 1.0).abs() > TOL.ket_norm {
                return Err(Error::DomainError(format!("state {j} has norm {n}")));
            }
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::DomainError("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - dim as f64).abs() > TOL.weight_sum {
            return Err(Error::DomainError(format!("weights sum to {total}, expected {dim}")));
        }
        Ok(Self { dim, states, weights })
    }

    /// Equal weights `d/m`.
    pub fn uniform(dim: usize, states: Vec<Ket>) -> Result<Self> {
        let w = dim as f64 / states.len().max(1) as f64;
        let weights = vec![w; states.len()];
        Self::new(dim, states, weights)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Ket] {
        &self.states
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `sum_j w_j |psi_j><psi_j|`
    pub fn frame_operator(&self) -> ComplexMatrix {
        let mut s = ComplexMatrix::zeros(self.dim);
        for (psi, &w) in self.states.iter().zip(&self.weights) {
            s += &ComplexMatrix::projector(psi).scale_real(w);
        }
        s
    }

    /// `max |frame operator - 1|`
    pub fn one_design_residual(&self) -> f64 {
        self.frame_operator().max_abs_diff(&ComplexMatrix::identity(self.dim))
    }
}

/// `x^t` with the convention `0^t = 0`; negative round-off is clamped.
pub fn real_power(x: f64, t: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if t == t.trunc() && t.abs() < 64.0 {
        x.powi(t as i32)
    } else if t == 0.5 {
        x.sqrt()
    } else {
        x.powf(t)
    }
}

fn cross_sum(a: &WeightedStateSet, b: &WeightedStateSet, t: f64) -> f64 {
    let mut acc = 0.0;
    for (psi, &w) in a.states.iter().zip(&a.weights) {
        for (phi, &v) in b.states.iter().zip(&b.weights) {
            acc += w * v * real_power(inner(psi, phi).norm_sqr(), t);
        }
    }
    acc
}

/// `Phi_t(S) = sum_{jk} w_j w_k |<psi_j|psi_k>|^{2t}`
pub fn frame_potential(s: &WeightedStateSet, t: f64) -> f64 {
    cross_sum(s, s, t)
}

/// `Phi_t(S, T) = sum_{jk} w_j w'_k |<psi_j|phi_k>|^{2t}`
pub fn cross_frame_potential(s: &WeightedStateSet, u: &WeightedStateSet, t: f64) -> Result<f64> {
    if s.dim != u.dim {
        return Err(Error::DimMismatch(format!("state sets of dim {} and {}", s.dim, u.dim)));
    }
    Ok(cross_sum(s, u, t))
}

/// `d^2 / D_t` with `D_t = binom(d + t - 1, t)`.
pub fn design_lower_bound(d: usize, t: u32) -> f64 {
    (d * d) as f64 / binomial((d + t as usize - 1) as u64, t as u64) as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignCheck {
    pub is_design: bool,
    pub potential: f64,
    pub lower_bound: f64,
    /// `Phi_t - d^2/D_t`
    pub residual: f64,
}

pub fn is_t_design(s: &WeightedStateSet, t: u32) -> DesignCheck {
    let potential = frame_potential(s, t as f64);
    let lower_bound = design_lower_bound(s.dim, t);
    let residual = potential - lower_bound;
    DesignCheck { is_design: residual <= TOL.design, potential, lower_bound, residual }
}

/// Frame potential of Haar-random pure states, `d^2 Γ(d) Γ(t+1) / Γ(d+t)`.
pub fn haar_frame_potential(d: usize, t: f64) -> f64 {
    let d2 = (d * d) as f64;
    if twice_if_half_integer(t).is_some() {
        // Γ(d+t)/Γ(t+1) = prod_{k=1}^{d-1} (t+k)
        let mut ratio = 1.0;
        for k in 1..d {
            ratio *= k as f64 / (t + k as f64);
        }
        d2 * ratio
    } else {
        d2 * (ln_gamma(d as f64) + ln_gamma(t + 1.0) - ln_gamma(d as f64 + t)).exp()
    }
}

/// `1 + (d-1) sqrt(d+1)`, the largest `Phi_{1/2}` of a 1-design.
pub fn phi_half_upper_bound(d: usize) -> f64 {
    1.0 + (d as f64 - 1.0) * (d as f64 + 1.0).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Saturation {
    Lower,
    Upper,
    Interior,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhiHalfReport {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub within_bounds: bool,
    pub saturation: Saturation,
    /// Equivalent to an orthonormal basis with unit weights.
    pub is_basis: bool,
    pub is_sic: bool,
    /// Lower saturation iff basis, upper saturation iff SIC.
    pub structure_matches: bool,
    /// `upper - value`; zero (within tolerance) marks a 1/2-design.
    pub half_design_residual: f64,
}

pub fn phi_half_bounds_check(s: &WeightedStateSet) -> Result<PhiHalfReport> {
    let residual = s.one_design_residual();
    if residual > TOL.design {
        return Err(Error::NotOneDesign(residual));
    }
    let d = s.dim;
    let value = frame_potential(s, 0.5);
    let lower = d as f64;
    let upper = phi_half_upper_bound(d);
    let tol = TOL.saturation;
    let within_bounds = value >= lower - tol && value <= upper + tol;
    let saturation = if (value - lower).abs() <= tol {
        Saturation::Lower
    } else if (value - upper).abs() <= tol {
        Saturation::Upper
    } else {
        Saturation::Interior
    };
    let simple = design_to_povm(s)?.simplify();
    let is_basis = simple.len() == d && simple.is_rank1() && simple.is_projective();
    let is_sic = simple.len() == d * d && simple.is_rank1() && simple.is_unbiased() && simple.is_equiangular();
    let structure_matches =
        (saturation == Saturation::Lower) == is_basis && (saturation == Saturation::Upper) == is_sic;
    Ok(PhiHalfReport {
        value,
        lower,
        upper,
        within_bounds,
        saturation,
        is_basis,
        is_sic,
        structure_matches,
        half_design_residual: upper - value,
    })
}

/// Largest `Phi_{1/2}` of `m` equiangular states forming a 1-design:
/// `d^2/m + (d/m) sqrt(d(m-1)(m-d))`.
pub fn equiangular_bound(d: usize, m: usize) -> Result<f64> {
    if m < d {
        return Err(Error::BadCount(format!("m = {m} < d = {d}")));
    }
    let (df, mf) = (d as f64, m as f64);
    Ok(df * df / mf + df / mf * (df * (mf - 1.0) * (mf - df)).sqrt())
}

/// `zeta(a, b)` for `0 < b <= a < 1`, evaluated in the form whose
/// denominator `(sqrt(1-a) + sqrt(a-b))^2` stays positive.
pub fn zeta(a: f64, b: f64) -> Result<f64> {
    if !(0.0 < b && b <= a && a < 1.0) {
        return Err(Error::DomainError(format!("zeta needs 0 < b <= a < 1, got a = {a}, b = {b}")));
    }
    let r = ((1.0 - a) * (a - b)).sqrt();
    let den = ((1.0 - a).sqrt() + (a - b).sqrt()).powi(2);
    Ok((2.0 * a - a * a - b + (1.0 + a) * r) / den)
}

/// Finite distribution `{p_j}` over values `x_j` in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentEnsemble {
    probabilities: Vec<f64>,
    values: Vec<f64>,
}

impl MomentEnsemble {
    pub fn new(probabilities: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if probabilities.len() != values.len() || probabilities.is_empty() {
            return Err(Error::DimMismatch(format!(
                "{} probabilities, {} values",
                probabilities.len(),
                values.len()
            )));
        }
        if probabilities.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::DomainError("probabilities must be nonnegative".into()));
        }
        if values.iter().any(|&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::DomainError("values must lie in [0, 1]".into()));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::DomainError(format!("probabilities sum to {total}")));
        }
        Ok(Self { probabilities, values })
    }

    /// The two-point ensemble on `{0, b/a}` that attains the lower bound.
    pub fn lower_extremal(a: f64, b: f64) -> Result<Self> {
        check_feasible(a, b)?;
        let q = a * a / b;
        Self::new(vec![1.0 - q, q], vec![0.0, b / a])
    }

    /// The two-point ensemble on `{(a-b)/(1-a), 1}` that attains `zeta(a, b)`.
    pub fn upper_extremal(a: f64, b: f64) -> Result<Self> {
        check_feasible(a, b)?;
        let den = 1.0 - 2.0 * a + b;
        let p_low = (1.0 - a).powi(2) / den;
        Self::new(vec![p_low, 1.0 - p_low], vec![(a - b) / (1.0 - a), 1.0])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn moment(&self, k: i32) -> f64 {
        self.probabilities.iter().zip(&self.values).map(|(p, x)| p * x.powi(k)).sum()
    }

    pub fn half_moment(&self) -> f64 {
        self.probabilities.iter().zip(&self.values).map(|(p, x)| p * x.sqrt()).sum()
    }
}

fn check_feasible(a: f64, b: f64) -> Result<()> {
    if !(0.0 < a * a && a * a <= b * (1.0 + 1e-12) && b <= a && a < 1.0) {
        return Err(Error::DomainError(format!("moments a = {a}, b = {b} are not feasible")));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfMomentBounds {
    pub a: f64,
    pub b: f64,
    pub lower: f64,
    pub value: f64,
    pub upper: f64,
}

impl HalfMomentBounds {
    pub fn holds(&self, tol: f64) -> bool {
        self.lower <= self.value + tol && self.value <= self.upper + tol
    }
}

/// `(a sqrt(a/b), sum_j p_j sqrt(x_j), zeta(a, b))` for the ensemble's first two moments.
pub fn half_moment_bounds(e: &MomentEnsemble) -> Result<HalfMomentBounds> {
    let a = e.moment(1);
    let b = e.moment(2);
    if b <= 0.0 {
        return Err(Error::DegenerateMoments);
    }
    // round-off can push b a hair above a
    let b_eff = b.min(a);
    let upper = zeta(a, b_eff)?;
    Ok(HalfMomentBounds { a, b, lower: a * (a / b).sqrt(), value: e.half_moment(), upper })
}

fn povm_cross(p: &Povm, q: &Povm, t: f64) -> f64 {
    // fractional powers of tr(AB) ~ 1e-17 amplify round-off; for rank-1
    // elements take |<psi|phi>| from the kets instead
    if t.fract() != 0.0 && p.is_rank1() && q.is_rank1() {
        if let (Ok(s), Ok(u)) = (povm_to_design(p), povm_to_design(q)) {
            return cross_sum(&s, &u, t);
        }
    }
    let tp = p.traces();
    let tq = q.traces();
    let mut acc = 0.0;
    for (a, ta) in p.elements().iter().zip(&tp) {
        for (b, tb) in q.elements().iter().zip(&tq) {
            let overlap = a.trace_product(b).re;
            acc += real_power(overlap, t) / real_power(ta * tb, t - 1.0).max(f64::MIN_POSITIVE);
        }
    }
    acc
}

/// `sum_{jk} [tr(A_j A_k)]^t / [tr(A_j) tr(A_k)]^{t-1}`
pub fn povm_frame_potential(p: &Povm, t: f64) -> f64 {
    povm_cross(p, p, t)
}

pub fn povm_cross_frame_potential(p: &Povm, q: &Povm, t: f64) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch(format!("POVMs of dim {} and {}", p.dim(), q.dim())));
    }
    Ok(povm_cross(p, q, t))
}

/// Rank-1 POVM `{w_j |psi_j><psi_j|}` to its weighted state set. Kets are
/// phase-fixed so that their largest component is real and positive.
pub fn povm_to_design(p: &Povm) -> Result<WeightedStateSet> {
    let mut states = Vec::with_capacity(p.len());
    let mut weights = Vec::with_capacity(p.len());
    for a in p.elements() {
        let eig = hermitian_eigen(a)?;
        let rank = eig.values.iter().filter(|&&x| x > TOL.rank).count();
        if rank != 1 {
            return Err(Error::NotRank1(rank));
        }
        let v = eig.vector(0);
        let pivot = v.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap();
        let phase = pivot.conj() / pivot.norm();
        states.push(normalized(&v.iter().map(|x| x * phase).collect::<Ket>()));
        weights.push(a.trace().re);
    }
    let total: f64 = weights.iter().sum();
    let fix = p.dim() as f64 / total;
    weights.iter_mut().for_each(|w| *w *= fix);
    WeightedStateSet::new(p.dim(), states, weights)
}

/// `{w_j |psi_j><psi_j|}`; fails unless the set is a 1-design.
pub fn design_to_povm(s: &WeightedStateSet) -> Result<Povm> {
    let elements = s.states.iter().zip(&s.weights).map(|(psi, &w)| ComplexMatrix::projector(psi).scale_real(w)).collect();
    Povm::from_elements(s.dim, elements)
}

/// Random weighted 1-design with `m` states: random kets and weights are
/// pushed through `S^{-1/2}` so that the frame operator is exactly `1`.
pub fn random_one_design(rng: &mut impl Rng, d: usize, m: usize) -> Result<WeightedStateSet> {
    if m < d {
        return Err(Error::BadCount(format!("a 1-design in dim {d} needs at least {d} states, got {m}")));
    }
    loop {
        let kets: Vec<Ket> = (0..m).map(|_| random_ket(rng, d)).collect();
        let raw: Vec<f64> = (0..m).map(|_| 0.2 + rng.random::<f64>()).collect();
        let mut s = ComplexMatrix::zeros(d);
        for (psi, &w) in kets.iter().zip(&raw) {
            s += &ComplexMatrix::projector(psi).scale_real(w);
        }
        let Ok(root) = inverse_sqrt(&s) else { continue };
        let mut states = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for (psi, &w) in kets.iter().zip(&raw) {
            let v = root.apply(psi);
            let n = ket_norm(&v);
            states.push(v.iter().map(|x| x / n).collect());
            weights.push(w * n * n);
        }
        // the weights already sum to d up to round-off; pin it exactly
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w *= d as f64 / total);
        return WeightedStateSet::new(d, states, weights);
    }
}

/// Amplitudes helper for literal kets.
pub fn ket(amplitudes: &[(f64, f64)]) -> Ket {
    amplitudes.iter().map(|&(re, im)| C64::new(re, im)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::basis_ket;
    use crate::linalg::random::seeded;

    fn basis(d: usize) -> WeightedStateSet {
        WeightedStateSet::new(d, (0..d).map(|j| basis_ket(d, j)).collect(), vec![1.0; d]).unwrap()
    }

    #[test]
    fn basis_potentials() {
        for t in [0.5, 1.0, 2.0, 3.7] {
            assert!((frame_potential(&basis(4), t) - 4.0).abs() < 1e-14);
        }
        assert!(is_t_design(&basis(3), 1).is_design);
        assert!(!is_t_design(&basis(3), 2).is_design);
    }

    #[test]
    fn haar_values() {
        assert!((haar_frame_potential(2, 0.5) - 8.0 / 3.0).abs() < 1e-14);
        assert!((haar_frame_potential(2, 2.0) - 4.0 / 3.0).abs() < 1e-14);
        assert!((haar_frame_potential(3, 0.5) - 4.8).abs() < 1e-14);
        for d in 2..6 {
            for t in 1..5 {
                assert!((haar_frame_potential(d, t as f64) - design_lower_bound(d, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lanczos_branch_matches_product() {
        // the product form is exact for any real t
        for d in 2..7 {
            for &t in &[0.3, 0.77, 1.25, 2.9] {
                let prod: f64 = (1..d).map(|k| k as f64 / (t + k as f64)).product();
                let exact = (d * d) as f64 * prod;
                let v = haar_frame_potential(d, t);
                assert!((v - exact).abs() <= 1e-12 * exact, "d={d} t={t}: {v} vs {exact}");
            }
        }
    }

    #[test]
    fn equiangular_bound_values() {
        for d in 2..7 {
            assert!((equiangular_bound(d, d).unwrap() - d as f64).abs() < 1e-12);
            assert!((equiangular_bound(d, d * d).unwrap() - phi_half_upper_bound(d)).abs() < 1e-12);
            let mut prev = 0.0;
            for m in d..=d * d {
                let v = equiangular_bound(d, m).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
        assert!(matches!(equiangular_bound(3, 2), Err(Error::BadCount(_))));
    }

    #[test]
    fn zeta_special_cases() {
        for &a in &[0.1, 0.37, 0.5, 0.93] {
            assert!((zeta(a, a).unwrap() - a).abs() < 1e-14);
            assert!((zeta(a, a * a).unwrap() - a.sqrt()).abs() < 1e-14);
        }
        let d = 3.0;
        assert!((zeta(1.0 / d, 2.0 / (d * (d + 1.0))).unwrap() - 5.0 / 9.0).abs() < 1e-14);
        assert!(zeta(0.5, 0.6).is_err());
        assert!(zeta(1.0, 0.5).is_err());
        assert!(zeta(0.5, 0.0).is_err());
    }

    #[test]
    fn zeta_first_form_agrees() {
        for &(a, b) in &[(0.3f64, 0.1f64), (0.6, 0.4), (0.2, 0.05)] {
            let first = (b - a * a + (1.0 - a) * ((1.0 - a) * (a - b)).sqrt()) / (1.0 - 2.0 * a + b);
            assert!((zeta(a, b).unwrap() - first).abs() < 1e-14);
        }
    }

    #[test]
    fn extremal_ensembles_saturate() {
        for &(a, b) in &[(0.3, 0.1), (0.5, 0.3), (0.25, 0.0625)] {
            let lo = half_moment_bounds(&MomentEnsemble::lower_extremal(a, b).unwrap()).unwrap();
            assert!((lo.value - lo.lower).abs() < 1e-13);
            let hi = half_moment_bounds(&MomentEnsemble::upper_extremal(a, b).unwrap()).unwrap();
            assert!((hi.value - hi.upper).abs() < 1e-13);
        }
    }

    #[test]
    fn degenerate_moments() {
        let e = MomentEnsemble::new(vec![1.0], vec![0.0]).unwrap();
        assert_eq!(half_moment_bounds(&e), Err(Error::DegenerateMoments));
        let e = MomentEnsemble::new(vec![1.0], vec![1.0]).unwrap();
        assert!(matches!(half_moment_bounds(&e), Err(Error::DomainError(_))));
    }

    #[test]
    fn random_one_design_is_exact() {
        let mut rng = seeded(11);
        for d in 2..5 {
            let s = random_one_design(&mut rng, d, d + 3).unwrap();
            assert!(s.one_design_residual() < 1e-12);
            let p = design_to_povm(&s).unwrap();
            let back = povm_to_design(&p).unwrap();
            let q = design_to_povm(&back).unwrap();
            assert!(p.is_equivalent(&q));
        }
    }

    #[test]
    fn not_one_design_is_rejected() {
        let s = WeightedStateSet::new(2, vec![basis_ket(2, 0)], vec![2.0]).unwrap();
        assert!(matches!(phi_half_bounds_check(&s), Err(Error::NotOneDesign(_))));
    }
}
