//! Closed-form fidelities of binary qubit POVMs and the minimum entropy sum
//! of two qubit projective measurements.

use std::f64::consts::PI;

use crate::builders::qubit_binary_povm;
use crate::error::{Error, Result};
use crate::povm::Povm;

/// `A_± = (1 ± alpha ± a.sigma) / 2`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitBinaryPovm {
    alpha: f64,
    a: [f64; 3],
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn combo(s: f64, a: [f64; 3], t: f64, b: [f64; 3]) -> f64 {
    norm3([s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]])
}

impl QubitBinaryPovm {
    pub fn new(alpha: f64, a: [f64; 3]) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || norm3(a) > 1.0 - alpha + 1e-12 {
            return Err(Error::DomainError(format!(
                "need 0 <= alpha < 1 and |a| <= 1 - alpha, got alpha = {alpha}, |a| = {}",
                norm3(a)
            )));
        }
        Ok(Self { alpha, a })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn a(&self) -> [f64; 3] {
        self.a
    }

    pub fn sharpness(&self) -> f64 {
        norm3(self.a)
    }

    pub fn to_povm(&self) -> Povm {
        qubit_binary_povm(self.alpha, self.a).expect("parameters were validated")
    }
}

/// `(3 + |a|) / 6`
pub fn fid1(p: &QubitBinaryPovm) -> f64 {
    (3.0 + p.sharpness()) / 6.0
}

/// `(3 + |a| + alpha |a|) / 6`
pub fn fid2_iid(p: &QubitBinaryPovm) -> f64 {
    (3.0 + p.sharpness() + p.alpha * p.sharpness()) / 6.0
}

/// Two-copy fidelity equals the one-copy fidelity (unbiased or trivial POVM).
pub fn fid2_iid_equals_fid1(p: &QubitBinaryPovm) -> bool {
    p.alpha == 0.0 || p.sharpness() == 0.0
}

/// `F(A ⊗ B)` from the four norms `|(1 ± beta) a ± (1 ± alpha) b|`.
pub fn fid2_pair(p: &QubitBinaryPovm, q: &QubitBinaryPovm) -> f64 {
    let (al, be, a, b) = (p.alpha, q.alpha, p.a, q.a);
    let sum = combo(1.0 + be, a, 1.0 + al, b)
        + combo(1.0 - be, a, -(1.0 + al), b)
        + combo(1.0 + be, a, -(1.0 - al), b)
        + combo(1.0 - be, a, 1.0 - al, b);
    0.5 + sum / 24.0
}

/// Two rank-1 projective qubit measurements at Bloch angle `phi`.
pub fn rank1_pair_fidelity(phi: f64) -> f64 {
    (3.0 + (1.0 + phi.sin().abs()).sqrt()) / 6.0
}

/// Joint measurability of two unbiased binary qubit POVMs: `|a+b| + |a-b| <= 2`.
pub fn qubit_compatible(p: &QubitBinaryPovm, q: &QubitBinaryPovm) -> Result<bool> {
    if p.alpha != 0.0 || q.alpha != 0.0 {
        return Err(Error::BiasedInput(p.alpha, q.alpha));
    }
    Ok(combo(1.0, p.a, 1.0, q.a) + combo(1.0, p.a, -1.0, q.a) <= 2.0 + 1e-12)
}

/// Binary Shannon entropy in bits, with `h(0) = h(1) = 0`.
pub fn h_bin(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

fn entropy_sum(theta: f64, phi: f64) -> f64 {
    let p = (1.0 + theta.cos()) / 2.0;
    let q = (1.0 + (theta - phi).cos()) / 2.0;
    h_bin(p) + h_bin(q)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropicCurvePoint {
    pub phi: f64,
    pub h_mes: f64,
    /// Minimizing `theta`, reduced modulo `pi` (the objective has period `pi`).
    pub theta_argmin: f64,
}

pub const MES_GRID: usize = 10_000;

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Minimum entropy sum over `theta in [0, 2pi)`: dense grid, then golden-section refinement.
pub fn h_mes(phi: f64) -> EntropicCurvePoint {
    let step = 2.0 * PI / MES_GRID as f64;
    let (best_i, best_v) = (0..MES_GRID)
        .map(|i| (i, entropy_sum(i as f64 * step, phi)))
        .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
    let center = best_i as f64 * step;
    let theta = golden_section(|t| entropy_sum(t, phi), center - step, center + step, 1e-10);
    let (theta, value) = {
        let v = entropy_sum(theta, phi);
        if v < best_v {
            (theta, v)
        } else {
            (center, best_v)
        }
    };
    let mut reduced = theta.rem_euclid(PI);
    if PI - reduced < 1e-9 {
        reduced = 0.0;
    }
    EntropicCurvePoint { phi, h_mes: value.max(0.0), theta_argmin: reduced }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityEntropyPoint {
    pub phi: f64,
    pub fidelity: f64,
    pub h_mes: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityEntropyCurve {
    pub points: Vec<FidelityEntropyPoint>,
    /// Both coordinates are non-decreasing along the sample.
    pub monotone: bool,
}

/// Samples `phi` uniformly on `[0, pi/2]` and pairs the two-copy fidelity with `H_mes`.
pub fn fidelity_vs_entropy_curve(n_points: usize) -> Result<FidelityEntropyCurve> {
    if n_points < 2 {
        return Err(Error::BadCount(format!("need at least 2 points, got {n_points}")));
    }
    use rayon::prelude::*;
    let points: Vec<FidelityEntropyPoint> = (0..n_points)
        .into_par_iter()
        .map(|i| {
            let phi = PI / 2.0 * i as f64 / (n_points - 1) as f64;
            FidelityEntropyPoint { phi, fidelity: rank1_pair_fidelity(phi), h_mes: h_mes(phi).h_mes }
        })
        .collect();
    let monotone = points
        .windows(2)
        .all(|w| w[1].fidelity >= w[0].fidelity - 1e-12 && w[1].h_mes >= w[0].h_mes - 1e-12);
    Ok(FidelityEntropyCurve { points, monotone })
}
