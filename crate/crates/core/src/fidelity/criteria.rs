//! Bound checks, the incompatibility witness, family sums, and
//! classification by extremal one- and two-copy fidelities.

use std::fmt;

use serde::Serialize;

use crate::designs::povm_cross_frame_potential;
use crate::error::Result;
use crate::fidelity::{estimation_fidelity, FidelityConstants};
use crate::povm::{commute, Povm};
use crate::tolerances::TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub kind: BoundKind,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
    pub saturated: bool,
}

impl BoundCheck {
    fn new(name: &'static str, kind: BoundKind, value: f64, bound: f64) -> Self {
        let tol = TOL.saturation;
        let holds = match kind {
            BoundKind::Upper => value <= bound + tol,
            BoundKind::Lower => value >= bound - tol,
        };
        Self { name, kind, value, bound, holds, saturated: (value - bound).abs() <= tol }
    }
}

fn fid(povms: &[&Povm]) -> Result<f64> {
    Ok(estimation_fidelity(povms)?.value)
}

/// `(2d(d+1) + 2 Phi_{1/2}) / (d(d+1)(d+2))`
pub fn cross_potential_bound(d: usize, phi_half: f64) -> f64 {
    let df = d as f64;
    (2.0 * df * (df + 1.0) + 2.0 * phi_half) / (df * (df + 1.0) * (df + 2.0))
}

#[derive(Debug, Clone)]
pub struct FidelityBoundReport {
    pub constants: FidelityConstants,
    pub f_p: f64,
    pub f_q: f64,
    pub f_pq: f64,
    pub f_pp: f64,
    pub f_qq: f64,
    pub phi_half_pq: f64,
    pub phi_half_pp: f64,
    pub phi_half_qq: f64,
    pub commute: bool,
    pub checks: Vec<BoundCheck>,
    /// Saturation of each cross-potential bound agrees with both factors being rank-1.
    pub potential_saturation_consistent: bool,
}

impl FidelityBoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

pub fn fidelity_bound_report(p: &Povm, q: &Povm) -> Result<FidelityBoundReport> {
    let d = p.dim();
    let k = FidelityConstants::new(d);
    let f_p = fid(&[p])?;
    let f_q = fid(&[q])?;
    let f_pq = fid(&[p, q])?;
    let f_pp = fid(&[p, p])?;
    let f_qq = fid(&[q, q])?;
    let phi_half_pq = povm_cross_frame_potential(p, q, 0.5)?;
    let phi_half_pp = povm_cross_frame_potential(p, p, 0.5)?;
    let phi_half_qq = povm_cross_frame_potential(q, q, 0.5)?;
    let commute = commute(p, q);

    let mut checks = vec![
        BoundCheck::new("one-copy F(A) <= 2/(d+1)", BoundKind::Upper, f_p, k.f1),
        BoundCheck::new("one-copy F(B) <= 2/(d+1)", BoundKind::Upper, f_q, k.f1),
        BoundCheck::new("F(AxB) <= cross potential bound", BoundKind::Upper, f_pq, cross_potential_bound(d, phi_half_pq)),
        BoundCheck::new("F(AxA) <= potential bound", BoundKind::Upper, f_pp, cross_potential_bound(d, phi_half_pp)),
        BoundCheck::new("F(BxB) <= potential bound", BoundKind::Upper, f_qq, cross_potential_bound(d, phi_half_qq)),
        BoundCheck::new("F(AxA) <= F2_iid", BoundKind::Upper, f_pp, k.f2_iid),
        BoundCheck::new("F(BxB) <= F2_iid", BoundKind::Upper, f_qq, k.f2_iid),
        BoundCheck::new("F(AxB) <= F2_sep", BoundKind::Upper, f_pq, k.f2_sep),
        BoundCheck::new("F(AxB) >= max(F(A), F(B))", BoundKind::Lower, f_pq, f_p.max(f_q)),
    ];
    if commute {
        checks.push(BoundCheck::new("commuting: F(AxB) <= 2/(d+1)", BoundKind::Upper, f_pq, k.f1));
    }
    let (r1p, r1q) = (p.is_rank1(), q.is_rank1());
    if r1p {
        checks.push(BoundCheck::new("rank-1 A: F(AxB) >= 2/(d+1)", BoundKind::Lower, f_pq, k.f1));
    }
    if r1q {
        checks.push(BoundCheck::new("rank-1 B: F(AxB) >= 2/(d+1)", BoundKind::Lower, f_pq, k.f1));
    }
    let potential_saturation_consistent =
        checks[2].saturated == (r1p && r1q) && checks[3].saturated == r1p && checks[4].saturated == r1q;

    Ok(FidelityBoundReport {
        constants: k,
        f_p,
        f_q,
        f_pq,
        f_pp,
        f_qq,
        phi_half_pq,
        phi_half_pp,
        phi_half_qq,
        commute,
        checks,
        potential_saturation_consistent,
    })
}

/// Outcome of the two-copy incompatibility test. There is deliberately no
/// "compatible" verdict: the criterion is only sufficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Incompatible,
    Noncommuting,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Incompatible => "INCOMPATIBLE",
            Verdict::Noncommuting => "NONCOMMUTING",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WitnessReport {
    pub verdict: Verdict,
    pub fidelity: f64,
    pub f1: f64,
    pub f2_iid: f64,
}

pub fn incompatibility_witness(p: &Povm, q: &Povm) -> Result<WitnessReport> {
    let k = FidelityConstants::new(p.dim());
    let fidelity = fid(&[p, q])?;
    let verdict = if fidelity > k.f2_iid + TOL.witness {
        Verdict::Incompatible
    } else if fidelity > k.f1 + TOL.witness {
        Verdict::Noncommuting
    } else {
        Verdict::Inconclusive
    };
    Ok(WitnessReport { verdict, fidelity, f1: k.f1, f2_iid: k.f2_iid })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub size: usize,
    /// `sum_{r,s} F(A_r ⊗ A_s)`
    pub full_sum: f64,
    pub full_bound: f64,
    /// `sum_{r != s} F(A_r ⊗ A_s)`
    pub off_diagonal_sum: f64,
    pub off_diagonal_bound: f64,
    pub full_holds: bool,
    pub full_saturated: bool,
    pub off_diagonal_holds: bool,
    pub off_diagonal_saturated: bool,
}

pub fn family_sum_criteria(family: &[Povm]) -> Result<FamilyReport> {
    let g = family.len();
    let d = family.first().map(|p| p.dim()).unwrap_or(1);
    let k = FidelityConstants::new(d);
    let mut full = 0.0;
    let mut off = 0.0;
    for (r, a) in family.iter().enumerate() {
        for (s, b) in family.iter().enumerate() {
            let f = fid(&[a, b])?;
            full += f;
            if r != s {
                off += f;
            }
        }
    }
    let gf = g as f64;
    let full_bound = gf * gf * k.f2_iid;
    let off_bound = gf * (gf - 1.0) * k.f2_sep;
    let tol = TOL.saturation * (gf * gf).max(1.0);
    Ok(FamilyReport {
        size: g,
        full_sum: full,
        full_bound,
        off_diagonal_sum: off,
        off_diagonal_bound: off_bound,
        full_holds: full <= full_bound + tol,
        full_saturated: (full - full_bound).abs() <= tol,
        off_diagonal_holds: off <= off_bound + tol,
        off_diagonal_saturated: (off - off_bound).abs() <= tol,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FidelitySignature {
    Rank1,
    Rank1Projective,
    IdenticalRank1Projective,
    Sic,
    IdenticalSics,
    MuRank1Projective,
    Unclassified,
}

impl fmt::Display for FidelitySignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FidelitySignature::Rank1 => "rank-1",
            FidelitySignature::Rank1Projective => "rank-1 projective",
            FidelitySignature::IdenticalRank1Projective => "identical rank-1 projective",
            FidelitySignature::Sic => "SIC",
            FidelitySignature::IdenticalSics => "identical SICs",
            FidelitySignature::MuRank1Projective => "MU rank-1 projective",
            FidelitySignature::Unclassified => "UNCLASSIFIED",
        })
    }
}

/// Matches the extremal-fidelity signatures of typical measurements. With a
/// second POVM only the pair rows are considered.
pub fn classify_by_fidelity_signature(p: &Povm, q: Option<&Povm>) -> Result<FidelitySignature> {
    let k = FidelityConstants::new(p.dim());
    let eq = |x: f64, y: f64| (x - y).abs() <= TOL.saturation;
    let f_p = fid(&[p])?;
    let f_pp = fid(&[p, p])?;
    let Some(q) = q else {
        return Ok(if eq(f_pp, k.f2_iid) {
            FidelitySignature::Sic
        } else if eq(f_p, k.f1) && eq(f_pp, k.f1) {
            FidelitySignature::Rank1Projective
        } else if eq(f_p, k.f1) {
            FidelitySignature::Rank1
        } else {
            FidelitySignature::Unclassified
        });
    };
    let f_q = fid(&[q])?;
    let f_qq = fid(&[q, q])?;
    let f_pq = fid(&[p, q])?;
    Ok(if eq(f_pp, k.f2_iid) && eq(f_pq, k.f2_iid) {
        FidelitySignature::IdenticalSics
    } else if eq(f_p, k.f1) && eq(f_q, k.f1) && eq(f_pq, k.f1) {
        FidelitySignature::IdenticalRank1Projective
    } else if eq(f_pp, k.f1) && eq(f_qq, k.f1) && eq(f_pq, k.f2_sep) {
        FidelitySignature::MuRank1Projective
    } else {
        FidelitySignature::Unclassified
    })
}
