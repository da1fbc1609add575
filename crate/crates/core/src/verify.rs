//! Seeded verification suites: fidelity bounds on random inputs, closed-form
//! Q-maps against the permutation-sum oracle, and the signature classifier
//! on disguised builder outputs.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::builders::{
    complete_mub, computational_basis, fourier_basis, mub_triple_d4, random_povm, random_rank1_povm, sic_d2_tetrahedron,
    sic_d3, MubTripleParams,
};
use crate::designs::povm_cross_frame_potential;
use crate::error::{Error, Result};
use crate::fidelity::criteria::cross_potential_bound;
use crate::fidelity::{
    classify_by_fidelity_signature, collective_fidelity, estimation_fidelity, estimation_fidelity_with,
    family_sum_criteria, fidelity_with_estimators, optimal_estimators, q_map_1, q_map_2, q_map_3, q_map_general,
    FidelityConstants, FidelityMode, FidelitySignature,
};
use crate::linalg::matrix::ComplexMatrix;
use crate::linalg::random::{random_psd, random_unitary, seeded, SeededRng};
use crate::povm::{commute, Povm, StochasticMatrix};

/// Slack on inequalities and on equalities that hold exactly in theory.
pub const BOUND_TOL: f64 = 1e-9;
pub const ORACLE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Bounds,
    Oracle,
    Table1,
}

impl Suite {
    pub const ALL: [Suite; 3] = [Suite::Bounds, Suite::Oracle, Suite::Table1];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Oracle => "oracle",
            Suite::Table1 => "table1",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest amount by which a trial missed its target (0 when all pass).
    pub max_violation: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<CheckOutcome>,
    pub passed: bool,
}

struct Tally {
    name: String,
    trials: usize,
    failures: usize,
    max_violation: f64,
    first_failure: Option<String>,
}

impl Tally {
    fn new(name: &str) -> Self {
        Self { name: name.into(), trials: 0, failures: 0, max_violation: 0.0, first_failure: None }
    }

    /// `violation <= tol` passes; anything positive is recorded.
    fn record(&mut self, violation: f64, tol: f64, what: impl FnOnce() -> String) {
        self.trials += 1;
        let v = if violation.is_nan() { f64::INFINITY } else { violation.max(0.0) };
        self.max_violation = self.max_violation.max(v);
        if v > tol {
            self.failures += 1;
            self.first_failure.get_or_insert_with(what);
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.record(if ok { 0.0 } else { f64::INFINITY }, 0.0, what);
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            passed: self.failures == 0 && self.trials > 0,
            name: self.name,
            trials: self.trials,
            failures: self.failures,
            max_violation: self.max_violation,
            first_failure: self.first_failure,
        }
    }
}

pub fn run_suite(suite: Suite, seed: u64, trials: usize) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::BadCount("trials must be positive".into()));
    }
    let checks = match suite {
        Suite::Bounds => bounds_suite(seed, trials)?,
        Suite::Oracle => oracle_suite(seed, trials)?,
        Suite::Table1 => table1_suite(seed, trials)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport { suite: suite.name().into(), seed, trials, checks, passed })
}

fn fid(povms: &[&Povm]) -> Result<f64> {
    Ok(estimation_fidelity(povms)?.value)
}

/// One independent stream per check so that adding a check does not shift the others.
fn stream(seed: u64, check: u64) -> SeededRng {
    seeded(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(check))
}

fn dim_for(trial: usize) -> usize {
    2 + trial % 3
}

fn disguise(p: &Povm, u: &ComplexMatrix, rng: &mut SeededRng) -> Povm {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.shuffle(rng);
    p.conjugate(u).permuted(&order)
}

fn random_grain(rng: &mut SeededRng, max_rows: usize, cols: usize) -> StochasticMatrix {
    let rows = rng.random_range(1..=max_rows);
    StochasticMatrix::random(rng, rows, cols)
}

fn basis_in(u: &ComplexMatrix) -> Povm {
    computational_basis(u.dim()).conjugate(u)
}

fn sic(d: usize, rng: &mut SeededRng) -> Option<Povm> {
    match d {
        2 => Some(sic_d2_tetrahedron()),
        3 => Some(sic_d3(rng.random::<f64>() * std::f64::consts::TAU)),
        _ => None,
    }
}

fn bounds_suite(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();

    let mut t = Tally::new("two-copy sandwich 2/(d+1) <= F(AxA) <= F2_iid for rank-1 A");
    let mut rng = stream(seed, 1);
    for i in 0..trials {
        let d = dim_for(i);
        let m = rng.random_range(d..=d * d + 2);
        let p = random_rank1_povm(d, m, rng.random())?;
        let k = FidelityConstants::new(d);
        let f = fid(&[&p, &p])?;
        t.record((k.f1 - f).max(f - k.f2_iid), BOUND_TOL, || format!("d={d} m={m}: F={f}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("cross-potential bound is an equality for rank-1 pairs");
    let mut rng = stream(seed, 2);
    for i in 0..trials {
        let d = dim_for(i);
        let p = random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())?;
        let q = random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())?;
        for (a, b) in [(&p, &q), (&p, &p)] {
            let bound = cross_potential_bound(d, povm_cross_frame_potential(a, b, 0.5)?);
            let f = fid(&[a, b])?;
            t.record((f - bound).abs(), BOUND_TOL, || format!("d={d}: F={f} bound={bound}"));
        }
    }
    out.push(t.finish());

    let mut t = Tally::new("cross-potential bound holds for general pairs");
    let mut rng = stream(seed, 3);
    for i in 0..trials {
        let d = dim_for(i);
        let p = random_povm(d, rng.random_range(2..=d + 3), rng.random())?;
        let q = random_povm(d, rng.random_range(2..=d + 3), rng.random())?;
        let bound = cross_potential_bound(d, povm_cross_frame_potential(&p, &q, 0.5)?);
        let f = fid(&[&p, &q])?;
        t.record(f - bound, BOUND_TOL, || format!("d={d}: F={f} bound={bound}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("separable bound F(AxB) <= F2_sep");
    let mut rng = stream(seed, 4);
    for i in 0..trials {
        let d = dim_for(i);
        let p = if i % 2 == 0 {
            random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())?
        } else {
            random_povm(d, rng.random_range(2..=d + 3), rng.random())?
        };
        let q = random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())?;
        let f = fid(&[&p, &q])?;
        let b = FidelityConstants::new(d).f2_sep;
        t.record(f - b, BOUND_TOL, || format!("d={d}: F={f} F2_sep={b}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("commuting pairs: F(AxB) <= 2/(d+1)");
    let mut rng = stream(seed, 5);
    for i in 0..trials {
        let d = dim_for(i);
        let u = random_unitary(&mut rng, d);
        let basis = basis_in(&u);
        let p = basis.coarse_grain(&random_grain(&mut rng, d + 2, d))?;
        let q = basis.coarse_grain(&random_grain(&mut rng, d + 2, d))?;
        let f = fid(&[&p, &q])?;
        let f1 = FidelityConstants::new(d).f1;
        t.record(f - f1, BOUND_TOL, || format!("d={d}: F={f}"));
        t.check(commute(&p, &q), || format!("d={d}: constructed pair does not commute"));
    }
    out.push(t.finish());

    let mut t = Tally::new("rank-1 A: F(AxB) >= 2/(d+1) with equality iff A and B commute");
    let mut rng = stream(seed, 6);
    for i in 0..trials {
        let d = dim_for(i);
        let f1 = FidelityConstants::new(d).f1;
        let u = random_unitary(&mut rng, d);
        let (p, q) = match i % 3 {
            0 => {
                let basis = basis_in(&u);
                let q = basis.coarse_grain(&random_grain(&mut rng, d + 2, d))?;
                (basis, q)
            }
            1 => (random_rank1_povm(d, rng.random_range(d + 1..=d * d), rng.random())?, Povm::trivial(d)),
            _ => (
                random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())?,
                random_povm(d, rng.random_range(2..=d + 3), rng.random())?,
            ),
        };
        let f = fid(&[&p, &q])?;
        let commuting = commute(&p, &q);
        t.record(f1 - f, BOUND_TOL, || format!("d={d}: F={f} below 2/(d+1)"));
        let saturated = (f - f1).abs() <= BOUND_TOL;
        t.check(saturated == commuting, || format!("d={d} case {}: F-f1={:e}, commute={commuting}", i % 3, f - f1));
    }
    out.push(t.finish());

    let mut t = Tally::new("refinement: F(AxC') <= F(AxC) for coarse grainings C' of rank-1 C");
    let mut rng = stream(seed, 7);
    for i in 0..trials {
        let d = dim_for(i);
        let a = random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())?;
        let c = random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())?;
        let cg = c.coarse_grain(&random_grain(&mut rng, c.len(), c.len()))?;
        let (f, g) = (fid(&[&a, &c])?, fid(&[&a, &cg])?);
        t.record(g - f, 1e-10, || format!("d={d}: coarse {g} > fine {f}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("identical SIC families saturate g^2 F2_iid");
    let mut rng = stream(seed, 8);
    for i in 0..trials {
        let d = 2 + i % 2;
        let g = 1 + i % 4;
        let base = sic(d, &mut rng).expect("SIC available for d = 2, 3");
        let u = random_unitary(&mut rng, d);
        let family: Vec<Povm> = (0..g).map(|_| disguise(&base, &u, &mut rng)).collect();
        let r = family_sum_criteria(&family)?;
        t.record((r.full_sum - r.full_bound).abs(), BOUND_TOL * (g * g) as f64, || {
            format!("d={d} g={g}: sum={} bound={}", r.full_sum, r.full_bound)
        });
    }
    out.push(t.finish());

    let mut t = Tally::new("mutually unbiased families saturate g(g-1) F2_sep");
    let mut rng = stream(seed, 9);
    for i in 0..trials {
        let d = dim_for(i);
        let u = random_unitary(&mut rng, d);
        let base = if d == 4 {
            let mut r = || rng.random::<f64>() * std::f64::consts::PI;
            let (a, b, c) = mub_triple_d4(MubTripleParams::new(r(), r(), r())?);
            vec![a, b, c]
        } else {
            complete_mub(d)?
        };
        let family: Vec<Povm> = base.iter().map(|p| disguise(p, &u, &mut rng)).collect();
        let g = family.len();
        let r = family_sum_criteria(&family)?;
        t.record((r.off_diagonal_sum - r.off_diagonal_bound).abs(), BOUND_TOL * (g * g) as f64, || {
            format!("d={d} g={g}: sum={} bound={}", r.off_diagonal_sum, r.off_diagonal_bound)
        });
    }
    out.push(t.finish());

    let mut t = Tally::new("family sums stay below both bounds for random families");
    let mut rng = stream(seed, 10);
    for i in 0..trials {
        let d = dim_for(i);
        let g = rng.random_range(1..=3);
        let family =
            (0..g).map(|_| random_rank1_povm(d, rng.random_range(d..=d * d), rng.random())).collect::<Result<Vec<_>>>()?;
        let r = family_sum_criteria(&family)?;
        let tol = BOUND_TOL * (g * g) as f64;
        t.record((r.full_sum - r.full_bound).max(r.off_diagonal_sum - r.off_diagonal_bound), tol, || {
            format!("d={d} g={g}: full {} / {}, off {} / {}", r.full_sum, r.full_bound, r.off_diagonal_sum, r.off_diagonal_bound)
        });
    }
    out.push(t.finish());

    Ok(out)
}

fn oracle_suite(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut out = Vec::new();
    for n in 1..=3 {
        let mut t = Tally::new(&format!("closed-form Q-map vs permutation sum, N={n}"));
        let mut rng = stream(seed, 20 + n as u64);
        for d in [2, 3] {
            for _ in 0..trials {
                let ops: Vec<ComplexMatrix> = (0..n)
                    .map(|_| {
                        let rank = rng.random_range(1..=d);
                        random_psd(&mut rng, d, rank)
                    })
                    .collect();
                let closed = match n {
                    1 => q_map_1(&ops[0]),
                    2 => q_map_2(&ops[0], &ops[1]),
                    _ => q_map_3(&ops[0], &ops[1], &ops[2]),
                };
                let oracle = q_map_general(&ops)?;
                let scale = oracle.max_abs().max(1.0);
                let dev = closed.max_abs_diff(&oracle) / scale;
                t.record(dev, ORACLE_TOL, || format!("d={d}: relative deviation {dev:e}"));
            }
        }
        out.push(t.finish());
    }

    let mut t = Tally::new("product fidelity: closed forms vs oracle mode");
    let mut rng = stream(seed, 30);
    for i in 0..trials {
        let d = 2 + i % 2;
        let n = 1 + i % 3;
        let povms =
            (0..n).map(|_| random_povm(d, rng.random_range(2..=d + 1), rng.random())).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Povm> = povms.iter().collect();
        let a = estimation_fidelity_with(&refs, FidelityMode::Auto)?.value;
        let b = estimation_fidelity_with(&refs, FidelityMode::Oracle)?.value;
        t.record((a - b).abs(), ORACLE_TOL, || format!("d={d} N={n}: {a} vs {b}"));
    }
    out.push(t.finish());

    let mut t = Tally::new("optimal estimators reproduce F");
    let mut rng = stream(seed, 31);
    for i in 0..trials {
        let d = 2 + i % 2;
        let n = 1 + i % 2;
        let povms =
            (0..n).map(|_| random_povm(d, rng.random_range(2..=d + 1), rng.random())).collect::<Result<Vec<_>>>()?;
        let refs: Vec<&Povm> = povms.iter().collect();
        let f = estimation_fidelity(&refs)?.value;
        let kets: Vec<_> = optimal_estimators(&refs)?.into_iter().map(|e| e.state).collect();
        let g = fidelity_with_estimators(&refs, &kets)?;
        t.record((f - g).abs(), BOUND_TOL, || format!("d={d} N={n}: {f} vs {g}"));
    }
    out.push(t.finish());

    for n in 1..=3 {
        let d = 2;
        let mut t = Tally::new(&format!("collective sandwich 1/d <= F <= (N+1)/(N+d), N={n}, d={d}"));
        let mut rng = stream(seed, 40 + n as u64);
        let upper = FidelityConstants::new(d).n_copy_ub(n);
        let lower = 1.0 / d as f64;
        let big = d.pow(n as u32);
        for _ in 0..trials {
            let p = random_povm(big, rng.random_range(2..=big + 2), rng.random())?;
            let f = collective_fidelity(&p, d, n)?.value;
            t.record((lower - f).max(f - upper), BOUND_TOL, || format!("F={f}"));
        }
        out.push(t.finish());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy)]
enum Case {
    Basis,
    Sic,
    Rank1,
    IdenticalBases,
    IdenticalSics,
    MuPair,
}

impl Case {
    const ALL: [Case; 6] = [Case::Basis, Case::Sic, Case::Rank1, Case::IdenticalBases, Case::IdenticalSics, Case::MuPair];

    fn expected(self) -> FidelitySignature {
        match self {
            Case::Basis => FidelitySignature::Rank1Projective,
            Case::Sic => FidelitySignature::Sic,
            Case::Rank1 => FidelitySignature::Rank1,
            Case::IdenticalBases => FidelitySignature::IdenticalRank1Projective,
            Case::IdenticalSics => FidelitySignature::IdenticalSics,
            Case::MuPair => FidelitySignature::MuRank1Projective,
        }
    }
}

fn table1_suite(seed: u64, trials: usize) -> Result<Vec<CheckOutcome>> {
    let mut t = Tally::new("signature classifier on disguised builder outputs");
    let mut rng = stream(seed, 50);
    for i in 0..trials {
        let case = Case::ALL[i % Case::ALL.len()];
        let d = match case {
            Case::Sic | Case::IdenticalSics => 2 + (i / Case::ALL.len()) % 2,
            _ => dim_for(i / Case::ALL.len()),
        };
        let u = random_unitary(&mut rng, d);
        let (p, q) = match case {
            Case::Basis => (disguise(&computational_basis(d), &u, &mut rng), None),
            Case::Sic => (disguise(&sic(d, &mut rng).unwrap(), &u, &mut rng), None),
            Case::Rank1 => (random_rank1_povm(d, rng.random_range(d + 1..=d * d + 2), rng.random())?, None),
            Case::IdenticalBases => {
                let b = computational_basis(d);
                (disguise(&b, &u, &mut rng), Some(disguise(&b, &u, &mut rng)))
            }
            Case::IdenticalSics => {
                let s = sic(d, &mut rng).unwrap();
                (disguise(&s, &u, &mut rng), Some(disguise(&s, &u, &mut rng)))
            }
            Case::MuPair => {
                (disguise(&computational_basis(d), &u, &mut rng), Some(disguise(&fourier_basis(d), &u, &mut rng)))
            }
        };
        let got = classify_by_fidelity_signature(&p, q.as_ref())?;
        t.check(got == case.expected(), || format!("d={d} {case:?}: got {got}, expected {}", case.expected()));
    }
    Ok(vec![t.finish()])
}
