//! Parameter scans behind the figure datasets: the d = 4 MUB-triple family,
//! the d = 3 SIC phase, and the dimension/angle curves.
//!
//! Grid points are `(i/n) * range` and rows are sorted lexicographically in
//! the parameters. Exact parameter points that the grid misses are appended
//! and merged into that order.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::builders::{mub_triple_d4, sic_d3, MubTripleParams};
use crate::designs::{haar_frame_potential, phi_half_upper_bound};
use crate::error::{Error, Result};
use crate::fidelity::{estimation_fidelity, FidelityConstants};
use crate::io::{Cell, ScanTable};
use crate::qubit::{h_mes, rank1_pair_fidelity};

pub const MAX_FIGURE_DIM: usize = 16;

/// `F(A ⊗ B ⊗ C)` for the MUB triple with parameters `(x, y, z)`.
pub fn mub_fidelity(x: f64, y: f64, z: f64) -> Result<f64> {
    let (a, b, c) = mub_triple_d4(MubTripleParams::new(x, y, z)?);
    Ok(estimation_fidelity(&[&a, &b, &c])?.value)
}

/// `F(A_sic(phi)^{⊗3})`
pub fn sic_fidelity(phi: f64) -> Result<f64> {
    let s = sic_d3(phi);
    Ok(estimation_fidelity(&[&s, &s, &s])?.value)
}

fn grid(n: usize, range: f64) -> Vec<f64> {
    (0..n).map(|i| i as f64 / n as f64 * range).collect()
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
}

/// Grid points plus any anchors not already on the grid, sorted.
fn with_anchors(mut points: Vec<Vec<f64>>, anchors: &[Vec<f64>]) -> Vec<Vec<f64>> {
    for a in anchors {
        if !points.iter().any(|p| p == a) {
            points.push(a.clone());
        }
    }
    points.sort_by(|a, b| lex_cmp(a, b));
    points
}

pub fn mub4_anchors() -> Vec<Vec<f64>> {
    vec![vec![PI / 2.0, 0.0, 0.0], vec![PI / 2.0, PI / 2.0, PI / 2.0]]
}

/// Columns `x,y,z,fidelity`; `n^3` grid rows over `[0, pi)^3` plus missed anchors.
pub fn scan_mub4(n: usize) -> Result<ScanTable> {
    if n < 2 {
        return Err(Error::BadCount(format!("grid must be at least 2 per axis, got {n}")));
    }
    let g = grid(n, PI);
    let mut points = Vec::with_capacity(n * n * n);
    for &x in &g {
        for &y in &g {
            for &z in &g {
                points.push(vec![x, y, z]);
            }
        }
    }
    let points = with_anchors(points, &mub4_anchors());
    let values = points.par_iter().map(|p| mub_fidelity(p[0], p[1], p[2])).collect::<Result<Vec<_>>>()?;
    let mut table = ScanTable::new(&["x", "y", "z", "fidelity"]);
    for (p, v) in points.iter().zip(values) {
        table.rows.push(vec![Cell::Real(p[0]), Cell::Real(p[1]), Cell::Real(p[2]), Cell::Real(v)]);
    }
    Ok(table)
}

pub const SIC_PERIOD: f64 = 2.0 * PI / 9.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SicScanDiagnostics {
    pub grid: usize,
    pub rows: usize,
    /// `max |F(phi) - F(phi + 2pi/9)|` over the sampled phases.
    pub period_max_deviation: f64,
    /// Smallest forward difference on `[0, pi/9]`.
    pub min_step_rising: f64,
    /// Smallest backward difference on `[pi/9, 2pi/9)`.
    pub min_step_falling: f64,
    pub increasing_then_decreasing: bool,
    pub argmin_phi: f64,
    pub argmax_phi: f64,
    pub min: f64,
    pub max: f64,
}

/// Columns `phi,fidelity` over `[0, 2pi/9)`, with the phase `pi/9` always present.
pub fn scan_sic3(n: usize) -> Result<(ScanTable, SicScanDiagnostics)> {
    if n < 9 {
        return Err(Error::BadCount(format!("grid must have at least 9 points, got {n}")));
    }
    let points: Vec<Vec<f64>> = grid(n, SIC_PERIOD).into_iter().map(|p| vec![p]).collect();
    let phis: Vec<f64> = with_anchors(points, &[vec![PI / 9.0]]).into_iter().map(|p| p[0]).collect();
    let values = phis.par_iter().map(|&p| sic_fidelity(p)).collect::<Result<Vec<_>>>()?;
    let shifted = phis.par_iter().map(|&p| sic_fidelity(p + SIC_PERIOD)).collect::<Result<Vec<_>>>()?;

    let period_max_deviation = values.iter().zip(&shifted).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let peak = phis.iter().position(|&p| p == PI / 9.0).expect("anchor present");
    let min_step_rising = values[..=peak].windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let min_step_falling = values[peak..].windows(2).map(|w| w[0] - w[1]).fold(f64::INFINITY, f64::min);
    let argmin = (0..values.len()).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    let argmax = (0..values.len()).max_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();

    let mut table = ScanTable::new(&["phi", "fidelity"]);
    for (p, v) in phis.iter().zip(&values) {
        table.rows.push(vec![Cell::Real(*p), Cell::Real(*v)]);
    }
    let diag = SicScanDiagnostics {
        grid: n,
        rows: phis.len(),
        period_max_deviation,
        min_step_rising,
        min_step_falling,
        increasing_then_decreasing: min_step_rising > -1e-10 && min_step_falling > -1e-10,
        argmin_phi: phis[argmin],
        argmax_phi: phis[argmax],
        min: values[argmin],
        max: values[argmax],
    };
    Ok((table, diag))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    FpHalf,
    FidIid,
    FidSettings,
    QubitCommutator,
    MesCurve,
}

impl Figure {
    pub const ALL: [Figure; 5] =
        [Figure::FpHalf, Figure::FidIid, Figure::FidSettings, Figure::QubitCommutator, Figure::MesCurve];

    pub fn name(self) -> &'static str {
        match self {
            Figure::FpHalf => "fp_half",
            Figure::FidIid => "fid_iid",
            Figure::FidSettings => "fid_settings",
            Figure::QubitCommutator => "qubit_commutator",
            Figure::MesCurve => "mes_curve",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown figure '{s}'")))
    }
}

/// `Phi_{1/2}` of a complete set of MUBs with uniform weights.
pub fn cmub_phi_half(d: usize) -> f64 {
    let df = d as f64;
    (df + df.powf(2.5)) / (df + 1.0)
}

/// Two-copy fidelity of a rank-1 POVM with potential `Phi_{1/2}`.
fn rank1_f2(d: usize, phi_half: f64) -> f64 {
    crate::fidelity::criteria::cross_potential_bound(d, phi_half)
}

/// Figure datasets. Dimension curves run over `d = 2..=dmax`; angle curves
/// sample `phi` on `[0, pi/2]` with `points` rows.
pub fn scan_figure(which: Figure, dmax: usize, points: usize) -> Result<ScanTable> {
    if !(2..=MAX_FIGURE_DIM).contains(&dmax) {
        return Err(Error::TooLarge(format!("dmax must be in 2..={MAX_FIGURE_DIM}, got {dmax}")));
    }
    if points < 2 {
        return Err(Error::BadCount(format!("need at least 2 points, got {points}")));
    }
    let dims = 2..=dmax;
    let phis = || (0..points).map(move |i| PI / 2.0 * i as f64 / (points - 1) as f64);
    let table = match which {
        Figure::FpHalf => {
            let mut t = ScanTable::new(&["d", "basis", "sic", "cmub", "haar"]);
            for d in dims {
                t.rows.push(vec![
                    Cell::Int(d as i64),
                    Cell::Real(d as f64),
                    Cell::Real(phi_half_upper_bound(d)),
                    Cell::Real(cmub_phi_half(d)),
                    Cell::Real(haar_frame_potential(d, 0.5)),
                ]);
            }
            t
        }
        Figure::FidIid => {
            let mut t = ScanTable::new(&["d", "projective", "sic", "cmub", "isotropic"]);
            for d in dims {
                let f1 = FidelityConstants::new(d).f1;
                t.rows.push(vec![
                    Cell::Int(d as i64),
                    Cell::Real(rank1_f2(d, d as f64) - f1),
                    Cell::Real(rank1_f2(d, phi_half_upper_bound(d)) - f1),
                    Cell::Real(rank1_f2(d, cmub_phi_half(d)) - f1),
                    Cell::Real(rank1_f2(d, haar_frame_potential(d, 0.5)) - f1),
                ]);
            }
            t
        }
        Figure::FidSettings => {
            let mut t = ScanTable::new(&["d", "collective", "product_mub", "iid_sic", "iid_projective"]);
            for d in dims {
                let k = FidelityConstants::new(d);
                t.rows.push(vec![
                    Cell::Int(d as i64),
                    Cell::Real(k.n_copy_ub(2)),
                    Cell::Real(k.f2_sep),
                    Cell::Real(k.f2_iid),
                    Cell::Real(k.f1),
                ]);
            }
            t
        }
        Figure::QubitCommutator => {
            let mut t = ScanTable::new(&["phi", "commutator_norm", "fidelity"]);
            for phi in phis() {
                t.rows.push(vec![Cell::Real(phi), Cell::Real(phi.sin().abs()), Cell::Real(rank1_pair_fidelity(phi))]);
            }
            t
        }
        Figure::MesCurve => {
            let rows: Vec<Vec<Cell>> = phis()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&phi| {
                    vec![Cell::Real(phi), Cell::Real(rank1_pair_fidelity(phi)), Cell::Real(h_mes(phi).h_mes)]
                })
                .collect();
            ScanTable { header: vec!["phi".into(), "fidelity".into(), "h_mes".into()], rows }
        }
    };
    Ok(table)
}
