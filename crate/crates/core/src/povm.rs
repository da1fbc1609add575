//! POVMs, the coarse-graining order, and the structural predicates
//! (rank-1, projective, unbiased, equiangular, mutually unbiased, commuting,
//! reducible).

use crate::error::{Error, Result};
use crate::linalg::eigen::hermitian_eigen;
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::tolerances::TOL;

/// Outcome of checking a list of operators against the POVM axioms.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    pub dim: usize,
    /// Largest `|M - M^†|` entry over all elements.
    pub hermitian_defect: f64,
    /// Smallest eigenvalue over all elements (negative means not PSD).
    pub psd_margin: f64,
    /// `max |sum_j A_j - 1|`
    pub completeness_residual: f64,
    /// Indices of elements whose norm does not exceed the zero threshold.
    pub zero_elements: Vec<usize>,
    pub problems: Vec<String>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }
}

/// Checks PSD-ness, completeness and zero elements of a candidate POVM.
pub fn validate(dim: usize, elements: &[ComplexMatrix]) -> ValidityReport {
    let mut report = ValidityReport {
        dim,
        hermitian_defect: 0.0,
        psd_margin: f64::INFINITY,
        completeness_residual: 0.0,
        zero_elements: Vec::new(),
        problems: Vec::new(),
    };
    if elements.is_empty() {
        report.problems.push("no elements".into());
        return report;
    }
    let mut sum = ComplexMatrix::zeros(dim);
    for (j, a) in elements.iter().enumerate() {
        if a.dim() != dim {
            report.problems.push(format!("element {j} has dim {} (expected {dim})", a.dim()));
            continue;
        }
        let defect = a.hermitian_defect();
        report.hermitian_defect = report.hermitian_defect.max(defect);
        if defect > TOL.hermitian {
            report.problems.push(format!("element {j} is not Hermitian (defect {defect:.3e})"));
            continue;
        }
        match hermitian_eigen(a) {
            Ok(eig) => {
                let lo = *eig.values.last().unwrap();
                report.psd_margin = report.psd_margin.min(lo);
                if lo < -TOL.psd {
                    report.problems.push(format!("element {j} is not PSD (min eigenvalue {lo:.3e})"));
                }
                if eig.values[0] <= TOL.zero_element {
                    report.zero_elements.push(j);
                }
            }
            Err(e) => report.problems.push(format!("element {j}: {e}")),
        }
        sum += a;
    }
    if report.problems.is_empty() {
        report.completeness_residual = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if report.completeness_residual > TOL.completeness {
            report
                .problems
                .push(format!("elements do not sum to the identity (residual {:.3e})", report.completeness_residual));
        }
    }
    report
}

/// A positive operator-valued measure on a `dim`-dimensional space.
///
/// Zero elements are dropped on construction; [`Povm::dropped_zero`] reports
/// how many were removed.
#[derive(Debug, Clone)]
pub struct Povm {
    dim: usize,
    elements: Vec<ComplexMatrix>,
    labels: Vec<String>,
    dropped_zero: usize,
}

impl Povm {
    pub fn new(dim: usize, elements: Vec<ComplexMatrix>, labels: Option<Vec<String>>) -> Result<Self> {
        let labels = match labels {
            Some(l) if l.len() != elements.len() => {
                return Err(Error::InvalidPovm(format!("{} labels for {} elements", l.len(), elements.len())))
            }
            Some(l) => l,
            None => (0..elements.len()).map(|j| j.to_string()).collect(),
        };
        let report = validate(dim, &elements);
        if !report.is_valid() {
            return Err(Error::InvalidPovm(report.problems.join("; ")));
        }
        let dropped_zero = report.zero_elements.len();
        let (elements, labels): (Vec<_>, Vec<_>) = elements
            .into_iter()
            .zip(labels)
            .enumerate()
            .filter(|(j, _)| !report.zero_elements.contains(j))
            .map(|(_, pair)| pair)
            .unzip();
        if elements.is_empty() {
            return Err(Error::InvalidPovm("all elements are zero".into()));
        }
        Ok(Self { dim, elements, labels, dropped_zero })
    }

    pub fn from_elements(dim: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(dim, elements, None)
    }

    /// The trivial POVM `{1}`.
    pub fn trivial(dim: usize) -> Self {
        Self { dim, elements: vec![ComplexMatrix::identity(dim)], labels: vec!["1".into()], dropped_zero: 0 }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dropped_zero(&self) -> usize {
        self.dropped_zero
    }

    pub fn traces(&self) -> Vec<f64> {
        self.elements.iter().map(|a| a.trace().re).collect()
    }

    pub fn validity(&self) -> ValidityReport {
        validate(self.dim, &self.elements)
    }

    /// `U A_j U^†` for every element.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Self {
        let ud = u.adjoint();
        let elements = self.elements.iter().map(|a| (&(u * a) * &ud).hermitian_part()).collect();
        Self { dim: self.dim, elements, labels: self.labels.clone(), dropped_zero: 0 }
    }

    /// Reorders elements; `order[k]` is the old index placed at position `k`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            dim: self.dim,
            elements: order.iter().map(|&k| self.elements[k].clone()).collect(),
            labels: order.iter().map(|&k| self.labels[k].clone()).collect(),
            dropped_zero: self.dropped_zero,
        }
    }

    /// Product POVM `{A_j ⊗ B_k}` on the doubled space, `j` outer.
    pub fn tensor(&self, other: &Povm) -> Povm {
        let mut elements = Vec::with_capacity(self.len() * other.len());
        let mut labels = Vec::with_capacity(self.len() * other.len());
        for (a, la) in self.elements.iter().zip(&self.labels) {
            for (b, lb) in other.elements.iter().zip(&other.labels) {
                elements.push(a.kron(b));
                labels.push(format!("{la}|{lb}"));
            }
        }
        Povm { dim: self.dim * other.dim, elements, labels, dropped_zero: 0 }
    }

    /// `sum_j tr(A_j^2) / (d tr A_j)`
    pub fn purity(&self) -> f64 {
        let d = self.dim as f64;
        self.elements.iter().map(|a| a.trace_product(a).re / (d * a.trace().re)).sum()
    }

    /// `A_j = sum_k lambda_jk B_k`; zero outputs are dropped (see [`Povm::dropped_zero`]).
    pub fn coarse_grain(&self, lambda: &StochasticMatrix) -> Result<Povm> {
        if lambda.cols() != self.len() {
            return Err(Error::DimMismatch(format!(
                "stochastic matrix has {} columns for {} elements",
                lambda.cols(),
                self.len()
            )));
        }
        let mut elements = Vec::with_capacity(lambda.rows());
        for j in 0..lambda.rows() {
            let mut acc = ComplexMatrix::zeros(self.dim);
            for (k, b) in self.elements.iter().enumerate() {
                let w = lambda.get(j, k);
                if w != 0.0 {
                    acc += &b.scale_real(w);
                }
            }
            elements.push(acc);
        }
        Povm::new(self.dim, elements, None)
    }

    /// Merges proportional elements into the unique simple POVM of the
    /// equivalence class. Element order follows first occurrence.
    pub fn simplify(&self) -> Povm {
        let mut groups: Vec<(ComplexMatrix, Vec<usize>)> = Vec::new();
        for (k, b) in self.elements.iter().enumerate() {
            match groups.iter_mut().find(|(rep, _)| proportional(rep, b)) {
                Some((sum, members)) => {
                    *sum += b;
                    members.push(k);
                }
                None => groups.push((b.clone(), vec![k])),
            }
        }
        let labels = groups
            .iter()
            .map(|(_, m)| m.iter().map(|&k| self.labels[k].as_str()).collect::<Vec<_>>().join("+"))
            .collect();
        Povm { dim: self.dim, elements: groups.into_iter().map(|(s, _)| s).collect(), labels, dropped_zero: 0 }
    }

    pub fn is_simple(&self) -> bool {
        self.simplify().len() == self.len()
    }

    /// Equivalence under the coarse-graining order: the simple forms agree up to relabeling.
    pub fn is_equivalent(&self, other: &Povm) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let (p, q) = (self.simplify(), other.simplify());
        if p.len() != q.len() {
            return false;
        }
        let mut used = vec![false; q.len()];
        let mut pairs = Vec::with_capacity(p.len());
        for a in &p.elements {
            let best = q
                .elements
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, b)| (k, a.max_abs_diff(b)))
                .min_by(|x, y| x.1.total_cmp(&y.1));
            match best {
                Some((k, dist)) if dist <= TOL.element_match => {
                    used[k] = true;
                    pairs.push((a, &q.elements[k]));
                }
                _ => return false,
            }
        }
        pairs.iter().all(|(a, b)| a.max_abs_diff(b) <= TOL.element_match)
    }

    pub fn is_trivial(&self) -> bool {
        let d = self.dim as f64;
        self.elements.iter().all(|a| {
            let t = a.trace() / d;
            a.max_abs_diff(&ComplexMatrix::identity(self.dim).scale(t)) <= TOL.structure
        })
    }

    /// Every element has exactly one eigenvalue above the rank threshold.
    pub fn is_rank1(&self) -> bool {
        self.elements.iter().all(|a| element_rank(a) == 1)
    }

    /// Elements are mutually orthogonal projectors.
    pub fn is_projective(&self) -> bool {
        for (j, a) in self.elements.iter().enumerate() {
            if (a * a).max_abs_diff(a) > TOL.structure {
                return false;
            }
            for b in &self.elements[j + 1..] {
                if (a * b).max_abs() > TOL.structure {
                    return false;
                }
            }
        }
        true
    }

    /// All elements have the same trace.
    pub fn is_unbiased(&self) -> bool {
        let t = self.traces();
        t.iter().all(|x| (x - t[0]).abs() <= TOL.structure)
    }

    /// Unbiased rank-1 POVM with all off-diagonal overlaps `tr(A_j A_k)` equal.
    pub fn is_equiangular(&self) -> bool {
        if !self.is_rank1() || !self.is_unbiased() {
            return false;
        }
        let mut reference = None;
        for (j, a) in self.elements.iter().enumerate() {
            for b in &self.elements[j + 1..] {
                let f = a.trace_product(b).re;
                match reference {
                    None => reference = Some(f),
                    Some(r) if (f - r).abs() > TOL.structure => return false,
                    _ => {}
                }
            }
        }
        true
    }

    /// Overlap graph (edge when `tr(A_j A_k)` is nonzero) is disconnected.
    pub fn is_reducible(&self) -> bool {
        let m = self.len();
        if m < 2 {
            return false;
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(j) = stack.pop() {
            for k in 0..m {
                if !seen[k] && self.elements[j].trace_product(&self.elements[k]).re > TOL.overlap_edge {
                    seen[k] = true;
                    stack.push(k);
                }
            }
        }
        seen.iter().any(|s| !s)
    }
}

/// Number of eigenvalues above the rank threshold.
pub fn element_rank(a: &ComplexMatrix) -> usize {
    hermitian_eigen(a).map(|e| e.values.iter().filter(|&&x| x > TOL.rank).count()).unwrap_or(usize::MAX)
}

/// Scale-free proportionality test `|tr(A^† B)|^2 >= (1 - eps) tr(A^† A) tr(B^† B)`.
pub fn proportional(a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
    let ab = a.hs_inner(b).norm_sqr();
    let aa = a.hs_inner(a).re;
    let bb = b.hs_inner(b).re;
    ab >= (1.0 - TOL.proportional) * aa * bb
}

/// `tr(A_j B_k) = tr(A_j) tr(B_k) / d` for every pair.
pub fn are_mutually_unbiased(p: &Povm, q: &Povm) -> bool {
    let d = p.dim as f64;
    p.elements.iter().all(|a| {
        let ta = a.trace().re;
        q.elements.iter().all(|b| (a.trace_product(b).re - ta * b.trace().re / d).abs() <= TOL.unbiased_pair)
    })
}

/// Every element of `p` commutes with every element of `q`.
pub fn commute(p: &Povm, q: &Povm) -> bool {
    max_commutator(p, q) <= TOL.commute
}

pub fn max_commutator(p: &Povm, q: &Povm) -> f64 {
    let mut worst: f64 = 0.0;
    for a in &p.elements {
        for b in &q.elements {
            worst = worst.max(a.commutator(b).max_abs());
        }
    }
    worst
}

/// Column-stochastic matrix (`sum_j lambda_jk = 1`) used for coarse graining.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl StochasticMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        if entries.iter().any(|&x| !(x >= 0.0)) {
            return Err(Error::DomainError("stochastic matrix entries must be nonnegative".into()));
        }
        for k in 0..cols {
            let s: f64 = (0..rows).map(|j| entries[j * cols + k]).sum();
            if (s - 1.0).abs() > 1e-12 {
                return Err(Error::DomainError(format!("column {k} sums to {s}")));
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self { rows: n, cols: n, entries }
    }

    /// Single row of ones: everything is merged into one outcome.
    pub fn merge_all(n: usize) -> Self {
        Self { rows: 1, cols: n, entries: vec![1.0; n] }
    }

    /// Deterministic relabeling/merging map: outcome `k` goes to `target[k]`.
    pub fn from_assignment(rows: usize, target: &[usize]) -> Result<Self> {
        let cols = target.len();
        let mut entries = vec![0.0; rows * cols];
        for (k, &j) in target.iter().enumerate() {
            if j >= rows {
                return Err(Error::DimMismatch(format!("target {j} out of {rows} rows")));
            }
            entries[j * cols + k] = 1.0;
        }
        Self::new(rows, cols, entries)
    }

    pub fn random(rng: &mut impl rand::Rng, rows: usize, cols: usize) -> Self {
        let mut entries = vec![0.0; rows * cols];
        for k in 0..cols {
            let col: Vec<f64> = (0..rows).map(|_| rng.random::<f64>()).collect();
            let s: f64 = col.iter().sum();
            for j in 0..rows {
                entries[j * cols + k] = col[j] / s;
            }
        }
        Self { rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.cols + k]
    }
}

/// Structural summary of a family of POVMs against the `d + 1` bound for
/// mutually unbiased simple rank-1 POVMs.
#[derive(Debug, Clone, PartialEq)]
pub struct MuFamilyReport {
    pub size: usize,
    pub bound: usize,
    pub pairwise_mu: Vec<Vec<bool>>,
    pub all_mutually_unbiased: bool,
    pub all_simple_rank1: bool,
    pub within_bound: bool,
    /// When the family is complete (`size == d + 1`), whether every member is projective.
    pub complete_and_projective: Option<bool>,
    /// The bound and the completeness consequence hold whenever the hypotheses do.
    pub consistent: bool,
}

pub fn mu_family_check(family: &[Povm]) -> Result<MuFamilyReport> {
    let d = family.first().map(|p| p.dim).ok_or_else(|| Error::BadCount("empty family".into()))?;
    if family.iter().any(|p| p.dim != d) {
        return Err(Error::DimMismatch("family members have different dimensions".into()));
    }
    let g = family.len();
    let mut pairwise = vec![vec![true; g]; g];
    for r in 0..g {
        for s in (r + 1)..g {
            let mu = are_mutually_unbiased(&family[r], &family[s]);
            pairwise[r][s] = mu;
            pairwise[s][r] = mu;
        }
    }
    let all_mu = pairwise.iter().flatten().all(|&x| x);
    let all_simple_rank1 = family.iter().all(|p| p.is_rank1() && p.is_simple());
    let within_bound = g <= d + 1;
    let complete_and_projective = (g == d + 1).then(|| family.iter().all(Povm::is_projective));
    let consistent = !(all_mu && all_simple_rank1) || (within_bound && complete_and_projective.unwrap_or(true));
    Ok(MuFamilyReport {
        size: g,
        bound: d + 1,
        pairwise_mu: pairwise,
        all_mutually_unbiased: all_mu,
        all_simple_rank1,
        within_bound,
        complete_and_projective,
        consistent,
    })
}

/// Identity-proportional check used by tests and reports.
pub fn identity_coefficient(a: &ComplexMatrix) -> C64 {
    a.trace() / a.dim() as f64
}
