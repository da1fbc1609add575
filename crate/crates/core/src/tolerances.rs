//! Numerical thresholds used by every predicate in the crate.
//!
//! All comparisons that decide a boolean (validity, rank, orthogonality,
//! saturation of a bound) read their threshold from [`Tolerances::DEFAULT`].

/// One record holding every threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entrywise asymmetry `|M - M^†|` accepted as Hermitian.
    pub hermitian: f64,
    /// Matrices flagged Hermitian on construction must be within this.
    pub hermitian_strict: f64,
    /// Relative off-diagonal Frobenius mass at which Jacobi stops.
    pub jacobi_offdiag: f64,
    /// Sweep cap for the Jacobi solver.
    pub jacobi_max_sweeps: usize,
    /// Most negative eigenvalue tolerated for a PSD operator.
    pub psd: f64,
    /// Max entrywise deviation of `sum_j A_j` from the identity.
    pub completeness: f64,
    /// Elements with operator norm at or below this are zero.
    pub zero_element: f64,
    /// Eigenvalues above this count toward the rank.
    pub rank: f64,
    /// Relative defect of Cauchy-Schwarz that still counts as proportional.
    pub proportional: f64,
    /// Max entrywise distance when matching POVM elements.
    pub element_match: f64,
    /// Mutual unbiasedness `tr(AB) = tr A tr B / d`.
    pub unbiased_pair: f64,
    /// Commutator max-entry threshold.
    pub commute: f64,
    /// Overlaps `tr(A_j A_k)` above this connect two elements.
    pub overlap_edge: f64,
    /// Equal traces / equal overlaps / projector identities.
    pub structure: f64,
    /// Frame-potential residual accepted for a t-design.
    pub design: f64,
    /// Absolute tolerance for declaring a fidelity bound saturated.
    pub saturation: f64,
    /// Margin above a fidelity threshold required by the incompatibility witness.
    pub witness: f64,
    /// Gap between the top two eigenvalues under which estimators are degenerate.
    pub degenerate_top: f64,
    /// Normalization of kets in weighted sets.
    pub ket_norm: f64,
    /// Sum of weights in weighted sets.
    pub weight_sum: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        hermitian_strict: 1e-12,
        jacobi_offdiag: 1e-13,
        jacobi_max_sweeps: 60,
        psd: 1e-9,
        completeness: 1e-9,
        zero_element: 1e-9,
        rank: 1e-8,
        proportional: 1e-10,
        element_match: 1e-8,
        unbiased_pair: 1e-9,
        commute: 1e-9,
        overlap_edge: 1e-9,
        structure: 1e-8,
        design: 1e-8,
        saturation: 1e-8,
        witness: 1e-9,
        degenerate_top: 1e-8,
        ket_norm: 1e-12,
        weight_sum: 1e-10,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Shorthand for the default record.
pub const TOL: Tolerances = Tolerances::DEFAULT;
