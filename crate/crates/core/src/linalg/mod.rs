//! Dense complex linear algebra sized for small single-copy operators and
//! tensor spaces of a few copies.

pub mod eigen;
pub mod matrix;
pub mod random;
pub mod tensor;

pub use eigen::{hermitian_eigen, inverse_sqrt, min_eigenvalue, operator_norm, HermitianEigen};
pub use matrix::{basis_ket, inner, kron, kron_ket, ComplexMatrix, Ket, C64};
pub use tensor::{partial_trace_first_n, swap_operator, symmetric_projector, SymmetricProjector};
