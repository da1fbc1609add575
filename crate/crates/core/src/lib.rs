pub mod error;
pub mod linalg;
pub mod builders;
pub mod designs;
pub mod fidelity;
pub mod io;
pub mod povm;
pub mod qubit;
pub mod scan;
pub mod special;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
