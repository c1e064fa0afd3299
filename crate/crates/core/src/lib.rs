pub mod commutation;
pub mod error;
pub mod extendability;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod maps;
pub mod projective;
pub mod reconstruct;
pub mod semilinear;
pub mod suites;

pub use error::{Error, Result};
