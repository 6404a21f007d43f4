pub mod error;
pub mod gelfand;
pub mod json;
pub mod linalg;
pub mod measure;
pub mod operator;
pub mod sample;
pub mod scalar;
pub mod space;
pub mod theorems;
pub mod verify;

pub use error::{AxiomViolation, Error, Result};
pub use scalar::{LogNorm, PadicScalar, DEFAULT_PRECISION, DEFAULT_PRIME};
