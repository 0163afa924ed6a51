pub mod cli;
pub mod error;
pub mod gas_finite_t;
pub mod gas_zero_t;
pub mod hfamily;
pub mod hurwitz;
pub mod numerics;

pub use error::{Error, Result};
