//! Numerical laboratory for truncated Toeplitz operators on the model
//! spaces of finite Blaschke products.

pub mod error;
pub mod harness;
pub mod inner;
pub mod modelspace;
pub mod random;
pub mod spectral;
pub mod symbols;
pub mod tto;

pub use error::{Error, Result};
pub use num_complex::Complex64;
