//! Simple heteroclinic networks in R^4: catalogue, equivariant vector
//! fields, stability indices, numerical integration and Monte Carlo basin
//! estimates.

pub mod basin;
pub mod dynamics;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod stability;

pub use error::{Error, Result};
