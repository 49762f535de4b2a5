pub mod cartan;
pub mod cli;
pub mod cone;
pub mod eisenstein;
pub mod error;
pub mod fixtures;
pub mod intmat;
pub mod linalg;
pub mod scalar;
pub mod summation;
pub mod torus;
pub mod weyl;
pub mod zeta;

pub use error::{Error, Result};
