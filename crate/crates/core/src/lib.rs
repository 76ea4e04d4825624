//! Computer-assisted analysis of smooth self-similar imploding profiles for the
//! isentropic compressible Euler equations.

pub mod acceptance;
pub mod algebra;
pub mod barriers;
pub mod error;
pub mod rigor;
pub mod series;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
