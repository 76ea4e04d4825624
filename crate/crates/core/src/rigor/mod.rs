//! Interval arithmetic over MPFR endpoints and interval-coefficient algebra.
//!
//! Every certified statement in the crate bottoms out in [`Interval::sign`].

pub mod interval;
pub mod matrix;
pub mod poly;

pub use interval::{Interval, Sign, DEFAULT_PREC};
pub use matrix::{block_det, det_laplace, IMatrix, RingElem};
pub use poly::IPoly;
