//! Bivariate mixed-type multiple orthogonal polynomials on the step-line.
//!
//! A `q x p` matrix of measures determines a moment matrix whose
//! Gauss-Borel factorization yields two biorthogonal polynomial families.
//! Everything here runs in exact rational arithmetic, so every identity the
//! theory asserts is checked with zero tolerance.

pub mod check;
pub mod config;
pub mod error;
pub mod export;
pub mod families;
pub mod gauss_borel;
pub mod index;
pub mod kernel;
pub mod matrix;
pub mod measure;
pub mod moments;
pub mod poly;
pub mod rational;
pub mod random;
pub mod recurrence;
pub mod report;
pub mod verify;
pub mod workspace;

pub use error::{Error, Result};
pub use index::{Axis, GradedIndex};
pub use matrix::QMatrix;
pub use measure::{MeasureMatrix, MeasureSpec};
pub use poly::{BiPoly, PolyMatrix};
pub use rational::Rational;
