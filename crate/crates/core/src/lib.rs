//! Eisenstein series, the polymorphic maps s2±, s4, s6 and their critical-point
//! atlas on the upper half-plane.

pub mod branch;
pub mod critical;
pub mod error;
pub mod ext;
pub mod fd;
pub mod geometry;
pub mod locus;
pub mod modular;
pub mod ode;
pub mod verify;
pub mod polymorphic;
pub mod qseries;
pub mod quadrature;

pub use error::{Error, Result};
pub use ext::ExtComplex;
pub use num_complex::Complex64;
