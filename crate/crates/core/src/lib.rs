//! Strict deformation quantization and classical limits, computed.
//!
//! The exact side works with Weyl algebras over rational symplectic spaces,
//! with every phase a root of unity times a symbolic `exp(i*q*hbar)`. The
//! numeric side realizes the Moyal deformation of functions on a periodic
//! phase-space grid.

pub mod category;
pub mod cyclotomic;
pub mod functors;
pub mod random;
pub mod rieffel;
pub mod symplectic;
pub mod weyl;
