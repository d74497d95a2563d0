//! Numerical laboratory for random real algebraic geometry.
//!
//! Gaussian ensembles of real homogeneous polynomials, their zero counts and
//! zero-set topology, Kac–Rice densities, integral geometry, mixed volumes,
//! and Bombieri–Weyl distances to the discriminant.

pub mod ensembles;
pub mod curvetop;
pub mod discriminant;
pub mod error;
pub mod harmonic;
pub mod intgeom;
pub mod kacrice;
pub mod lab;
pub mod polycore;
pub mod polytopes;
pub mod roots1;
pub mod stats;

pub use error::{Error, Result};
pub use polycore::HomogeneousPoly;

/// Version string embedded in every report.
pub const CODE_VERSION: &str = concat!("raglab ", env!("CARGO_PKG_VERSION"));
