//! Strongly regular generalized partial geometries from quadrics over GF(q),
//! and the LDPC codes whose parity-check matrices are their incidence
//! matrices.
//!
//! The crate is `no_std` and needs only `alloc`. File formats, the Monte Carlo
//! harness and the command line live in the `geomcode` crate.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod constructions;
pub mod field;
pub mod geometry;
pub mod gf2;
pub mod ldpc;
pub mod metrics;

pub use analysis::{SrgSpectrum, SrpgParams};
pub use constructions::{build_conic_structure, build_hyperbolic_structure, Family, IncidenceStructure};
pub use field::{FieldElement, FieldSpec};
pub use gf2::BinaryMatrix;
