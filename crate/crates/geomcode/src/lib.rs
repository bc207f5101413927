//! File formats, Monte Carlo BER simulation, analysis reports and the
//! command-line driver for the finite-geometry LDPC codes of
//! `geomcode-core`.

pub mod alist;
pub mod cli;
pub mod input;
pub mod manifest;
pub mod report;
pub mod sim;

