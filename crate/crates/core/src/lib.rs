//! Exact correspondence calculus for Chow motives of cubic fourfolds and K3 surfaces.

pub mod config;
pub mod error;
pub mod gradedring;
pub mod instances;
pub mod linalg;
pub mod motiveiso;
pub mod mukai;
pub mod quadform;
pub mod rational;
pub mod realization;
pub mod suites;
pub mod tautcorr;
