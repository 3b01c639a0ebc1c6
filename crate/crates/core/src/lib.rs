//! Exact combinatorics for parahoric Hecke algebras: root data and folding,
//! extended affine Weyl groups, Iwahori–Hecke algebras with their Bernstein
//! centers, unramified principal series, base change on centers, and
//! Arthur's cone calculus.

pub mod affine_weyl;
pub mod basechange;
pub mod cli;
pub mod cones;
pub mod error;
pub mod hecke;
pub mod laurent;
pub mod lattice;
pub mod rootdata;
pub mod spectral;

pub use error::{Error, Result};
