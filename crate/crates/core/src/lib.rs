//! Exact Hilbert-Kunz functions and multiplicities of finitely generated binoids.

pub mod affine;
pub mod boxq;
pub mod cone;
pub mod error;
pub mod hk;
pub mod lattice;
pub mod parse;
pub mod partition;
pub mod presentation;
pub mod spectrum;

pub use error::{Error, Result};
pub use presentation::{IdealSpec, Presentation, Relation};
