//! Exact computational homological algebra for finite-dimensional quiver algebras.
//!
//! The crate builds path algebras `kQ/I` of acyclic quivers, computes their
//! Hochschild cohomology over the rationals, constructs first-order
//! deformations from 2-cocycles together with the deformed idempotents and
//! projectives, and checks a number of classical identities mechanically:
//! Eulerian idempotents and the λ-decomposition, Morita invariance for
//! matrix algebras, the HKR antisymmetrization, and mutations of exceptional
//! collections on the level of the Euler lattice.

pub mod config;
pub mod deformation;
pub mod eulerian;
pub mod exact_linalg;
pub mod hkr_poly;
pub mod hochschild;
pub mod morita;
pub mod mutation_lattice;
pub mod quiver_algebra;
pub mod report;
pub mod selftest;

pub use exact_linalg::{Scalar, SparseMatrix};
pub use quiver_algebra::{AlgElem, FiniteDimAlgebra};
