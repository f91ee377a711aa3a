//! Exact computation of the defining ideal of the Rees algebra of a
//! height-two ideal of binary forms presented by a 3x2 Hilbert-Burch matrix
//! over F_p.
//!
//! The crate is organized as a tower:
//!
//! - [`exactlin`]: dense linear algebra over F_p (rref, kernels, square roots);
//! - [`polyring`]: sparse bigraded polynomials in x, y, T1, T2, T3 and their
//!   strand bases;
//! - [`hb`]: validated Hilbert-Burch matrices, their banded multiplication
//!   matrices, coefficient matrices, and first-column normal forms;
//! - [`oracle`]: brute-force strand computations (symmetric-algebra quotients,
//!   torsion kernels, substitution kernels, minimal generators, resultants)
//!   used as the independent ground truth;
//! - [`linkage`]: the elimination-matrix minors that generate the top strands;
//! - [`morley`]: Morley forms, their closed-form coefficient tables, banded
//!   syzygy catalogs, and the explicit generator families for column degree 2;
//! - [`structure`]: degree charts, free-module predictions, the balanced-case
//!   classification, and the sextic singularity classifier;
//! - [`fixtures`]: manifest (de)serialization and seeded sampling helpers.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod exactlin;
pub mod fixtures;
pub mod hb;
pub mod linkage;
pub mod morley;
pub mod oracle;
pub mod polyring;
pub mod structure;

pub use error::{Error, Result};
pub use exactlin::{sqrt_mod_p, validate_prime, ExactMatrix, FieldElem, RowSpace};
pub use fixtures::{Fixture, FixtureManifest, FixturePins, InputSpec};
pub use hb::{CoeffC, Col1Shape, Col1Transform, HBMatrix};
pub use morley::{Catalog, ExplicitGenerators, TensorPoly};
pub use oracle::{BidegreeMultiset, GenWhich, ImplicitEquation, Oracle};
pub use polyring::{BPoly, BiForm, SMatrix, SPoly, Strand, TExp};
pub use structure::{BalancedClass, DegreePrediction, SexticReport};
