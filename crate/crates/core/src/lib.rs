//! Exact permanents of rank-2 matrices.
//!
//! For `X` of rank at most 2 and order `n`,
//! `(n!)² det(X∘n) = nⁿ det(X∘(n-1)) perm(X)`, where `X∘p` is the entrywise
//! `p`-th power. This crate evaluates both sides exactly, uses the identity
//! as a polynomial-time permanent algorithm, cross-checks it against
//! brute-force and Ryser engines and the companion identities it rests on,
//! and searches for counterexamples to a related block-permanent bound.
//!
//! Modules, bottom-up:
//! - [`exact`]: arbitrary-precision rationals, factorials, binomials.
//! - [`linalg`]: dense rational matrices, determinants, rank, rank-2 factors.
//! - [`symfunc`]: elementary symmetric polynomials, power sums, Vandermonde.
//! - [`permanent`]: the permanent engines and an automatic dispatcher.
//! - [`identities`]: exact identity checkers and seeded random generators.
//! - [`conjecture`]: the block-permanent counterexample hunter.
//! - [`bench`]: engine timings and the floating-point stability sweep.
//! - [`cli`]: the `permident` command-line tool.

pub mod bench;
pub mod cli;
pub mod conjecture;
pub mod error;
pub mod exact;
pub mod identities;
pub mod linalg;
pub mod permanent;
pub mod symfunc;

pub use error::{Error, Result};
pub use exact::Rational;
pub use linalg::{Matrix, Rank2Decomposition};
pub use symfunc::RationalVector;
