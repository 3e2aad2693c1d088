//! Exact analysis of algebraic dynamical systems over `Z^d`.
//!
//! - [`group_ring`]: Laurent polynomials in `Z[Z^d]`, lopsidedness and
//!   certified `ℓ¹` inverses.
//! - [`zlattice`]: sublattices of `Z^d`, Smith/Hermite normal forms,
//!   quotient groups and characters.
//! - [`principal`]: principal systems `X_f` and the structure
//!   `X_f(Λ) ≅ T^k × F` of their periodic strata.
//! - [`equivariant`]: duality-based injectivity/surjectivity of equivariant
//!   affine maps, kernel-chain stabilization, and stratum experiments.
//! - [`counterexamples`]: finite checks of the one-chain subshift, shift
//!   embeddings, p-adic multiplication and periodic tilings.
//!
//! Independent workloads (lattice sweeps, torus grids, exhaustive window
//! enumeration) go through [`parallel`], which uses rayon when the
//! `parallel` feature is enabled and runs sequentially otherwise.

pub mod counterexamples;
pub mod equivariant;
pub mod group_ring;
pub mod parallel;
pub mod principal;
pub mod zlattice;

pub use group_ring::{L1InverseApprox, LaurentPoly};
pub use parallel::Execution;
pub use principal::{FixedPointStructure, PrincipalSystem};
pub use zlattice::{FiniteAbelianGroup, IntMatrix, Lattice};
