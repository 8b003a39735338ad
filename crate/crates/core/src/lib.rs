//! Spectral-singularity analysis for primitive substitutions.
//!
//! The crate decides, with certified or numerical evidence, whether the
//! Z-action of a primitive aperiodic substitution (and the R-actions attached
//! to vectors in the Perron–Frobenius kernel) has purely singular spectrum.
//! The pipeline is:
//!
//! 1. exact lattice algebra on the transposed substitution matrix
//!    ([`linalg`], [`poly`]) to find the minimal subspace of the relevant
//!    vector and check the equidistribution conditions ([`equidist`]);
//! 2. the spectral cocycle and its essential restriction ([`cocycle`]);
//! 3. upper bounds for the essential Lyapunov exponent, either exact
//!    (Jensen + Parseval with Mahler-measure-zero clearings) or Monte Carlo
//!    ([`bounds`], [`lyapunov`]);
//! 4. comparison against a rigorous lower bound for the Perron–Frobenius
//!    eigenvalue ([`verdict`]).

pub mod bounds;
pub mod cocycle;
pub mod equidist;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod lyapunov;
pub mod poly;
pub mod report;
pub mod rng;
pub mod substitution;
pub mod torus;
pub mod verdict;

pub use error::{Error, Result};
