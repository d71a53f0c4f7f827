//! Exact computational string topology for spherical space forms.
//!
//! The crate provides, over exact rationals:
//! - graded vector spaces and sparse degree-shifting maps with Koszul
//!   signs ([`graded`]),
//! - chain complexes, homology and homotopy retracts ([`complex`]),
//! - normalized cubical chains with cross product and Serre diagonal
//!   ([`cubical`]),
//! - truncated A-infinity module calculus: verification, composition,
//!   inversion and homotopy transfer ([`ainfty`]),
//! - path modules over a pair `(A, P)` and their coherent-chain-homotopy
//!   morphisms ([`pathmod`]),
//! - twisted Morse complexes with spectral sequences ([`morse`]),
//! - the lifted Goresky-Hingston coproduct on free loop spaces of
//!   `S^n/G` ([`sng`]).

pub mod ainfty;
pub mod complex;
pub mod cubical;
pub mod error;
pub mod fixtures;
pub mod graded;
pub mod io;
pub mod linalg;
pub mod morse;
pub mod pathmod;
pub mod random;
pub mod report;
pub mod scalar;
pub mod sng;

pub use error::AlgebraError;
