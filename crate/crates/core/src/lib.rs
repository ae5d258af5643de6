//! Exact computation of `T(G) = NHol(G)/Hol(G)` for special p-groups of class
//! two built from linear maps `pi : V -> Λ²V` over a prime field.
//!
//! The pipeline works structurally: it computes the spaces of equivariant
//! symmetric and anti-symmetric bilinear forms attached to `G_pi`, filters the
//! admissible anti-symmetric parameters through the linear-algebra criterion
//! for the associated regular subgroup to be isomorphic to `G`, and assembles
//! `T(G)` as a semidirect product. An independent brute-force oracle over the
//! holomorph at order `p^3` cross-checks the counts.

pub mod autc;
pub mod check;
pub mod cli;
pub mod forms;
pub mod fp;
pub mod holo;
pub mod multilinear;
pub mod oracle;
pub mod pigroup;

pub use check::{Check, CheckReport};
pub use fp::{FpError, FpMatrix, FpScalar, FpVector};
pub use multilinear::{induced_hat, wedge, Wedge2Element, WedgeBasis};
pub use pigroup::{canonical_rank_one, CaseLabel, GElement, GroupError, PiSpec};

/// Default cap on exhaustive enumerations.
pub const DEFAULT_BUDGET: u128 = 100_000_000;
