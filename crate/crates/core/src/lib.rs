//! Representation zeta functions of 2-nilpotent Lie lattices.
//!
//! The crate computes local zeta functions as Poincaré series of trimmed
//! commutator matrices, both by brute-force enumeration of elementary
//! divisors and through a kernel-class stratification, and provides closed
//! formulas (local, global, topological) for the family `G_{m x n}` with
//! `[c_i, c_{m+j}] = z_{ij}`.

pub mod cli;
pub mod exactalg;
pub mod gzeta;
pub mod lattice;
pub mod limits;
pub mod poincare;
pub mod qcomb;
pub mod snf;
