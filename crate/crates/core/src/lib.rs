//! Enumeration and classification of quaternion-type sequence quadruples,
//! the perfect quaternion sequences they correspond to, and the Hadamard
//! matrices (real and quaternionic) they generate.
//!
//! The crate is organized around the stages of the search pipeline:
//!
//! - [`quat`]: exact arithmetic on the half-integer quaternion lattice and
//!   the 24-element unit alphabet with its text codec.
//! - [`seq`]: binary and quaternion sequences, periodic correlation, spectral
//!   profiles, and the quadruple predicates.
//! - [`search`]: the meet-in-the-middle exhaustive search for quadruples of a
//!   given length, with spectral filtering and sorted key matching.
//! - [`equiv`]: sequence equivalence operations, canonical forms, and
//!   deduplication.
//! - [`hadamard`]: sign matrices, their graph encoding, and canonical
//!   certificates for Hadamard equivalence.
//! - [`qhm`]: quaternionic Hadamard matrices built from perfect sequences,
//!   dephasing, inner automorphisms, and column invariants.
//! - [`pipeline`]: the batch driver tying search and filtering together.

pub mod equiv;
pub mod hadamard;
pub mod pipeline;
pub mod qhm;
pub mod quat;
pub mod search;
pub mod seq;

pub use quat::{FloatQuat, Quat};
pub use seq::{BinarySeq, Quadruple, QuatSeq};
