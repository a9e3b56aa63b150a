//! Recovery of finite groups of linear isometries from finitely many generic orbits.
//!
//! The pipeline runs in two directions. Going forward, [`simulate`] builds a
//! catalog group as explicit matrices and samples generic orbits from it.
//! Going backward, the orbits are turned into Gram graphs ([`gramgraph`]), their
//! joint permutation symmetries are enumerated ([`pointsym`]), the abstract group
//! is read off as a multiplication table ([`groupcore`]), and the concrete
//! matrices are rebuilt by linear extension ([`reconstruct`]). The
//! [`reptheory`] module computes how many generic orbits that last step needs.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod gramgraph;
pub mod groupcore;
pub mod numerics;
pub mod pointsym;
pub mod reconstruct;
pub mod reptheory;
pub mod simulate;

mod unionfind;

pub use error::{Error, Result};
pub use numerics::{FieldTag, LabelTolerance, Matrix, Scalar, TolerancePolicy, Vector};
