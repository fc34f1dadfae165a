//! Exact computation in finitely generated groups with decidable normal
//! forms.
//!
//! The crate provides word syntax and presentations, a [`models::GroupModel`]
//! interface with exact canonical forms, amalgamated free products and HNN
//! extensions over finite-table and free-abelian bases, Cayley-ball
//! enumeration with quasi-isometry certificates, certified FC-centre and
//! centre queries, and bounded-automorphism tests.
//!
//! Everything is `no_std + alloc`; all values are immutable after
//! construction and all operations are pure, so models and results can be
//! shared freely across threads. IO, JSON formats and the CLI live in the
//! companion `fc-kit` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod amalgam;
pub mod autos;
pub mod fc;
pub mod geometry;
pub mod hnn;
pub mod lattice;
pub mod models;
pub mod pres;
pub mod rng;
pub mod words;

pub use models::GroupModel;
pub use words::{Alphabet, Word};
