//! Exact computation in the plane Cremona group.
//!
//! The crate provides exact rational arithmetic, Cremona maps as simplified
//! homogeneous triples, base-point computation through blow-up towers, the
//! de Jonquières group as a semidirect product, a library of named quadratic
//! generators, and a word rewriter that reduces identity words over A- and
//! J-letters to the empty word with a replayable certificate using only
//! amalgam moves and the single relation στ = τσ.

pub mod amalgam;
pub mod bivar;
pub mod bubble;
pub mod decompose;
pub mod error;
pub mod jonq;
pub mod polymap;
pub mod projlinear;
pub mod quadlib;
pub mod sampling;
pub mod scalar;
pub mod serialize;

pub use error::{Error, Result};
