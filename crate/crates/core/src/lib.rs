//! Minimal additive complements in finitely generated abelian groups.
//!
//! A complement of a nonempty set W ⊆ G is a set C with W + C = G; it is
//! minimal when removing any single element breaks coverage. This crate
//! provides exact symbolic descriptions of the finite and infinite sets that
//! arise in that theory (spiked sets, truncated columns, graphs of
//! moderations, rotated sets), windowed verification with machine-checkable
//! certificates, moderation-function construction, builders for the named
//! minimal-complement recipes, and an exhaustive bitmask oracle for small
//! finite groups.
//!
//! All arithmetic is exact: arbitrary-precision integers and rationals, and
//! quadratic-surd values for rotated sets.

pub mod constructions;
pub mod engine;
pub mod error;
pub mod func;
pub mod group;
pub mod jsonutil;
pub mod moderation;
pub mod oracle;
pub mod poly;
pub mod quad;
pub mod render;
pub mod scenario;
pub mod sets;

pub use error::{Error, Result};
