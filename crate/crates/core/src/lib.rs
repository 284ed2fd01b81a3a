//! Rotation distance of polygon triangulations and the subtractive Euclid
//! complexity `E(p, q)`.
//!
//! The crate covers the number theory (`arith`, `farey`), the combinatorics
//! of triangulations and flips (`triangulation`, `flipdist`, `bounds`,
//! `construct`) and the geometry of cyclic orbits on the 3-sphere
//! (`spinehull`). `checks` bundles the end-to-end verification suite.

pub mod arith;
pub mod bounds;
pub mod checks;
pub mod construct;
pub mod error;
pub mod farey;
pub mod flipdist;
pub mod predicates;
pub mod spinehull;
pub mod triangulation;

pub use error::{Error, Result};
