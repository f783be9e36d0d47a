//! Step-2 nilpotent Lie groups built from finite graphs, their lattices and
//! automorphism groups, and certified rigidity verdicts for groups of affine
//! transformations acting on the resulting nilmanifolds (or on tori).

pub mod algebra;
pub mod automorphism;
pub mod dynamics;
pub mod error;
pub mod gallery;
pub mod graph;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod report;
pub mod rigidity;

pub use error::{Error, Result};
