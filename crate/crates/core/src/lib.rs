//! Toric residues in the Cox ring of a complete simplicial toric variety.
// Index loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod cayley;
pub mod cli;
pub mod divisor;
pub mod fan;
pub mod grading;
pub mod groebner;
pub mod intmat;
pub mod io;
pub mod linalg;
pub mod local;
pub mod poly;
pub mod polytope;
pub mod residue;
