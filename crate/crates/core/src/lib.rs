//! Self-linking numbers of braids in open books, and combinatorial open book
//! foliations of surfaces.

// index loops read closest to the matrix formulas they implement
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod foliation;
pub mod io;
pub mod freegroup;
pub mod lattice;
pub mod mapclass;
pub mod morita;
pub mod props;
pub mod movie;
pub mod slcalc;
pub mod snf;
pub mod surface;

pub use error::{Error, Result};
