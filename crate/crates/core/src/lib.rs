//! Exact computation of Kac polynomials of quivers and their nilpotent
//! variants, the point-count series built from them, and a brute-force
//! finite-field census used to cross-check every formula.

pub mod counts;
pub mod error;
pub mod ffrep;
pub mod gkm;
pub mod hua;
pub mod quiver;
pub mod symcore;

pub use error::{Error, Result};
