//! Finite-horizon computation of density functionals, monad measures,
//! multiplicative progression searches and product-set gap witnesses for
//! subsets of the positive integers.

pub mod cli;
pub mod density;
pub mod error;
pub mod intset;
pub mod monad;
pub mod numeric;
pub mod productset;
pub mod progressions;
pub mod report;

pub use error::{Error, Result};
pub use intset::{IntervalSet, SetSpec, Window};
