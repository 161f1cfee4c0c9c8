pub mod bracket;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod field;
pub mod gupta_bleuler;
pub mod lattice;
pub mod minkowski;
pub mod observable;
pub mod state;
pub mod summation;

pub use error::{Error, Result};
