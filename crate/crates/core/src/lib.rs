#![no_std]

extern crate alloc;

pub mod cohomology;
pub mod covers;
pub mod divisor;
pub mod error;
pub mod lattice;
pub mod ring;

pub use error::{Error, Result};
