//! Phase-space numerics for a single quantum spin.

pub mod error;
pub mod sphere;

pub use error::{Error, Result};
pub mod spin;
pub mod entropy;
pub mod carlen;
pub mod search;
pub mod ode;
pub mod cli;
