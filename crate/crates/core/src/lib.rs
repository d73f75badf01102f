//! Exact tools for degeneracy of quadratic systems, bilinear systems and
//! three-way tensors.

pub mod cli;
pub mod completion;
pub mod degeneracy;
pub mod error;
pub mod exactmath;
pub mod failures;
pub mod hyperdet;
pub mod instances;
pub mod reductions;
pub mod report;
pub mod seed;

pub use error::{Error, Result};
pub use exactmath::Rational;
