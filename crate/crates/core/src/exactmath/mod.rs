//! Exact arithmetic substrate: rationals, dense matrices with fraction-free
//! elimination, and univariate polynomials with Sturm root counting.
//!
//! Nothing in here touches floating point except the explicit conversion
//! helpers in [`rational`].

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod surd;

pub use matrix::{definiteness, det_exact, kernel_basis, rank_exact, Definiteness, Matrix};
pub use poly::{gcd_poly, rational_roots, sturm_root_count, Bound, SturmChain, UniPoly};
pub use rational::{format_rational, parse_rational, Rational};
pub use surd::{QuadField, Surd};
