//! Exact computational engine for Igusa-type local zeta functions of
//! non-degenerate polynomial mappings and rational functions over p-adic
//! fields.
//!
//! The pipeline: parse polynomials ([`polyring`]), build Newton polyhedra and
//! their normal fans ([`polyhedra`]), refine to a subordinate simplicial fan
//! ([`fan`]), count torus strata and check non-degeneracy over the residue
//! field ([`torus`]), assemble the zeta function as an exact rational
//! function of `q^{-s}` ([`zeta`]), analyze its poles ([`poles`]), and
//! cross-check numerically by truncated p-adic integration ([`oracle`]).
//!
//! Everything is exact: big integers in the geometry, big rationals in the
//! symbolic layer, and real algebraic arithmetic in the numerical oracle.
//! Heavy enumerations run data-parallel under the `parallel` feature
//! (enabled by default) and fall back to sequential loops without it.

pub mod error;
pub mod fan;
pub mod linalg;
pub mod oracle;
pub mod parallel;
pub mod poles;
pub mod polyhedra;
pub mod polyring;
pub mod torus;
pub mod zeta;

pub use error::{Error, Result};
