//! Isogeny decompositions of Jacobians of generalized Fermat curves.
//!
//! A generalized Fermat curve of type (p, n) is the fiber product of
//! n - 1 classical degree-p Fermat equations; its automorphism group
//! contains the abelian group Z_p^n acting with n + 1 branch points on
//! the quotient line. This crate computes, for prime p, the isogeny
//! decomposition of the Jacobian into Jacobians of explicit cyclic
//! p-gonal curves, certifies it through quotient-genus arithmetic, and
//! provides the supporting machinery:
//!
//! * [`group`]: the abelian group Z_k^n of the standard generators, its
//!   subgroups, characters, and index-k subgroup enumeration;
//! * [`orbifold`]: quotient orbifold signatures, genus formulas, and the
//!   combinatorial genus identity;
//! * [`scalar`]: exact rational and real quadratic scalars, arbitrary
//!   precision complex arithmetic, Moebius transformations, and branch
//!   set symmetries;
//! * [`curves`]: curve models (fiber products, cyclic covers,
//!   hyperelliptic models), the splitting of hyperelliptic curves with
//!   extra involutions, and the genus-4 family with four elliptic
//!   factors;
//! * [`decompose`]: the decomposition itself, its certificates, named
//!   subgroup families, and the conjectural enumeration for composite
//!   exponents.

pub mod curves;
pub mod decompose;
pub mod error;
pub mod group;
pub mod orbifold;
pub mod scalar;

pub use error::{Error, Result};
