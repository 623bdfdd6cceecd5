//! Exact computer-algebra toolkit around intersections of two copies of
//! Gr(2,5) in P^9: prime-field linear algebra, sparse multivariate
//! polynomials, a Buchberger engine, Jacobian smoothness certificates,
//! a Borel-Weil-Bott calculator, involution trace tables, and Z[L]
//! class identities with point-counting cross-checks.

pub mod bwb;
pub mod ffield;
pub mod grassmann;
pub mod groebner;
pub mod motivic;
pub mod multipoly;
pub mod traces;

pub use ffield::{Field, PrimeField, RandomState, Rationals};

/// Dense matrix over a prime field.
pub type MatrixFF = ffield::Matrix<PrimeField>;
/// Dense matrix over the exact rationals (used by the trace oracle).
pub type MatrixQ = ffield::Matrix<Rationals>;
/// Sparse multivariate polynomial over a prime field.
pub type PolyFF = multipoly::Polynomial<PrimeField>;
