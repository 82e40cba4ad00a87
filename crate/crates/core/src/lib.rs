//! biweyl — exact operator algebra in two variables.
//!
//! The crate works in the algebra of differential operators with polynomial
//! coefficients in `x` and `y`. Given a pair of annihilating operators
//! `A` (free of Dy) and `B` (free of Dx) sharing a leading coefficient `L`,
//! it reduces monomials against the pair with exact cofactor bookkeeping and
//! searches for a nonzero operator `S` free of `y` together with a
//! certificate identity
//!
//! ```text
//! L^N * S = U*A + V*B
//! ```
//!
//! that any consumer can replay with plain operator arithmetic. Core layers:
//!
//! * [`poly`] / [`weyl`] — exact polynomials and normal-form operators;
//! * [`series`] — truncated power series as an independent annihilation check;
//! * [`reduce`] — single and iterated reduction with certificates;
//! * [`eliminate`] — the reduction matrix, exact left kernel, and the search
//!   for `S`;
//! * [`verify`] — certificate replay and sample systems with known solutions;
//! * [`json`] — stable serialization of every result type.
//!
//! Everything is generic over the coefficient field (see [`scalar::Field`]);
//! the aliases below fix the arbitrary-precision rational instantiation used
//! throughout the tests and the CLI.

pub mod eliminate;
mod error;
pub mod json;
pub mod linalg;
pub mod poly;
pub mod reduce;
pub mod scalar;
pub mod series;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use poly::Var;

/// Arbitrary-precision rational scalar, the default coefficient field.
pub type Rational = num_rational::BigRational;

/// Polynomial in x and y over [`Rational`].
pub type Poly = poly::BiPoly<Rational>;

/// Normal-form operator over [`Rational`].
pub type Operator = weyl::WeylOperator<Rational>;

/// Truncated power series over [`Rational`].
pub type Series = series::TruncatedSeries<Rational>;

/// Annihilator pair over [`Rational`].
pub type System = reduce::AnnihilatorPair<Rational>;
