//! Exact symbolic derivation of structure relations and differential
//! equations for Laguerre–Hahn orthogonal polynomial families.
//!
//! The algebra kernel is generic over an exact [`Scalar`] field; the aliases
//! below fix it to arbitrary-precision rationals, which is what every other
//! module uses.

pub mod derivation;
pub mod error;
pub mod expr;
pub mod family;
pub mod gcd;
pub mod mpoly;
pub mod oracle;
pub mod ratfun;
pub mod reduction;
pub mod render;
pub mod ring;
pub mod scalar;
pub mod upoly;
pub mod xpoly;

pub use error::{AlgebraError, DeriveError, ExprError, FamilyError, OracleError, ParseError, ParseErrorKind};
pub use ring::{Monomial, Ring, RingRef};
pub use scalar::Scalar;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;
/// Sparse polynomial over [`Rational`].
pub type MPoly = mpoly::MultiPoly<Rational>;
/// Normalized quotient of [`MPoly`]s.
pub type RatFun = ratfun::RationalFunction<Rational>;
/// Polynomial in `x` with [`RatFun`] coefficients.
pub type XPoly = xpoly::XPolynomial<Rational>;
/// Dense univariate polynomial with [`Rational`] coefficients.
pub type QPoly = upoly::UniPoly<Rational>;
