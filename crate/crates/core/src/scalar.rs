//! Exact coefficient fields.
//!
//! Every polynomial type in this crate is generic over a [`Scalar`]: an exact
//! fraction field `Ratio<I>` over some integer type `I`. Content extraction
//! and GCD normalization need access to the numerator/denominator split, so
//! the trait exposes it directly instead of going through a generic field
//! abstraction.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Num, One, Signed, Zero};

/// An exact field of fractions with access to its integer parts.
pub trait Scalar:
    Clone + Eq + Ord + Hash + Debug + Display + Signed + FromStr + Send + Sync + 'static
{
    type Int: Integer + Signed + Clone + Hash + Debug + Display + Send + Sync;

    fn numer(&self) -> &Self::Int;
    fn denom(&self) -> &Self::Int;
    fn from_parts(numer: Self::Int, denom: Self::Int) -> Self;
    fn from_int(value: Self::Int) -> Self {
        Self::from_parts(value, Self::Int::one())
    }
    fn from_i64(value: i64) -> Self;

    fn is_integer(&self) -> bool {
        self.denom().is_one()
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    /// `self^exp` for a machine-size exponent.
    fn powi(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

impl<T> Scalar for Ratio<T>
where
    T: Integer + Signed + Clone + Hash + Debug + Display + FromPrimitive + FromStr + Send + Sync + 'static,
{
    type Int = T;

    fn numer(&self) -> &T {
        Ratio::numer(self)
    }

    fn denom(&self) -> &T {
        Ratio::denom(self)
    }

    fn from_parts(numer: T, denom: T) -> Self {
        Ratio::new(numer, denom)
    }

    fn from_i64(value: i64) -> Self {
        Ratio::from_integer(T::from_i64(value).expect("integer literal out of range"))
    }
}

/// Positive rational gcd: `gcd(p1/q1, p2/q2) = gcd(p1, p2) / lcm(q1, q2)`.
/// Zero is treated as the neutral element.
pub fn rational_gcd<K: Scalar>(a: &K, b: &K) -> K {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let numer = a.numer().gcd(b.numer());
    let denom = a.denom().lcm(b.denom());
    K::from_parts(numer, denom)
}

/// Parse `"p/q"` or `"p"` (optionally signed) into a scalar.
pub fn parse_scalar<K: Scalar>(text: &str) -> Option<K> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = K::Int::from_str_radix(num.trim_start_matches('+'), 10).ok()?;
    let den = K::Int::from_str_radix(den, 10).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(K::from_parts(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn gcd_of_fractions() {
        assert_eq!(rational_gcd(&q(4, 3), &q(6, 5)), q(2, 15));
        assert_eq!(rational_gcd(&q(0, 1), &q(-3, 7)), q(3, 7));
    }

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_scalar::<Rational>("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_scalar::<Rational>(" 5 "), Some(q(5, 1)));
        assert_eq!(parse_scalar::<Rational>("1/0"), None);
        assert_eq!(parse_scalar::<Rational>("x"), None);
    }

    #[test]
    fn small_int_instantiation() {
        let a: num_rational::Rational64 = Scalar::from_i64(6);
        assert_eq!(a.powi(2), num_rational::Rational64::from_integer(36));
    }
}
