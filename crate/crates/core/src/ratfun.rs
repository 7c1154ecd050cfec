//! Normalized quotients of multivariate polynomials.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};


use crate::error::AlgebraError;
use crate::gcd::gcd_primitive;
use crate::mpoly::MultiPoly;
use crate::ring::RingRef;
use crate::scalar::Scalar;

/// `num / den` in lowest terms. The denominator has integer coefficients
/// with no common factor and a positive leading coefficient, so two equal
/// values always have identical parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction<K: Scalar> {
    num: MultiPoly<K>,
    den: MultiPoly<K>,
}

impl<K: Scalar> RationalFunction<K> {
    pub fn zero(ring: &RingRef) -> Self {
        RationalFunction {
            num: MultiPoly::zero(ring),
            den: MultiPoly::one(ring),
        }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::from_poly(MultiPoly::one(ring))
    }

    pub fn constant(ring: &RingRef, c: K) -> Self {
        Self::from_poly(MultiPoly::constant(ring, c))
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, K::from_i64(c))
    }

    pub fn from_poly(p: MultiPoly<K>) -> Self {
        let den = MultiPoly::one(p.ring());
        RationalFunction { num: p, den }
    }

    pub fn var(ring: &RingRef, idx: usize) -> Self {
        Self::from_poly(MultiPoly::var(ring, idx))
    }

    /// Build and normalize `num / den`.
    pub fn new(num: MultiPoly<K>, den: MultiPoly<K>) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: MultiPoly<K>, den: MultiPoly<K>) -> Self {
        if num.is_zero() {
            return Self::zero(num.ring());
        }
        if let Some(c) = den.constant_value() {
            let den = MultiPoly::one(num.ring());
            return RationalFunction {
                num: num.scale(&c.recip()),
                den,
            };
        }
        let (num, den) = if num.is_constant() {
            (num, den)
        } else {
            let g = gcd_primitive(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.divide_exact(&g).expect("gcd divides numerator"),
                    den.divide_exact(&g).expect("gcd divides denominator"),
                )
            }
        };
        let (unit, den) = den.primitive_split();
        RationalFunction {
            num: num.scale(&unit.recip()),
            den,
        }
    }

    pub fn ring(&self) -> &RingRef {
        self.num.ring()
    }

    pub fn numer(&self) -> &MultiPoly<K> {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly<K> {
        &self.den
    }

    pub fn into_parts(self) -> (MultiPoly<K>, MultiPoly<K>) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&MultiPoly<K>> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<K> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.depends_on(var)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            self.num.checked_add(&other.num)?;
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.den == other.den {
            let num = self.num.checked_add(&other.num)?;
            return Ok(Self::normalized(num, self.den.clone()));
        }
        if self.den.is_one() {
            let num = (&self.num * &other.den).checked_add(&other.num)?;
            return Ok(RationalFunction {
                num,
                den: other.den.clone(),
            });
        }
        if other.den.is_one() {
            let num = (&other.num * &self.den).checked_add(&self.num)?;
            return Ok(RationalFunction {
                num,
                den: self.den.clone(),
            });
        }
        // Work over the lcm of the denominators to keep sizes down.
        let g = gcd_primitive(&self.den, &other.den);
        let a = self.den.divide_exact(&g)?;
        let b = other.den.divide_exact(&g)?;
        let num = (&self.num * &b).checked_add(&(&other.num * &a))?;
        let den = &(&a * &b) * &g;
        Ok(Self::normalized(num, den))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.is_zero() || other.is_zero() {
            self.num.checked_mul(&other.num)?;
            return Ok(Self::zero(self.ring()));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(Self::from_poly(self.num.checked_mul(&other.num)?));
        }
        // Cross-cancel before multiplying; both operands are already reduced.
        let g1 = gcd_primitive(&self.num, &other.den);
        let g2 = gcd_primitive(&other.num, &self.den);
        let n1 = self.num.divide_exact(&g1)?;
        let d2 = other.den.divide_exact(&g1)?;
        let n2 = other.num.divide_exact(&g2)?;
        let d1 = self.den.divide_exact(&g2)?;
        let num = n1.checked_mul(&n2)?;
        let den = d1.checked_mul(&d2)?;
        let (unit, den) = den.primitive_split();
        Ok(RationalFunction {
            num: num.scale(&unit.recip()),
            den,
        })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_mul(&other.recip()?)
    }

    pub fn recip(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(self.ring());
        }
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        RationalFunction {
            num: self.num.pow(exp),
            den: self.den.pow(exp),
        }
    }

    /// Substitute a constant for one indeterminate. Fails if the denominator
    /// vanishes there.
    pub fn substitute_value(&self, var: usize, value: &K) -> Result<Self, AlgebraError> {
        let num = self.num.substitute_value(var, value);
        let den = self.den.substitute_value(var, value);
        Self::new(num, den)
    }

    /// Evaluate every listed indeterminate.
    pub fn evaluate_partial(&self, values: &[(usize, K)]) -> Result<Self, AlgebraError> {
        let num = self.num.evaluate_partial(values);
        let den = self.den.evaluate_partial(values);
        Self::new(num, den)
    }

    /// `var ↦ var + k`.
    pub fn shift_var(&self, var: usize, k: &K) -> Self {
        let num = self.num.shift_var(var, k);
        let den = self.den.shift_var(var, k);
        if k.is_integer() {
            // An integer translation keeps the denominator coprime, primitive
            // and with the same top-degree part.
            RationalFunction { num, den }
        } else {
            Self::normalized(num, den)
        }
    }

    /// `var ↦ value` for a polynomial `value`.
    pub fn substitute(&self, var: usize, value: &MultiPoly<K>) -> Result<Self, AlgebraError> {
        let num = self.num.substitute(var, value)?;
        let den = self.den.substitute(var, value)?;
        Self::new(num, den)
    }

    pub fn derivative(&self, var: usize) -> Self {
        if self.den.is_one() || !self.den.depends_on(var) {
            return RationalFunction {
                num: self.num.derivative(var),
                den: self.den.clone(),
            }
            .renormalize();
        }
        let num = &(&self.num.derivative(var) * &self.den) - &(&self.num * &self.den.derivative(var));
        Self::normalized(num, self.den.pow(2))
    }

    fn renormalize(self) -> Self {
        Self::normalized(self.num, self.den)
    }

    pub fn to_latex(&self) -> String {
        if self.den.is_one() {
            return self.num.to_latex();
        }
        format!("\\frac{{{}}}{{{}}}", self.num.to_latex(), self.den.to_latex())
    }
}

impl<K: Scalar> fmt::Display for RationalFunction<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.num_terms() > 1 {
            format!("({})", self.num)
        } else {
            self.num.to_string()
        };
        let den_simple = self.den.num_terms() == 1 && {
            let (m, c) = self.den.leading_term().unwrap();
            m.is_one() || c.is_one()
        } && self.den.total_degree().unwrap_or(0) <= 1;
        if den_simple {
            write!(f, "{}/{}", num, self.den)
        } else {
            write!(f, "{}/({})", num, self.den)
        }
    }
}

impl<K: Scalar> fmt::Debug for RationalFunction<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({})", self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, K: Scalar> $tr<&'a RationalFunction<K>> for &'a RationalFunction<K> {
            type Output = RationalFunction<K>;
            fn $method(self, rhs: &'a RationalFunction<K>) -> RationalFunction<K> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<K: Scalar> $tr for RationalFunction<K> {
            type Output = RationalFunction<K>;
            fn $method(self, rhs: RationalFunction<K>) -> RationalFunction<K> {
                (&self).$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl<K: Scalar> Neg for &RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn neg(self) -> RationalFunction<K> {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<K: Scalar> Neg for RationalFunction<K> {
    type Output = RationalFunction<K>;
    fn neg(self) -> RationalFunction<K> {
        -&self
    }
}

#[cfg(test)]
fn has_positive_leading<K: Scalar>(p: &MultiPoly<K>) -> bool {
    p.leading_coeff().is_positive() || p.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::{MPoly, RatFun, Rational};

    fn rf(r: &RingRef, s: &str) -> RatFun {
        crate::expr::parse_ratfun(s, r).unwrap()
    }

    #[test]
    fn cancels_common_factors() {
        let r = Ring::new(&["x", "n"]);
        let a = rf(&r, "(n^2-1)/(2*n+2)");
        let half = Rational::new(1.into(), 2.into());
        assert_eq!(*a.numer(), &MPoly::var(&r, 1).scale(&half) - &MPoly::constant(&r, half));
        assert!(a.is_polynomial());
    }

    #[test]
    fn denominator_is_primitive_and_positive() {
        let r = Ring::new(&["x", "n"]);
        let a = rf(&r, "3/(-6*n - 4)");
        assert_eq!(a.denom().to_string(), "3*n + 2");
        assert_eq!(a.numer().to_string(), "-3/2");
        assert!(has_positive_leading(a.denom()));
    }

    #[test]
    fn canonical_across_routes() {
        let r = Ring::new(&["x", "n", "a"]);
        let lhs = &rf(&r, "1/(n+a)") + &rf(&r, "1/(n-a)");
        let rhs = rf(&r, "2*n/(n^2-a^2)");
        assert_eq!(lhs, rhs);
        let q = &lhs / &rf(&r, "n/(n+a)");
        assert_eq!(q, rf(&r, "2/(n-a)"));
    }

    #[test]
    fn shift_index() {
        let r = Ring::standard(&["alpha", "beta"]);
        let f = rf(&r, "1/(2*n+alpha+beta+1)");
        let one = Rational::from_integer(1.into());
        assert_eq!(f.shift_var(1, &one), rf(&r, "1/(2*n+alpha+beta+3)"));
        assert_eq!(f.shift_var(1, &one).shift_var(1, &-one), f);
    }
}
