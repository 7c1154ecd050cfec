//! Polynomials in the main variable `x` with rational-function coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};



use crate::error::AlgebraError;
use crate::gcd::lcm_primitive;
use crate::mpoly::MultiPoly;
use crate::ratfun::RationalFunction;
use crate::ring::{Monomial, RingRef};
use crate::scalar::Scalar;

/// `Σ coeffs[k] · x^k`, with every coefficient free of `x` and no trailing
/// zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct XPolynomial<K: Scalar> {
    ring: RingRef,
    coeffs: Vec<RationalFunction<K>>,
}

impl<K: Scalar> XPolynomial<K> {
    pub fn zero(ring: &RingRef) -> Self {
        XPolynomial {
            ring: ring.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(RationalFunction::one(ring))
    }

    pub fn x(ring: &RingRef) -> Self {
        Self::from_coeffs(
            ring,
            vec![RationalFunction::zero(ring), RationalFunction::one(ring)],
        )
        .expect("constants are x-free")
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(RationalFunction::from_i64(ring, c))
    }

    /// An x-free value as a degree-0 polynomial. Panics if `c` involves `x`.
    pub fn constant(c: RationalFunction<K>) -> Self {
        let ring = c.ring().clone();
        Self::from_coeffs(&ring, vec![c]).expect("constant must not depend on x")
    }

    pub fn from_coeffs(ring: &RingRef, coeffs: Vec<RationalFunction<K>>) -> Result<Self, AlgebraError> {
        let xi = ring.x();
        if coeffs.iter().any(|c| c.depends_on(xi)) {
            return Err(AlgebraError::DependsOnX);
        }
        Ok(XPolynomial {
            ring: ring.clone(),
            coeffs,
        }
        .trimmed())
    }

    /// Split a polynomial over the full ring by powers of `x`.
    pub fn from_mpoly(p: &MultiPoly<K>) -> Self {
        let ring = p.ring().clone();
        let xi = ring.x();
        let coeffs = p
            .coeffs_in(xi)
            .into_iter()
            .map(RationalFunction::from_poly)
            .collect();
        XPolynomial { ring, coeffs }.trimmed()
    }

    /// Interpret a rational function as a polynomial in `x`; the denominator
    /// must be free of `x`.
    pub fn from_ratfun(f: &RationalFunction<K>) -> Result<Self, AlgebraError> {
        let xi = f.ring().x();
        if f.denom().depends_on(xi) {
            return Err(AlgebraError::XInDenominator);
        }
        let den = RationalFunction::from_poly(f.denom().clone());
        let num = Self::from_mpoly(f.numer());
        Ok(num.div_scalar(&den))
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(RationalFunction::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn coeffs(&self) -> &[RationalFunction<K>] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> RationalFunction<K> {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.ring))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> RationalFunction<K> {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| RationalFunction::zero(&self.ring))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// The x-free value if the degree is at most zero.
    pub fn constant_value(&self) -> Option<RationalFunction<K>> {
        self.is_constant().then(|| self.coeff(0))
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.coeffs.iter().any(|c| c.depends_on(var))
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch {
                left: self.ring.to_string(),
                right: other.ring.to_string(),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Ok(XPolynomial {
            ring: self.ring.clone(),
            coeffs,
        }
        .trimmed())
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        let mut coeffs = vec![RationalFunction::zero(&self.ring); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        Ok(XPolynomial {
            ring: self.ring.clone(),
            coeffs,
        }
        .trimmed())
    }

    /// Multiply by an x-free factor.
    pub fn scale(&self, r: &RationalFunction<K>) -> Self {
        if r.is_zero() {
            return Self::zero(&self.ring);
        }
        if r.is_one() {
            return self.clone();
        }
        XPolynomial {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn scale_k(&self, k: &K) -> Self {
        if k.is_zero() {
            return Self::zero(&self.ring);
        }
        XPolynomial {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(k)).collect(),
        }
    }

    pub fn div_scalar(&self, r: &RationalFunction<K>) -> Self {
        self.scale(&r.recip().expect("nonzero divisor"))
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Formal derivative in `x`.
    pub fn d_dx(&self) -> Self {
        XPolynomial {
            ring: self.ring.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&K::from_i64(k as i64)))
                .collect(),
        }
        .trimmed()
    }

    /// `k`-th derivative.
    pub fn d_dx_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.d_dx())
    }

    /// Quotient and remainder of division by `b` in `x`.
    pub fn div_rem(&self, b: &Self) -> Result<(Self, Self), AlgebraError> {
        self.check_ring(b)?;
        let db = b.degree().ok_or(AlgebraError::DivisionByZero)?;
        let lb_inv = b.leading_coeff().recip()?;
        let mut rem = self.coeffs.clone();
        let mut quot = vec![RationalFunction::zero(&self.ring); rem.len().saturating_sub(db)];
        while rem.len() > db {
            let top = rem.len() - 1;
            let q = &rem[top] * &lb_inv;
            if !q.is_zero() {
                let shift = top - db;
                for (i, c) in b.coeffs.iter().enumerate() {
                    rem[i + shift] = &rem[i + shift] - &(&q * c);
                }
                quot[shift] = q;
            }
            rem.pop();
        }
        let rem = XPolynomial {
            ring: self.ring.clone(),
            coeffs: rem,
        }
        .trimmed();
        let quot = XPolynomial {
            ring: self.ring.clone(),
            coeffs: quot,
        }
        .trimmed();
        Ok((quot, rem))
    }

    /// `self / b`, failing unless the remainder vanishes.
    pub fn divide_exact(&self, b: &Self) -> Result<Self, AlgebraError> {
        let (q, r) = self.div_rem(b)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(AlgebraError::NotDivisible {
                remainder: r.to_string(),
            })
        }
    }

    /// Value at `x = c`.
    pub fn eval_at(&self, c: &RationalFunction<K>) -> RationalFunction<K> {
        let mut acc = RationalFunction::zero(&self.ring);
        for coeff in self.coeffs.iter().rev() {
            acc = &(&acc * c) + coeff;
        }
        acc
    }

    /// Divided difference `(p(x) - p(c)) / (x - c)` via synthetic division.
    pub fn theta_c(&self, c: &RationalFunction<K>) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(&self.ring);
        }
        let d = self.coeffs.len() - 1;
        let mut out = vec![RationalFunction::zero(&self.ring); d];
        let mut acc = RationalFunction::zero(&self.ring);
        for k in (1..=d).rev() {
            acc = &(&acc * c) + &self.coeffs[k];
            out[k - 1] = acc.clone();
        }
        XPolynomial {
            ring: self.ring.clone(),
            coeffs: out,
        }
        .trimmed()
    }

    /// Compose with `x ↦ a·x + b`.
    pub fn subst_affine(&self, a: &RationalFunction<K>, b: &RationalFunction<K>) -> Result<Self, AlgebraError> {
        if a.is_zero() {
            return Err(AlgebraError::InvalidAffine);
        }
        let lin = Self::from_coeffs(&self.ring, vec![b.clone(), a.clone()])?;
        let mut acc = Self::zero(&self.ring);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        Ok(acc)
    }

    /// `n ↦ n + k`. Requires the ring to declare `n`.
    pub fn shift_index(&self, k: i64) -> Self {
        let ni = self.ring.n().expect("ring has no index variable n");
        if k == 0 {
            return self.clone();
        }
        let kk = K::from_i64(k);
        XPolynomial {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| c.shift_var(ni, &kk)).collect(),
        }
    }

    /// Substitute concrete values for some of the x-free indeterminates.
    pub fn evaluate_partial(&self, values: &[(usize, K)]) -> Result<Self, AlgebraError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.evaluate_partial(values))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(XPolynomial {
            ring: self.ring.clone(),
            coeffs,
        }
        .trimmed())
    }

    /// Substitute an x-free polynomial for an x-free indeterminate.
    pub fn substitute(&self, var: usize, value: &MultiPoly<K>) -> Result<Self, AlgebraError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| c.substitute(var, value))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(XPolynomial {
            ring: self.ring.clone(),
            coeffs,
        }
        .trimmed())
    }

    /// Concrete coefficient list if nothing but `x` remains.
    pub fn to_rational_coeffs(&self) -> Option<Vec<K>> {
        self.coeffs.iter().map(|c| c.constant_value()).collect()
    }

    /// Least common multiple of all coefficient denominators (primitive).
    pub fn denominator_lcm(&self) -> MultiPoly<K> {
        self.coeffs
            .iter()
            .fold(MultiPoly::one(&self.ring), |acc, c| {
                if c.denom().is_one() {
                    acc
                } else {
                    lcm_primitive(&acc, c.denom())
                }
            })
    }

    /// Multiply by `l` (which must clear every denominator) and flatten into
    /// a polynomial over the full ring.
    pub fn to_mpoly_scaled(&self, l: &MultiPoly<K>) -> Result<MultiPoly<K>, AlgebraError> {
        let xi = self.ring.x();
        let mut out = MultiPoly::zero(&self.ring);
        for (k, c) in self.coeffs.iter().enumerate() {
            let q = (&c.numer().clone() * l).divide_exact(c.denom())?;
            let xk = Monomial::var(self.ring.len(), xi, k as u32);
            out = &out + &q.mul_monomial(&xk, &K::one());
        }
        Ok(out)
    }

    /// Flatten to a polynomial when every coefficient is polynomial.
    pub fn to_mpoly(&self) -> Option<MultiPoly<K>> {
        if self.coeffs.iter().all(RationalFunction::is_polynomial) {
            self.to_mpoly_scaled(&MultiPoly::one(&self.ring)).ok()
        } else {
            None
        }
    }

    /// Render with powers of `x` outermost, each coefficient parenthesized
    /// as needed. `latex` selects the output syntax.
    pub fn render(&self, latex: bool) -> String {
        crate::render::render_xpoly(self, latex)
    }
}

impl<K: Scalar> fmt::Display for XPolynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl<K: Scalar> fmt::Debug for XPolynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XPoly({})", self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, K: Scalar> $tr<&'a XPolynomial<K>> for &'a XPolynomial<K> {
            type Output = XPolynomial<K>;
            fn $method(self, rhs: &'a XPolynomial<K>) -> XPolynomial<K> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<K: Scalar> $tr for XPolynomial<K> {
            type Output = XPolynomial<K>;
            fn $method(self, rhs: XPolynomial<K>) -> XPolynomial<K> {
                (&self).$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<K: Scalar> Neg for &XPolynomial<K> {
    type Output = XPolynomial<K>;
    fn neg(self) -> XPolynomial<K> {
        XPolynomial {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<K: Scalar> Neg for XPolynomial<K> {
    type Output = XPolynomial<K>;
    fn neg(self) -> XPolynomial<K> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::{RatFun, XPoly};

    fn xp(r: &RingRef, s: &str) -> XPoly {
        crate::expr::parse_xpoly(s, r).unwrap()
    }

    fn rf(r: &RingRef, s: &str) -> RatFun {
        crate::expr::parse_ratfun(s, r).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let r = Ring::standard(&["lambda", "rho"]);
        assert_eq!(&xp(&r, "x+1") * &xp(&r, "x-1"), xp(&r, "x^2-1"));
        let p = xp(&r, "x*(rho-1)+lambda").scale(&rf(&r, "2/rho"));
        assert_eq!(p.coeff(1), rf(&r, "2*(rho-1)/rho"));
        assert_eq!(p.coeff(0), rf(&r, "2*lambda/rho"));
        assert_eq!(&p + &XPoly::zero(&r), p);
    }

    #[test]
    fn derivatives() {
        let r = Ring::standard::<&str>(&[]);
        assert_eq!(xp(&r, "x^3").d_dx(), xp(&r, "3*x^2"));
        assert_eq!(xp(&r, "x*(x^2-1)").d_dx(), xp(&r, "3*x^2-1"));
        assert!(xp(&r, "2*n/3").d_dx().is_zero());
    }

    #[test]
    fn exact_division() {
        let r = Ring::standard::<&str>(&[]);
        assert_eq!(xp(&r, "x^2-1").divide_exact(&xp(&r, "x-1")).unwrap(), xp(&r, "x+1"));
        assert!(XPoly::zero(&r).divide_exact(&xp(&r, "x-1")).unwrap().is_zero());
        assert!(matches!(
            xp(&r, "x^2").divide_exact(&xp(&r, "x-1")),
            Err(AlgebraError::NotDivisible { .. })
        ));
    }

    #[test]
    fn divided_differences() {
        let r = Ring::standard::<&str>(&[]);
        assert_eq!(xp(&r, "x^2").theta_c(&rf(&r, "0")), xp(&r, "x"));
        assert_eq!(xp(&r, "x^2-1").theta_c(&rf(&r, "1")), xp(&r, "x+1"));
        assert!(xp(&r, "5").theta_c(&rf(&r, "n")).is_zero());
    }

    #[test]
    fn affine_substitution() {
        let r = Ring::standard::<&str>(&[]);
        let one = rf(&r, "1");
        let zero = rf(&r, "0");
        assert_eq!(xp(&r, "x^2").subst_affine(&one, &zero).unwrap(), xp(&r, "x^2"));
        assert_eq!(xp(&r, "x").subst_affine(&rf(&r, "2"), &one).unwrap(), xp(&r, "2*x+1"));
        assert_eq!(xp(&r, "x^2-1").subst_affine(&one, &one).unwrap(), xp(&r, "x^2+2*x"));
        assert!(matches!(
            xp(&r, "x").subst_affine(&zero, &one),
            Err(AlgebraError::InvalidAffine)
        ));
    }

    #[test]
    fn index_shift() {
        let r = Ring::standard(&["tau"]);
        assert_eq!(xp(&r, "n+tau+1").shift_index(1), xp(&r, "n+tau+2"));
        assert_eq!(xp(&r, "n+tau+1").shift_index(0), xp(&r, "n+tau+1"));
    }

    #[test]
    fn x_in_denominator_rejected() {
        let r = Ring::standard::<&str>(&[]);
        let f = rf(&r, "1/x");
        assert!(matches!(XPoly::from_ratfun(&f), Err(AlgebraError::XInDenominator)));
    }
}
