//! Sparse multivariate polynomials over an exact field.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::AlgebraError;
use crate::ring::{Monomial, RingRef};
use crate::scalar::{rational_gcd, Scalar};

/// Polynomial in the indeterminates of `ring`. Zero coefficients are never
/// stored, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<K: Scalar> {
    ring: RingRef,
    terms: BTreeMap<Monomial, K>,
}

impl<K: Scalar> MultiPoly<K> {
    pub fn zero(ring: &RingRef) -> Self {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &RingRef) -> Self {
        Self::constant(ring, K::one())
    }

    pub fn constant(ring: &RingRef, c: K) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(ring.len()), c);
        }
        p
    }

    pub fn from_i64(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, K::from_i64(c))
    }

    /// The indeterminate at `idx`.
    pub fn var(ring: &RingRef, idx: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.len(), idx, 1), K::one())
    }

    pub fn var_named(ring: &RingRef, name: &str) -> Result<Self, AlgebraError> {
        let idx = ring
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, idx))
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: K) -> Self {
        let mut p = Self::zero(ring);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, K)>>(ring: &RingRef, terms: I) -> Self {
        let mut p = Self::zero(ring);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    /// The value if this is a constant polynomial.
    pub fn constant_value(&self) -> Option<K> {
        if self.terms.is_empty() {
            Some(K::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &K)> + ExactSizeIterator {
        self.terms.iter()
    }

    /// Leading term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &K)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> K {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_else(K::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> K {
        self.terms.get(m).cloned().unwrap_or_else(K::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Degree in one indeterminate; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Indices of indeterminates that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ring.len()).filter(|&v| self.depends_on(v)).collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: K) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), AlgebraError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
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
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.ring));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        let mut out = Self::zero(&self.ring);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &K) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e > 0 {
                out.add_term(m.with_exp(var, e - 1), c.clone() * K::from_i64(e as i64));
            }
        }
        out
    }

    /// Substitute a constant for one indeterminate.
    pub fn substitute_value(&self, var: usize, value: &K) -> Self {
        let mut out = Self::zero(&self.ring);
        let mut powers: Vec<K> = vec![K::one()];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().clone() * value.clone();
                powers.push(next);
            }
            out.add_term(m.with_exp(var, 0), c.clone() * powers[e].clone());
        }
        out
    }

    /// Substitute a polynomial for one indeterminate.
    pub fn substitute(&self, var: usize, value: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(value)?;
        let mut powers: Vec<Self> = vec![Self::one(&self.ring)];
        let mut out = Self::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = m.with_exp(var, 0);
            out = &out + &powers[e].mul_monomial(&rest, c);
        }
        Ok(out)
    }

    /// `var ↦ var + k`.
    pub fn shift_var(&self, var: usize, k: &K) -> Self {
        if k.is_zero() || !self.depends_on(var) {
            return self.clone();
        }
        let shifted = &Self::var(&self.ring, var) + &Self::constant(&self.ring, k.clone());
        self.substitute(var, &shifted).expect("same ring")
    }

    /// Evaluate every indeterminate listed in `values` (by index).
    pub fn evaluate_partial(&self, values: &[(usize, K)]) -> Self {
        let mut p = self.clone();
        for (v, k) in values {
            p = p.substitute_value(*v, k);
        }
        p
    }

    /// Positive rational content: gcd of all coefficients (zero for zero).
    pub fn content(&self) -> K {
        self.terms
            .values()
            .fold(K::zero(), |acc, c| rational_gcd(&acc, c))
    }

    /// Divide by content and fix the sign so the leading coefficient is
    /// positive. Returns `(unit, primitive)` with `self = unit * primitive`.
    pub fn primitive_split(&self) -> (K, Self) {
        if self.is_zero() {
            return (K::one(), self.clone());
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        (c.clone(), self.scale(&c.recip()))
    }

    pub fn primitive_part(&self) -> Self {
        self.primitive_split().1
    }

    /// Coefficients as a polynomial in `var` (index = power), each free of `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Self::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            out[e].terms.insert(m.with_exp(var, 0), c.clone());
        }
        out
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(ring: &RingRef, var: usize, coeffs: &[Self]) -> Self {
        let mut out = Self::zero(ring);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                out.add_term(m.with_exp(var, m.exp(var) + e as u32), v.clone());
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, failing with the remainder when the
    /// division does not terminate cleanly.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, AlgebraError> {
        self.check_ring(divisor)?;
        if divisor.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if let Some(c) = divisor.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        let (lm, lc) = {
            let (m, c) = divisor.leading_term().unwrap();
            (m.clone(), c.clone())
        };
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(AlgebraError::NotDivisible {
                    remainder: rem.to_string(),
                });
            }
            let qm = lm.quotient_of(m);
            let qc = c.clone() / lc.clone();
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Ok(quot)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.ring.len()),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> K::Int {
        self.terms
            .values()
            .fold(K::Int::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Render with `var_names` overriding the ring's names (used by emitters).
    pub fn fmt_with(&self, f: &mut dyn fmt::Write, latex: bool) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono = format_monomial(&self.ring, m, latex);
            if mono.is_empty() {
                f.write_str(&format_scalar(&a, latex))?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else if latex {
                write!(f, "{} {}", format_scalar(&a, latex), mono)?;
            } else {
                write!(f, "{}*{}", format_scalar(&a, latex), mono)?;
            }
        }
        Ok(())
    }

    pub fn to_latex(&self) -> String {
        let mut s = String::new();
        self.fmt_with(&mut s, true).unwrap();
        s
    }
}

pub(crate) fn format_scalar<K: Scalar>(c: &K, latex: bool) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else if latex {
        let sign = if c.is_negative() { "-" } else { "" };
        format!("{}\\frac{{{}}}{{{}}}", sign, c.numer().abs(), c.denom())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn latex_name(name: &str) -> String {
    const GREEK: &[&str] = &[
        "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa",
        "lambda", "mu", "nu", "xi", "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi",
        "omega",
    ];
    if GREEK.contains(&name) {
        format!("\\{}", name)
    } else {
        name.to_string()
    }
}

pub(crate) fn format_monomial(ring: &RingRef, m: &Monomial, latex: bool) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = if latex {
            latex_name(ring.name(i))
        } else {
            ring.name(i).to_string()
        };
        parts.push(match (e, latex) {
            (1, _) => name,
            (_, true) => format!("{}^{{{}}}", name, e),
            (_, false) => format!("{}^{}", name, e),
        });
    }
    parts.join(if latex { " " } else { "*" })
}

impl<K: Scalar> fmt::Display for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, false)
    }
}

impl<K: Scalar> fmt::Debug for MultiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a, K: Scalar> $tr<&'a MultiPoly<K>> for &'a MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $method(self, rhs: &'a MultiPoly<K>) -> MultiPoly<K> {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl<K: Scalar> $tr for MultiPoly<K> {
            type Output = MultiPoly<K>;
            fn $method(self, rhs: MultiPoly<K>) -> MultiPoly<K> {
                (&self).$checked(&rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<K: Scalar> Neg for &MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<K: Scalar> Neg for MultiPoly<K> {
    type Output = MultiPoly<K>;
    fn neg(self) -> MultiPoly<K> {
        -&self
    }
}
