//! Dense univariate polynomials with concrete coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::mpoly::format_scalar;
use crate::scalar::Scalar;

/// `Σ coeffs[k] x^k`, trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UniPoly<K: Scalar> {
    coeffs: Vec<K>,
}

impl<K: Scalar> UniPoly<K> {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn x() -> Self {
        UniPoly {
            coeffs: vec![K::zero(), K::one()],
        }
    }

    pub fn constant(c: K) -> Self {
        Self::new(vec![c])
    }

    pub fn new(coeffs: Vec<K>) -> Self {
        let mut p = UniPoly { coeffs };
        while p.coeffs.last().is_some_and(Zero::is_zero) {
            p.coeffs.pop();
        }
        p
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> K {
        self.coeffs.get(k).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn scale(&self, c: &K) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * K::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn derivative_n(&self, k: usize) -> Self {
        (0..k).fold(self.clone(), |p, _| p.derivative())
    }

    pub fn eval(&self, x: &K) -> K {
        self.coeffs
            .iter()
            .rev()
            .fold(K::zero(), |acc, c| acc * x.clone() + c.clone())
    }
}

impl<K: Scalar> Add for &UniPoly<K> {
    type Output = UniPoly<K>;
    fn add(self, rhs: &UniPoly<K>) -> UniPoly<K> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<K: Scalar> Sub for &UniPoly<K> {
    type Output = UniPoly<K>;
    fn sub(self, rhs: &UniPoly<K>) -> UniPoly<K> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<K: Scalar> Mul for &UniPoly<K> {
    type Output = UniPoly<K>;
    fn mul(self, rhs: &UniPoly<K>) -> UniPoly<K> {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![K::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }
}

impl<K: Scalar> Neg for &UniPoly<K> {
    type Output = UniPoly<K>;
    fn neg(self) -> UniPoly<K> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<K: Scalar> fmt::Display for UniPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            let xs = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            match (xs.is_empty(), a.is_one()) {
                (true, _) => f.write_str(&format_scalar(&a, false))?,
                (false, true) => f.write_str(&xs)?,
                (false, false) => write!(f, "{}*{}", format_scalar(&a, false), xs)?,
            }
        }
        Ok(())
    }
}

impl<K: Scalar> fmt::Debug for UniPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({})", self)
    }
}

#[cfg(test)]
mod tests {
    use crate::{QPoly, Rational};

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn hermite_p2() {
        let x = QPoly::x();
        let p2 = &(&x * &x) - &QPoly::constant(q(1, 2));
        assert_eq!(p2.to_string(), "x^2 - 1/2");
        assert!(p2.is_monic());
        assert_eq!(p2.eval(&q(1, 1)), q(1, 2));
    }

    #[test]
    fn derivative_trims() {
        let p = QPoly::new(vec![q(3, 4), q(0, 1), q(-3, 1), q(0, 1), q(1, 1)]);
        assert_eq!(p.derivative().to_string(), "4*x^3 - 6*x");
        assert!(QPoly::constant(q(5, 1)).derivative().is_zero());
    }
}
