//! Indeterminate rings and exponent vectors.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Ordered list of indeterminate names. Fixed once created; shared by `Arc`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ring {
    names: Vec<String>,
}

pub type RingRef = Arc<Ring>;

/// Name of the main variable.
pub const X: &str = "x";
/// Name of the sequence index.
pub const N: &str = "n";

impl Ring {
    pub fn new<S: AsRef<str>>(names: &[S]) -> RingRef {
        Arc::new(Ring {
            names: names.iter().map(|s| s.as_ref().to_string()).collect(),
        })
    }

    /// `{x, n} ∪ params`, with `x` at index 0 and `n` at index 1.
    pub fn standard<S: AsRef<str>>(params: &[S]) -> RingRef {
        let mut names = vec![X.to_string(), N.to_string()];
        names.extend(params.iter().map(|p| p.as_ref().to_string()));
        Arc::new(Ring { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Index of `x`; panics if the ring has no main variable.
    pub fn x(&self) -> usize {
        self.index_of(X).expect("ring does not declare x")
    }

    pub fn n(&self) -> Option<usize> {
        self.index_of(N)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(", "))
    }
}

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then the earlier variable wins).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, idx: usize, exp: u32) -> Self {
        let mut e = vec![0; nvars];
        e[idx] = exp;
        Monomial(e)
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, idx: usize) -> u32 {
        self.0[idx]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    pub fn with_exp(&self, idx: usize, exp: u32) -> Monomial {
        let mut e = self.0.clone();
        e[idx] = exp;
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grlex_order() {
        let a = Monomial::from_exponents(vec![2, 0]);
        let b = Monomial::from_exponents(vec![1, 1]);
        let c = Monomial::from_exponents(vec![0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert!(Monomial::one(2) < b);
    }

    #[test]
    fn standard_ring_layout() {
        let r = Ring::standard(&["tau", "rho"]);
        assert_eq!(r.x(), 0);
        assert_eq!(r.n(), Some(1));
        assert_eq!(r.index_of("rho"), Some(3));
        assert_eq!(r.to_string(), "[x, n, tau, rho]");
    }
}
