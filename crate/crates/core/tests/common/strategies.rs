//! Random small polynomials for the property tests.

use lhode::expr::Expr;
use lhode::mpoly::MultiPoly;
use lhode::ratfun::RationalFunction;
use lhode::ring::{Monomial, Ring, RingRef};
use lhode::xpoly::XPolynomial;
use lhode::{MPoly, RatFun, Rational, XPoly};
use num_bigint::BigUint;
use proptest::prelude::*;

/// `x, n, a`: enough variables to exercise the recursive gcd.
pub fn ring() -> RingRef {
    Ring::standard(&["a"])
}

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(p, q)| Rational::new(p.into(), q.into()))
}

fn terms(max_x: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Rational, [u32; 3])>> {
    prop::collection::vec((rational(), [0..=max_x, 0u32..=2, 0u32..=2]), 0..=max_terms)
}

fn build(r: &RingRef, terms: Vec<(Rational, [u32; 3])>) -> MPoly {
    MultiPoly::from_terms(r, terms.into_iter().map(|(c, e)| (Monomial::from_exponents(e.to_vec()), c)))
}

pub fn mpoly() -> impl Strategy<Value = MPoly> {
    terms(3, 5).prop_map(|t| build(&ring(), t))
}

/// Nonzero and free of `x`: a legal denominator.
pub fn denominator() -> impl Strategy<Value = MPoly> {
    terms(0, 3)
        .prop_map(|t| build(&ring(), t))
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn ratfun() -> impl Strategy<Value = RatFun> {
    (terms(0, 4), denominator())
        .prop_map(|(t, d)| RationalFunction::new(build(&ring(), t), d).expect("nonzero denominator"))
}

/// Coefficients in `x` are rational functions of `n, a`.
pub fn xpoly() -> impl Strategy<Value = XPoly> {
    (mpoly(), denominator()).prop_map(|(p, d)| {
        XPolynomial::from_mpoly(&p).div_scalar(&RationalFunction::from_poly(d))
    })
}

fn literal() -> impl Strategy<Value = Expr> {
    (0u32..40, prop::option::of(1u32..9)).prop_map(|(n, d)| Expr::Literal {
        num: BigUint::from(n),
        den: d.map(BigUint::from),
    })
}

/// Expression trees over `x, n, a, b`.
pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        literal(),
        prop::sample::select(vec!["x", "n", "a", "b"]).prop_map(|s| Expr::Ident(s.to_string())),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
        ]
    })
}
