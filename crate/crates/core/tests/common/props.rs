//! Kernel properties, shared by the property suite and the acceptance run.

use lhode::expr::{parse, Expr};
use lhode::gcd::{cofactors, gcd, gcd_many};
use lhode::xpoly::XPolynomial;
use lhode::{MPoly, RatFun, XPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const CASES: u32 = 512;

pub fn config() -> Config {
    Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn leibniz(p: &XPoly, q: &XPoly) -> Result<(), TestCaseError> {
    let lhs = (p * q).d_dx();
    let rhs = &(&p.d_dx() * q) + &(p * &q.d_dx());
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

/// `g | a`, `g | b`, and the cofactors have a constant gcd. Inputs share
/// the factor `c` so the gcd is usually nontrivial.
pub fn gcd_divides(a: &MPoly, b: &MPoly, c: &MPoly) -> Result<(), TestCaseError> {
    let (a, b) = (a * c, b * c);
    let g = gcd(&a, &b);
    if a.is_zero() && b.is_zero() {
        prop_assert!(g.is_zero());
        return Ok(());
    }
    prop_assert!(!g.is_zero());
    let (ca, cb) = cofactors(&a, &b, &g);
    prop_assert_eq!(&(&ca * &g), &a);
    prop_assert_eq!(&(&cb * &g), &b);
    prop_assert!(gcd(&ca, &cb).is_constant(), "cofactors {} and {} share a factor", ca, cb);
    if !c.is_zero() {
        prop_assert!(g.divide_exact(&c.primitive_part()).is_ok());
    }
    let many = gcd_many([&a, &b].into_iter().filter(|p| !p.is_zero()));
    prop_assert_eq!(many, g.primitive_part());
    Ok(())
}

pub fn theta_reconstruction(p: &XPoly, c: &RatFun) -> Result<(), TestCaseError> {
    let ring = p.ring();
    let x_minus_c = &XPolynomial::x(ring) - &XPolynomial::constant(c.clone());
    let rebuilt = &(&x_minus_c * &p.theta_c(c)) + &XPolynomial::constant(p.eval_at(c));
    prop_assert_eq!(&rebuilt, p);
    Ok(())
}

pub fn shift_round_trip(p: &XPoly, k: i64) -> Result<(), TestCaseError> {
    prop_assert_eq!(&p.shift_index(k).shift_index(-k), p);
    Ok(())
}

pub fn ratfun_shift_round_trip(f: &RatFun, k: i64) -> Result<(), TestCaseError> {
    let ni = f.ring().n().unwrap();
    let kk = lhode::Rational::from_integer(k.into());
    prop_assert_eq!(&f.shift_var(ni, &kk).shift_var(ni, &(-kk.clone())), f);
    Ok(())
}

pub fn parser_round_trip(e: &Expr) -> Result<(), TestCaseError> {
    let printed = e.to_string();
    let once = parse(&printed, &["a", "b"]).map_err(|err| TestCaseError::fail(format!("{printed}: {err}")))?;
    let twice = parse(&once.to_string(), &["a", "b"]).map_err(|err| TestCaseError::fail(err.to_string()))?;
    prop_assert_eq!(once, twice);
    Ok(())
}

/// Runs `CASES` random instances; returns the number run and the first
/// failure, if any.
pub fn run<S, F>(strategy: S, check: F) -> Result<u32, String>
where
    S: Strategy,
    F: Fn(S::Value) -> Result<(), TestCaseError>,
{
    let mut runner = TestRunner::new(config());
    runner.run(&strategy, check).map(|_| CASES).map_err(|e| e.to_string())
}
