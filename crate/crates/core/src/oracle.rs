//! Exact numeric certification.
//!
//! At one rational assignment of the parameters the oracle builds `P_n` and
//! `P^{(1)}_n` from the three-term recurrence, iterates `C_n, D_n` from the
//! scalar initial data, and then checks every relation and equation as a
//! literal polynomial identity in `x` for each index up to `n_max`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::derivation::{Derivation, Instance};
use crate::error::OracleError;
use crate::family::LHFamily;
use crate::scalar::Scalar;
use crate::upoly::UniPoly;
use crate::xpoly::XPolynomial;
use crate::Rational;

/// Parameter values and the largest index to test.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericContext<K: Scalar = Rational> {
    pub assignment: BTreeMap<String, K>,
    pub n_max: i64,
}

impl<K: Scalar> NumericContext<K> {
    /// The family's stored assignment, overridden by `overrides`.
    pub fn for_family(f: &LHFamily<K>, overrides: &BTreeMap<String, K>, n_max: i64) -> Result<Self, OracleError> {
        let mut assignment = f.assignments.clone();
        assignment.extend(overrides.iter().map(|(k, v)| (k.clone(), v.clone())));
        for p in &f.params {
            if !assignment.contains_key(p) {
                return Err(OracleError::MissingAssignment(p.clone()));
            }
        }
        Ok(NumericContext { assignment, n_max })
    }
}

/// `P_0 = 1`, `P_1 = x − β_0`, `P_{k+2} = (x − β_{k+1})P_{k+1} − γ_{k+1}P_k`,
/// for `count` polynomials. `gamma[0]` is ignored.
pub fn ttrr<K: Scalar>(beta: &[K], gamma: &[K], count: usize) -> Vec<UniPoly<K>> {
    let mut out: Vec<UniPoly<K>> = Vec::with_capacity(count);
    for k in 0..count {
        let p = match k {
            0 => UniPoly::one(),
            1 => UniPoly::new(vec![-beta[0].clone(), K::one()]),
            _ => {
                let lin = UniPoly::new(vec![-beta[k - 1].clone(), K::one()]);
                &(&lin * &out[k - 1]) - &out[k - 2].scale(&gamma[k - 1])
            }
        };
        out.push(p);
    }
    out
}

/// Associated polynomials of order one: the recurrence with `β_{k+1}` and
/// `γ_{k+1}` in place of `β_k`, `γ_k`.
pub fn associated1<K: Scalar>(beta: &[K], gamma: &[K], count: usize) -> Vec<UniPoly<K>> {
    ttrr(&beta[1..], &gamma[1..], count)
}

/// One verified identity at one index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub relation: String,
    pub instance: Option<String>,
    pub n: i64,
    pub zero: bool,
    /// Degree of the residual; `null` when it is zero.
    pub residual_degree: Option<usize>,
}

impl Check {
    fn new(relation: impl Into<String>, instance: Option<&Instance>, n: i64, residual: &UniPoly<impl Scalar>) -> Self {
        Check {
            relation: relation.into(),
            instance: instance.map(Instance::label),
            n,
            zero: residual.is_zero(),
            residual_degree: residual.degree(),
        }
    }
}

/// Disagreement between an iterated `C_i`/`D_i` and its declared closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CdMismatch {
    pub seq: String,
    pub index: i64,
    pub iterated: String,
    pub declared: String,
}

/// Numeric state for one family at one context.
#[derive(Clone, Debug)]
pub struct Oracle<K: Scalar = Rational> {
    family: LHFamily<K>,
    values: Vec<(usize, K)>,
    n_max: i64,
    pub beta: Vec<K>,
    /// `gamma[0] = 1`.
    pub gamma: Vec<K>,
    pub p: Vec<UniPoly<K>>,
    pub p1: Vec<UniPoly<K>>,
    pub c: Vec<UniPoly<K>>,
    /// `d[i + 1] = D_i`, starting from `D_{-1} = B`.
    d: Vec<UniPoly<K>>,
    pub cd_mismatches: Vec<CdMismatch>,
}

impl<K: Scalar> Oracle<K> {
    pub fn new(f: &LHFamily<K>, ctx: &NumericContext<K>) -> Result<Self, OracleError> {
        let values = f.param_values(&ctx.assignment)?;
        let top = (ctx.n_max + 2) as usize;
        let mut oracle = Oracle {
            family: f.clone(),
            values,
            n_max: ctx.n_max,
            beta: Vec::new(),
            gamma: vec![K::one()],
            p: Vec::new(),
            p1: Vec::new(),
            c: Vec::new(),
            d: Vec::new(),
            cd_mismatches: Vec::new(),
        };
        for i in 0..=top as i64 {
            oracle.beta.push(oracle.scalar(&f.beta_at(i)?, "beta")?);
            if i >= 1 {
                let g = oracle.scalar(&f.gamma_at(i)?, "gamma")?;
                if g.is_zero() {
                    return Err(OracleError::Singular { seq: "gamma".into(), index: i });
                }
                oracle.gamma.push(g);
            }
        }
        oracle.p = ttrr(&oracle.beta, &oracle.gamma, top + 1);
        oracle.p1 = associated1(&oracle.beta, &oracle.gamma, top);
        oracle.iterate_cd(top as i64 - 1)?;
        Ok(oracle)
    }

    /// Substitute the context into an x-polynomial (and `n` when given).
    pub fn eval(&self, p: &XPolynomial<K>, n: Option<i64>) -> Result<UniPoly<K>, OracleError> {
        let mut vals = self.values.clone();
        if let (Some(n), Some(ni)) = (n, p.ring().n()) {
            vals.push((ni, K::from_i64(n)));
        }
        let q = p.evaluate_partial(&vals)?;
        let coeffs = q.to_rational_coeffs().ok_or_else(|| {
            let ring = q.ring();
            let left = (1..ring.len()).find(|&v| q.depends_on(v)).map_or("?", |v| ring.name(v));
            OracleError::NotNumeric(left.to_string())
        })?;
        Ok(UniPoly::new(coeffs))
    }

    fn scalar(&self, p: &XPolynomial<K>, what: &str) -> Result<K, OracleError> {
        let u = self.eval(p, None)?;
        match u.degree() {
            None | Some(0) => Ok(u.coeff(0)),
            _ => Err(OracleError::NotNumeric(format!("x in {what}"))),
        }
    }

    /// `C_0 … C_{last+1}` and `D_{-1} … D_{last+1}` from the recurrences,
    /// each compared with the declared closed form.
    fn iterate_cd(&mut self, last: i64) -> Result<(), OracleError> {
        let f = self.family.clone();
        let phi = self.eval(&f.phi, None)?;
        self.c = vec![self.eval(&f.c, None)?];
        self.d = vec![self.eval(&f.b, None)?, self.eval(&f.d, None)?];
        for n in 0..=last {
            let i = n as usize;
            let xb = UniPoly::new(vec![-self.beta[i].clone(), K::one()]);
            let (c_n, d_n, d_prev) = (&self.c[i], &self.d[i + 1], &self.d[i]);
            let c_next = &(&xb * d_n).scale(&K::from_i64(2)) - c_n;
            let rhs = &(&(&d_prev.scale(&self.gamma[i]) - &phi) - &(&xb * c_n)) + &(&(&xb * &xb) * d_n);
            let d_next = rhs.scale(&self.gamma[i + 1].recip());
            for (seq, iterated, declared) in [
                ("C", &c_next, f.c_at(n + 1)),
                ("D", &d_next, f.d_at(n + 1)),
            ] {
                let declared = self.eval(&declared?, None)?;
                if &declared != iterated {
                    self.cd_mismatches.push(CdMismatch {
                        seq: seq.into(),
                        index: n + 1,
                        iterated: iterated.to_string(),
                        declared: declared.to_string(),
                    });
                }
            }
            self.c.push(c_next);
            self.d.push(d_next);
        }
        Ok(())
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    /// Iterated `C_i`.
    pub fn c_at(&self, i: i64) -> &UniPoly<K> {
        &self.c[i as usize]
    }

    /// Iterated `D_i` for `i ≥ -1`.
    pub fn d_at(&self, i: i64) -> &UniPoly<K> {
        &self.d[(i + 1) as usize]
    }

    /// `P^{(1)}_i`, zero for `i = -1`.
    fn p1_at(&self, i: i64) -> UniPoly<K> {
        if i < 0 {
            UniPoly::zero()
        } else {
            self.p1[i as usize].clone()
        }
    }

    fn constant(&self, k: &K) -> UniPoly<K> {
        UniPoly::constant(k.clone())
    }

    /// The relations between `P_n`, `P^{(1)}_n` and `C_n`, `D_n` for
    /// `0 ≤ n ≤ n_max`, with everything taken from the iterations.
    pub fn check_base_relations(&self) -> Result<Vec<Check>, OracleError> {
        let f = &self.family;
        let phi = self.eval(&f.phi, None)?;
        let b = self.eval(&f.b, None)?;
        let c0 = self.c_at(0).clone();
        let d0 = self.d_at(0).clone();
        let half = K::from_i64(2).recip();
        let mut out = Vec::new();
        for n in 0..=self.n_max {
            let i = n as usize;
            let (pn, pn1) = (&self.p[i], &self.p[i + 1]);
            let (q_prev, q) = (self.p1_at(n - 1), self.p1_at(n));
            let c1 = self.c_at(n + 1);
            let cp = (c1 + &c0).scale(&half);
            let cm = (c1 - &c0).scale(&half);
            let (dn, d1) = (self.d_at(n), self.d_at(n + 1));
            let gd = &self.constant(&self.gamma[i + 1]) * d1;

            let r1 = &(&phi * &q_prev.derivative()) - &(&(&(dn * &q) - &(&cm * &q_prev)) - &(&d0 * pn));
            let r2 = &(&phi * &pn.derivative()) - &(&(&(dn * pn1) - &(&cp * pn)) + &(&b * &q_prev));
            let r3 = &(&phi * &q.derivative()) - &(&(&(&cp * &q) - &(&gd * &q_prev)) - &(&d0 * pn1));
            let r4 = &(&(&phi * &pn1.derivative()) - &(&b * &q)) - &(&(&cm * pn1) - &(&gd * pn));
            for (name, r) in [("R1", r1), ("R2", r2), ("R3", r3), ("R4", r4)] {
                out.push(Check::new(name, None, n, &r));
            }
        }
        Ok(out)
    }

    /// `S1 … S4` with the derived coefficients, at every index covered by
    /// one of `derivations`.
    pub fn check_structure_relations(&self, derivations: &[Derivation<K>]) -> Result<Vec<Check>, OracleError> {
        let mut out = Vec::new();
        for n in 0..=self.n_max {
            let Some((d, sub)) = derivations.iter().find_map(|d| d.instance().locate(n).map(|s| (d, s))) else {
                continue;
            };
            let i = n as usize;
            let (pn, pn1) = (&self.p[i], &self.p[i + 1]);
            let (q_prev, q) = (self.p1_at(n - 1), self.p1_at(n));
            for rel in &d.relations {
                let lhs = &(&(&self.eval(&rel.g0, sub)? * &q_prev) + &(&self.eval(&rel.g1, sub)? * &q))
                    + &(&self.eval(&rel.h, sub)? * pn);
                let mut rhs = UniPoly::zero();
                for (k, c) in rel.rhs().iter().enumerate() {
                    rhs = &rhs + &(&self.eval(c, sub)? * &pn1.derivative_n(k));
                }
                out.push(Check::new(format!("S{}", rel.level), Some(&d.instance()), n, &(&lhs - &rhs)));
            }
        }
        Ok(out)
    }

    /// `Σ coeffs[i] P^{(order-i)}_{N+1}` for every `N ≤ n_max` the instance
    /// covers. A degenerate list must evaluate to all-zero coefficients.
    pub fn check_ode(&self, name: &str, coeffs: &[XPolynomial<K>], instance: &Instance) -> Result<Vec<Check>, OracleError> {
        let order = coeffs.len() - 1;
        let degenerate = coeffs.iter().all(XPolynomial::is_zero);
        let mut out = Vec::new();
        for n in 0..=self.n_max {
            let Some(sub) = instance.locate(n) else { continue };
            let target = &self.p[n as usize + 1];
            let mut residual = UniPoly::zero();
            let mut all_zero = true;
            for (i, c) in coeffs.iter().enumerate() {
                let cv = self.eval(c, sub)?;
                all_zero &= cv.is_zero();
                residual = &residual + &(&cv * &target.derivative_n(order - i));
            }
            let mut check = Check::new(name, Some(instance), n, &residual);
            if degenerate {
                check.zero &= all_zero;
            }
            out.push(check);
        }
        Ok(out)
    }

    /// `γ_{n+1}D_nD_{n+1} − ¼(C²_{n+1} − C²_0) + Φ Σ_{ν≤n} D_ν = B·D_0`.
    /// The right side vanishes for semiclassical data; for `B ≠ 0` the
    /// `B·D_0` term is what the `γ_0 D_{-1}` contribution leaves behind.
    pub fn check_rsimp(&self) -> Result<Vec<Check>, OracleError> {
        let f = &self.family;
        let phi = self.eval(&f.phi, None)?;
        let b = self.eval(&f.b, None)?;
        let c0 = self.c_at(0).clone();
        let bd0 = &b * self.d_at(0);
        let quarter = K::from_i64(4).recip();
        let name = if b.is_zero() { "R-simp" } else { "R-simp (+B*D0)" };
        let mut sum = UniPoly::zero();
        let mut out = Vec::new();
        for n in 0..=self.n_max {
            sum = &sum + self.d_at(n);
            let c1 = self.c_at(n + 1);
            let lhs = &(&(self.d_at(n) * self.d_at(n + 1)).scale(&self.gamma[n as usize + 1])
                - &(&(c1 * c1) - &(&c0 * &c0)).scale(&quarter))
                + &(&phi * &sum);
            out.push(Check::new(name, None, n, &(&lhs - &bd0)));
        }
        Ok(out)
    }

    /// Same as [`Oracle::check_rsimp`] but without the `B·D_0` term.
    pub fn check_rsimp_uncorrected(&self) -> Result<Vec<Check>, OracleError> {
        let b = self.eval(&self.family.b, None)?;
        let bd0 = &b * self.d_at(0);
        Ok(self
            .check_rsimp()?
            .into_iter()
            .map(|mut c| {
                c.relation = "R-simp (as printed)".into();
                if !bd0.is_zero() {
                    // adding B*D0 back turns a zero residual into B*D0
                    c.residual_degree = if c.zero { bd0.degree() } else { c.residual_degree };
                    c.zero = false;
                }
                c
            })
            .collect())
    }
}

/// All checks for one family: base relations, iteration agreement,
/// structure relations, R-simp and every derived equation.
#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub family: String,
    pub assignment: BTreeMap<String, String>,
    pub n_max: i64,
    pub cd_mismatches: Vec<CdMismatch>,
    pub checks: Vec<Check>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.cd_mismatches.is_empty() && self.checks.iter().all(|c| c.zero)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.zero)
    }

    pub fn summary(&self) -> String {
        let failed = self.failures().count();
        let mut s = format!(
            "{}: {} checks, {} nonzero residuals, {} C/D mismatches (n <= {})",
            self.family,
            self.checks.len(),
            failed,
            self.cd_mismatches.len(),
            self.n_max
        );
        if let Some(m) = self.cd_mismatches.first() {
            s.push_str(&format!("; first mismatch {}_{}: iterated {} vs declared {}", m.seq, m.index, m.iterated, m.declared));
        }
        if let Some(c) = self.failures().next() {
            s.push_str(&format!("; first failure {} at n = {}", c.relation, c.n));
            if let Some(i) = &c.instance {
                s.push_str(&format!(" [{i}]"));
            }
        }
        s
    }
}

/// Run the full suite against a set of derivations of `f`. Every equation in
/// each derivation is checked, plus the reduced forms passed in `extra`.
pub fn run_suite<K: Scalar>(
    f: &LHFamily<K>,
    ctx: &NumericContext<K>,
    derivations: &[Derivation<K>],
    extra: &[(String, Vec<XPolynomial<K>>, Instance)],
) -> Result<OracleReport, OracleError> {
    let oracle = Oracle::new(f, ctx)?;
    let mut checks = oracle.check_base_relations()?;
    checks.extend(oracle.check_structure_relations(derivations)?);
    checks.extend(oracle.check_rsimp()?);
    for d in derivations {
        for (name, ode) in d.odes() {
            checks.extend(oracle.check_ode(name, &ode.coeffs, &ode.instance)?);
        }
    }
    for (name, coeffs, inst) in extra {
        checks.extend(oracle.check_ode(name, coeffs, inst)?);
    }
    Ok(OracleReport {
        family: f.name.clone(),
        assignment: ctx.assignment.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
        n_max: ctx.n_max,
        cd_mismatches: oracle.cd_mismatches.clone(),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{derive, instances};
    use crate::family::bundled_source;
    use crate::QPoly;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn fam(name: &str) -> LHFamily {
        LHFamily::bundled(name).unwrap()
    }

    fn default_ctx(f: &LHFamily) -> NumericContext {
        NumericContext::for_family(f, &BTreeMap::new(), 8).unwrap()
    }

    fn poly(c: &[(i64, i64)]) -> QPoly {
        QPoly::new(c.iter().map(|&(a, b)| q(a, b)).collect())
    }

    #[test]
    fn hermite_polynomials() {
        let f = fam("hermite_classical");
        let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
        assert_eq!(o.p[0], QPoly::one());
        assert_eq!(o.p[2], poly(&[(-1, 2), (0, 1), (1, 1)]));
        assert_eq!(o.p[4], poly(&[(3, 4), (0, 1), (-3, 1), (0, 1), (1, 1)]));
        assert_eq!(o.p1[1], QPoly::x());
        assert_eq!(o.p1[2], poly(&[(-1, 1), (0, 1), (1, 1)]));
        for (k, p) in o.p.iter().enumerate() {
            assert_eq!(p.degree(), Some(k));
            assert!(p.is_monic());
        }
        // relation 1 at n = 3: 4 P_3 = P_4'
        assert_eq!(o.p[3].scale(&q(4, 1)), o.p[4].derivative());
    }

    #[test]
    fn case2_second_polynomial() {
        let f = fam("hermite_case2");
        let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
        assert_eq!(o.p[1], poly(&[(-1, 1), (1, 1)]));
        assert_eq!(o.p[2], poly(&[(-3, 2), (-1, 1), (1, 1)]));
    }

    #[test]
    fn constant_recurrence_associated_is_shift() {
        let beta = vec![q(1, 3); 8];
        let mut gamma = vec![q(2, 1); 8];
        gamma[0] = q(1, 1);
        let p = ttrr(&beta, &gamma, 7);
        let p1 = associated1(&beta, &gamma, 6);
        assert_eq!(p1[0], QPoly::one());
        // with constant coefficients only the γ at index 0 breaks the shift
        let mut g2 = gamma.clone();
        g2[1] = q(2, 1);
        assert_eq!(&p1[..5], &ttrr(&beta, &g2, 5)[..]);
        assert_eq!(p[1], p1[1]);
    }

    #[test]
    fn iterations_match_closed_forms() {
        for name in crate::family::bundled_names() {
            let f = fam(name);
            let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
            assert!(o.cd_mismatches.is_empty(), "{name}: {:?}", o.cd_mismatches);
            assert_eq!(o.c_at(0), &o.eval(&f.c, None).unwrap());
            assert_eq!(o.d_at(-1), &o.eval(&f.b, None).unwrap());
        }
        let f = fam("hermite_case1");
        let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
        assert_eq!(o.c_at(2), &poly(&[(0, 1), (-2, 1)]));
        assert_eq!(o.d_at(2), &poly(&[(-2, 1)]));
    }

    #[test]
    fn base_relations_and_rsimp_vanish() {
        for name in crate::family::bundled_names() {
            let f = fam(name);
            let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
            for c in o.check_base_relations().unwrap().iter().chain(&o.check_rsimp().unwrap()) {
                assert!(c.zero, "{name}: {c:?}");
            }
        }
    }

    #[test]
    fn uncorrected_rsimp_fails_only_with_b() {
        let f = fam("hermite_case1");
        let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
        assert!(o.check_rsimp_uncorrected().unwrap().iter().all(|c| !c.zero));
        let f = fam("hermite_case2");
        let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
        assert!(o.check_rsimp_uncorrected().unwrap().iter().all(|c| c.zero));
    }

    #[test]
    fn hermite_ode_at_three() {
        let f = fam("hermite_classical");
        let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
        let p4 = &o.p[4];
        let lhs = &(&p4.derivative_n(2) - &(&QPoly::x().scale(&q(2, 1)) * &p4.derivative())) + &p4.scale(&q(8, 1));
        assert!(lhs.is_zero());
    }

    #[test]
    fn corrupted_d_is_caught() {
        let src = bundled_source("hermite_case1").unwrap().replace(r#""D": "-2/rho""#, r#""D": "-3/rho""#);
        let f = LHFamily::<Rational>::from_json(&src).unwrap();
        let o = Oracle::new(&f, &default_ctx(&f)).unwrap();
        assert_eq!(o.cd_mismatches.first().map(|m| m.index), Some(1));
    }

    /// R1–R4 are built from iterated `C_n, D_n`, and that iteration makes
    /// them hold for any `B`; a flipped `B` shows up as a disagreement with
    /// the declared closed forms and in S1, whose coefficients use them.
    #[test]
    fn flipped_b_is_caught() {
        let f0 = fam("hermite_case1");
        let mut f = f0.clone();
        f.b = -&f0.b;
        let ctx = default_ctx(&f);
        let o = Oracle::new(&f, &ctx).unwrap();
        assert!(o.check_base_relations().unwrap().iter().all(|c| c.zero));
        assert_eq!(o.cd_mismatches.first().map(|m| (m.seq.as_str(), m.index)), Some(("D", 1)));
        let ds = vec![derive(&f, crate::family::At::Index(0)).unwrap()];
        let s1 = o.check_structure_relations(&ds).unwrap();
        assert!(s1.iter().any(|c| c.relation == "S1" && c.n == 0 && !c.zero));
        let rep = run_suite(&f, &ctx, &ds, &[]).unwrap();
        assert!(!rep.passed());
    }

    #[test]
    fn missing_assignment() {
        let f = fam("hermite_case1");
        let mut f2 = f.clone();
        f2.assignments.clear();
        assert!(matches!(
            NumericContext::for_family(&f2, &BTreeMap::new(), 8),
            Err(OracleError::MissingAssignment(_))
        ));
    }

    #[test]
    fn derived_equations_pass_on_case2_and_hermite() {
        for name in ["hermite_case2", "hermite_classical"] {
            let f = fam(name);
            let ds: Vec<_> = instances(&f, None)
                .unwrap()
                .into_iter()
                .map(|i| derive(&f, i.at()).unwrap())
                .collect();
            let rep = run_suite(&f, &default_ctx(&f), &ds, &[]).unwrap();
            assert!(rep.passed(), "{}", rep.summary());
            assert!(rep.checks.iter().any(|c| c.relation == "S4"));
            assert!(rep.checks.iter().any(|c| c.relation == "ode4_lh"));
        }
    }
}
