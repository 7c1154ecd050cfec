//! Structure relations, the fourth-order equation and its semiclassical and
//! classical reductions, built from the data of one family instance.
//!
//! An instance is either a residue progression `N = modulus·n + residue`
//! (closed forms in `n`) or a single concrete index. Every formula below
//! only needs `Φ, B, C_0, D_0` and the four index-dependent inputs
//! `γ_{N+1}, C_{N+1}, D_N, D_{N+1}`; those are gathered once in [`Inputs`].

use serde::Serialize;

use crate::error::DeriveError;
use crate::family::{At, Item, LHFamily};
use crate::ratfun::RationalFunction;
use crate::ring::RingRef;
use crate::scalar::Scalar;
use crate::xpoly::XPolynomial;
use crate::Rational;

/// Which indices a derived object is valid for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    /// `N = modulus·n + residue` for every `n ≥ min_n`, symbolically in `n`.
    Branch { modulus: i64, residue: i64, min_n: i64 },
    /// The single index `N`.
    Index { index: i64 },
}

impl Instance {
    pub fn at(&self) -> At {
        match *self {
            Instance::Branch { modulus, residue, .. } => At::Branch { modulus, residue },
            Instance::Index { index } => At::Index(index),
        }
    }

    /// Whether the polynomial index `N` is described by this instance, and
    /// if so the value of `n` to substitute (`None` for concrete instances).
    pub fn locate(&self, index: i64) -> Option<Option<i64>> {
        match *self {
            Instance::Branch { modulus, residue, min_n } => {
                let k = index - residue;
                (k.rem_euclid(modulus) == 0 && k / modulus >= min_n).then_some(Some(k / modulus))
            }
            Instance::Index { index: i } => (i == index).then_some(None),
        }
    }

    /// Short label, e.g. `N = 2n+1 (n >= 1)` or `N = 0`.
    pub fn label(&self) -> String {
        match *self {
            Instance::Branch { modulus, residue, min_n } => {
                let lead = if modulus == 1 { "n".to_string() } else { format!("{modulus}n") };
                let body = if residue == 0 { lead } else { format!("{lead}+{residue}") };
                format!("N = {body} (n >= {min_n})")
            }
            Instance::Index { index } => format!("N = {index}"),
        }
    }

    /// File-name friendly tag, e.g. `r1m2` or `idx0`.
    pub fn slug(&self) -> String {
        match *self {
            Instance::Branch { modulus, residue, .. } => format!("r{residue}m{modulus}"),
            Instance::Index { index } => format!("idx{index}"),
        }
    }
}

/// Everything the formulas consume, for one instance.
#[derive(Clone, Debug)]
pub struct Inputs<K: Scalar = Rational> {
    pub ring: RingRef,
    pub instance: Instance,
    pub phi: XPolynomial<K>,
    pub b: XPolynomial<K>,
    pub c0: XPolynomial<K>,
    pub d0: XPolynomial<K>,
    /// `γ_{N+1}`
    pub gamma1: XPolynomial<K>,
    /// `C_{N+1}`
    pub c1: XPolynomial<K>,
    /// `D_N`
    pub dn: XPolynomial<K>,
    /// `D_{N+1}`
    pub d1: XPolynomial<K>,
}

impl<K: Scalar> Inputs<K> {
    /// Gather the inputs at a concrete index or along a residue progression.
    /// For a progression, `min_n` is the first `n` at which every closed form
    /// used is the true value.
    pub fn from_family(f: &LHFamily<K>, at: At) -> Result<Self, DeriveError> {
        if let At::Index(i) = at {
            if i < 0 {
                return Err(DeriveError::MissingBranch(i));
            }
        }
        let mut min_n = 0;
        let mut get = |item| -> Result<XPolynomial<K>, DeriveError> {
            let (v, from) = f.fetch(at, item)?;
            min_n = min_n.max(from);
            Ok(v)
        };
        let gamma1 = get(Item::Gamma(1))?;
        let c1 = get(Item::C(1))?;
        let dn = get(Item::D(0))?;
        let d1 = get(Item::D(1))?;
        let instance = match at {
            At::Branch { modulus, residue } => Instance::Branch { modulus, residue, min_n },
            At::Index(index) => Instance::Index { index },
        };
        Ok(Inputs {
            ring: f.ring.clone(),
            instance,
            phi: f.phi.clone(),
            b: f.b.clone(),
            c0: f.c.clone(),
            d0: f.d.clone(),
            gamma1,
            c1,
            dn,
            d1,
        })
    }

    pub fn is_semiclassical(&self) -> bool {
        self.b.is_zero()
    }

    fn half(&self, p: &XPolynomial<K>) -> XPolynomial<K> {
        p.scale_k(&K::from_i64(2).recip())
    }

    fn int(&self, c: i64) -> XPolynomial<K> {
        XPolynomial::from_i64(&self.ring, c)
    }

    /// `½(C_{N+1} + C_0)`
    fn c_plus(&self) -> XPolynomial<K> {
        self.half(&(&self.c1 + &self.c0))
    }

    /// `½(C_{N+1} − C_0)`
    fn c_minus(&self) -> XPolynomial<K> {
        self.half(&(&self.c1 - &self.c0))
    }
}

/// `G_{0,k}P^{(1)}_{N-1} + G_{1,k}P^{(1)}_N + H_k P_N
///  = Φ^k P^{(k)}_{N+1} + Σ_j M_{j,k} P^{(j)}_{N+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureRelation<K: Scalar = Rational> {
    pub level: usize,
    pub g0: XPolynomial<K>,
    pub g1: XPolynomial<K>,
    pub h: XPolynomial<K>,
    /// `m[j] = M_{j,k}` for `0 ≤ j < k`.
    pub m: Vec<XPolynomial<K>>,
    pub phi_power: XPolynomial<K>,
}

impl<K: Scalar> StructureRelation<K> {
    /// Right-hand side as coefficients of `P, P', …, P^{(k)}`.
    pub fn rhs(&self) -> Vec<XPolynomial<K>> {
        let mut out = self.m.clone();
        out.push(self.phi_power.clone());
        out
    }

    /// Named coefficients of this level, e.g. `("G03", …)`.
    pub fn named(&self) -> Vec<(String, XPolynomial<K>)> {
        let k = self.level;
        let mut out = vec![
            (format!("G0{k}"), self.g0.clone()),
            (format!("G1{k}"), self.g1.clone()),
            (format!("H{k}"), self.h.clone()),
        ];
        for j in (0..k).rev() {
            out.push((format!("M{j}{k}"), self.m[j].clone()));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.g0.is_zero() && self.g1.is_zero() && self.h.is_zero() && self.rhs().iter().all(XPolynomial::is_zero)
    }
}

/// A linear ODE in `P_{N+1}`, coefficients listed from the highest
/// derivative down.
#[derive(Clone, Debug, PartialEq)]
pub struct OdeResult<K: Scalar = Rational> {
    pub order: usize,
    pub coeffs: Vec<XPolynomial<K>>,
    pub instance: Instance,
    pub degenerate: bool,
}

impl<K: Scalar> OdeResult<K> {
    fn new(coeffs: Vec<XPolynomial<K>>, instance: Instance) -> Self {
        let degenerate = coeffs.iter().all(XPolynomial::is_zero);
        OdeResult {
            order: coeffs.len() - 1,
            coeffs,
            instance,
            degenerate,
        }
    }

    /// Coefficient of `P^{(k)}_{N+1}`.
    pub fn coeff_of_derivative(&self, k: usize) -> &XPolynomial<K> {
        &self.coeffs[self.order - k]
    }

    /// All coefficients with `n` replaced by a value.
    pub fn at_n(&self, n: i64) -> Result<Vec<XPolynomial<K>>, DeriveError> {
        let Some(ni) = self.coeffs[0].ring().n() else {
            return Ok(self.coeffs.clone());
        };
        Ok(self
            .coeffs
            .iter()
            .map(|c| c.evaluate_partial(&[(ni, K::from_i64(n))]))
            .collect::<Result<_, _>>()?)
    }
}

/// Whether `a` and `b` are proportional coefficient lists:
/// `a_i·b_j = a_j·b_i` for every pair.
pub fn proportional<K: Scalar>(a: &[XPolynomial<K>], b: &[XPolynomial<K>]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return false;
            }
        }
    }
    true
}

/// Indices where `ours` and `theirs` disagree once one common factor is
/// allowed. The factor is anchored at whichever index gives the most
/// agreements, so a single bad entry shows up as a single index.
pub fn disagreements<K: Scalar>(ours: &[XPolynomial<K>], theirs: &[XPolynomial<K>]) -> Vec<usize> {
    assert_eq!(ours.len(), theirs.len(), "coefficient lists of different length");
    let agrees = |r: usize, i: usize| &ours[i] * &theirs[r] == &ours[r] * &theirs[i];
    let mut best: Option<Vec<usize>> = None;
    for r in 0..ours.len() {
        if ours[r].is_zero() || theirs[r].is_zero() {
            continue;
        }
        let bad: Vec<usize> = (0..ours.len()).filter(|&i| !agrees(r, i)).collect();
        if best.as_ref().map_or(true, |b| bad.len() < b.len()) {
            best = Some(bad);
        }
    }
    best.unwrap_or_else(|| (0..ours.len()).filter(|&i| ours[i].is_zero() != theirs[i].is_zero()).collect())
}

/// The x-free factor `u` with `ours[i] = u·theirs[i]` on the agreeing
/// indices, if there is one.
pub fn common_unit<K: Scalar>(ours: &[XPolynomial<K>], theirs: &[XPolynomial<K>]) -> Option<RationalFunction<K>> {
    let bad = disagreements(ours, theirs);
    let r = (0..ours.len()).find(|i| !bad.contains(i) && !ours[*i].is_zero())?;
    let u = ours[r].leading_coeff().checked_div(&theirs[r].leading_coeff()).ok()?;
    (theirs[r].scale(&u) == ours[r]).then_some(u)
}

/// `W(f, g) = f g′ − f′ g`
pub fn wronskian<K: Scalar>(f: &XPolynomial<K>, g: &XPolynomial<K>) -> XPolynomial<K> {
    &(f * &g.d_dx()) - &(&f.d_dx() * g)
}

/// One step of the differentiate-and-eliminate recursion: from level-k
/// `(G0, G1, H)` to level k+1.
fn raise<K: Scalar>(inp: &Inputs<K>, g0: &XPolynomial<K>, g1: &XPolynomial<K>, h: &XPolynomial<K>) -> [XPolynomial<K>; 3] {
    let phi = &inp.phi;
    let (cp, cm) = (inp.c_plus(), inp.c_minus());
    let gd = &inp.gamma1 * &inp.d1;
    let g0n = &(&(&(phi * &g0.d_dx()) - &(&cm * g0)) - &(&gd * g1)) + &(&inp.b * h);
    let g1n = &(&(&inp.dn * g0) + &(&cp * g1)) + &(phi * &g1.d_dx());
    let hn = &(&(phi * &h.d_dx()) - &(&inp.d0 * g0)) - &(&cp * h);
    [g0n, g1n, hn]
}

/// The four structure relations. Levels 1 to 3 use the closed formulas;
/// level 4 is obtained from level 3 by [`raise`].
pub fn build_relations<K: Scalar>(inp: &Inputs<K>) -> [StructureRelation<K>; 4] {
    let ring = &inp.ring;
    let phi = &inp.phi;
    let dphi = phi.d_dx();
    let b = &inp.b;
    let (g, d1, dn, d0) = (&inp.gamma1, &inp.d1, &inp.dn, &inp.d0);
    let cp = inp.c_plus();
    let cm = inp.c_minus();
    let sum_c = &inp.c1 + &inp.c0;
    let phi2 = phi * phi;

    // level 1
    let m01 = -&cm;
    let r1 = StructureRelation {
        level: 1,
        g0: XPolynomial::zero(ring),
        g1: b.clone(),
        h: -&(g * d1),
        m: vec![m01.clone()],
        phi_power: phi.clone(),
    };

    // level 2
    let g02 = &(&inp.int(-2) * g) * &(b * d1);
    let g12 = &(&cp * b) + &(phi * &b.d_dx());
    let h2 = g * &(&(&cp * d1) - &(phi * &d1.d_dx()));
    let m12 = phi * &(&dphi + &m01);
    let m02 = &(&(phi * &m01.d_dx()) + &(b * d0)) + &(g * &(dn * d1));
    let r2 = StructureRelation {
        level: 2,
        g0: g02,
        g1: g12,
        h: h2.clone(),
        m: vec![m02.clone(), m12.clone()],
        phi_power: phi2.clone(),
    };

    // level 3
    let bd1 = b * d1;
    let g03 = g * &(&(&(d1 * &(&inp.c1 - &inp.c0)) * b) - &(&(&inp.int(3) * phi) * &bd1.d_dx()));
    let quarter_sq = inp.half(&inp.half(&(&sum_c * &sum_c)));
    let g13 = &(&(b * &(&(&quarter_sq - &(&(&inp.int(2) * g) * &(dn * d1))) + &(phi * &cp.d_dx())))
        + &(&(phi * &b.d_dx()) * &(&sum_c + &dphi)))
        + &(&phi2 * &b.d_dx_n(2));
    let h3 = &(&(&(g * &(&(&(&inp.int(2) * b) * d0) + &(&cp.d_dx() * phi))) - &(g * &quarter_sq)) * d1)
        + &(&(&(g * phi) * &(&sum_c - &dphi)) * &d1.d_dx());
    let h3 = &h3 - &(&(g * &phi2) * &d1.d_dx_n(2));
    let m23 = phi * &(&m12 + &(&(&inp.int(2) * phi) * &dphi));
    let m13 = phi * &(&m02 + &m12.d_dx());
    let m03 = &(&(phi * &m02.d_dx()) + &(d0 * &r2.g1)) - &(dn * &h2);
    let r3 = StructureRelation {
        level: 3,
        g0: g03,
        g1: g13,
        h: h3,
        m: vec![m03.clone(), m13.clone(), m23.clone()],
        phi_power: &phi2 * phi,
    };

    // level 4
    let [g04, g14, h4] = raise(inp, &r3.g0, &r3.g1, &r3.h);
    let m34 = phi * &(&m23 + &(&(&inp.int(3) * &phi2) * &dphi));
    let m24 = phi * &(&m23.d_dx() + &m13);
    let m14 = phi * &(&m13.d_dx() + &m03);
    let m04 = &(&(phi * &m03.d_dx()) + &(d0 * &r3.g1)) - &(dn * &r3.h);
    let r4 = StructureRelation {
        level: 4,
        g0: g04,
        g1: g14,
        h: h4,
        m: vec![m04, m14, m24, m34],
        phi_power: &phi2 * &phi2,
    };

    [r1, r2, r3, r4]
}

/// `Δ_1 … Δ_4` (index 0 holds `Δ_1`): `Δ_k` is the 3×3 minor of the
/// `(G0, G1, H)` matrix with row `k` removed.
pub fn determinants<K: Scalar>(rels: &[StructureRelation<K>; 4]) -> [XPolynomial<K>; 4] {
    let det3 = |a: &StructureRelation<K>, b: &StructureRelation<K>, c: &StructureRelation<K>| {
        let t1 = &a.g0 * &(&(&b.g1 * &c.h) - &(&c.g1 * &b.h));
        let t2 = &a.g1 * &(&(&b.g0 * &c.h) - &(&c.g0 * &b.h));
        let t3 = &a.h * &(&(&b.g0 * &c.g1) - &(&c.g0 * &b.g1));
        &(&t1 - &t2) + &t3
    };
    let [r1, r2, r3, r4] = rels;
    [det3(r2, r3, r4), det3(r1, r3, r4), det3(r1, r2, r4), det3(r1, r2, r3)]
}

/// The fourth-order equation `𝒜P'''' + ℬP''' + 𝒞P'' + 𝒟P' + ℰP = 0`.
pub fn build_ode4<K: Scalar>(inp: &Inputs<K>, rels: &[StructureRelation<K>; 4]) -> OdeResult<K> {
    let [d1, d2, d3, d4] = determinants(rels);
    let m = |j: usize, k: usize| &rels[k - 1].m[j];
    let phi = &inp.phi;
    let phi2 = phi * phi;
    let a = &(&phi2 * &phi2) * &d4;
    let b = &(m(3, 4) * &d4) - &(&(&phi2 * phi) * &d3);
    let c = &(&(m(2, 4) * &d4) - &(m(2, 3) * &d3)) + &(&phi2 * &d2);
    let d = &(&(&(m(1, 4) * &d4) - &(m(1, 3) * &d3)) + &(m(1, 2) * &d2)) - &(phi * &d1);
    let e = &(&(&(m(0, 4) * &d4) - &(m(0, 3) * &d3)) + &(m(0, 2) * &d2)) - &(m(0, 1) * &d1);
    OdeResult::new(vec![a, b, c, d, e], inp.instance)
}

fn require_semiclassical<K: Scalar>(inp: &Inputs<K>) -> Result<(), DeriveError> {
    if inp.is_semiclassical() {
        Ok(())
    } else {
        Err(DeriveError::SemiclassicalRequired)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    I,
    II,
}

/// Second-order equation of a semiclassical family, in either form.
pub fn build_semiclassical_ode2<K: Scalar>(
    inp: &Inputs<K>,
    rels: &[StructureRelation<K>; 4],
    form: Form,
) -> Result<OdeResult<K>, DeriveError> {
    require_semiclassical(inp)?;
    let phi = &inp.phi;
    let coeffs = match form {
        Form::I => {
            let (h1, h2) = (&rels[0].h, &rels[1].h);
            let (m01, m02, m12) = (&rels[0].m[0], &rels[1].m[0], &rels[1].m[1]);
            vec![
                &(phi * phi) * h1,
                &(m12 * h1) - &(phi * h2),
                &(m02 * h1) - &(m01 * h2),
            ]
        }
        Form::II => {
            let d1 = &inp.d1;
            let dd1 = d1.d_dx();
            let cm = inp.c_minus();
            let bracket = &(&(&(&inp.gamma1 * &inp.dn) * d1) - &inp.half(&inp.half(&(&(&inp.c1 * &inp.c1) - &(&inp.c0 * &inp.c0)))))
                - &(phi * &cm.d_dx());
            vec![
                &(phi * phi) * d1,
                phi * &(&(&(&phi.d_dx() + &inp.c0) * d1) - &(phi * &dd1)),
                &(d1 * &bracket) + &(&(&cm * phi) * &dd1),
            ]
        }
    };
    Ok(OdeResult::new(coeffs, inp.instance))
}

/// Third- (`order = 3`) or fourth-order (`order = 4`) equation of a
/// semiclassical family.
pub fn build_semiclassical_ode34<K: Scalar>(
    inp: &Inputs<K>,
    rels: &[StructureRelation<K>; 4],
    order: usize,
) -> Result<OdeResult<K>, DeriveError> {
    require_semiclassical(inp)?;
    assert!(order == 3 || order == 4, "order must be 3 or 4");
    let phi = &inp.phi;
    let h1 = &rels[0].h;
    let m01 = &rels[0].m[0];
    let top = &rels[order - 1];
    let mut coeffs = vec![&top.phi_power * h1];
    for j in (2..order).rev() {
        coeffs.push(&top.m[j] * h1);
    }
    coeffs.push(&(&top.m[1] * h1) - &(phi * &top.h));
    coeffs.push(&(&top.m[0] * h1) - &(m01 * &top.h));
    Ok(OdeResult::new(coeffs, inp.instance))
}

/// `Σ_{ν=0}^{N} D_ν = −[γ_{N+1}D_N D_{N+1} − ¼(C²_{N+1} − C²_0)] / Φ`.
pub fn sum_d_via_identity<K: Scalar>(inp: &Inputs<K>) -> Result<XPolynomial<K>, DeriveError> {
    require_semiclassical(inp)?;
    let bracket = &(&(&inp.gamma1 * &inp.dn) * &inp.d1) - &inp.half(&inp.half(&(&(&inp.c1 * &inp.c1) - &(&inp.c0 * &inp.c0))));
    match bracket.divide_exact(&inp.phi) {
        Ok(q) => Ok(-q),
        Err(_) => Err(DeriveError::IdentityViolated(format!(
            "Phi does not divide gamma_(N+1) D_N D_(N+1) - (C_(N+1)^2 - C_0^2)/4 on {}",
            inp.instance.label()
        ))),
    }
}

/// `J P'' + K P' + L P = 0` with `J = ΦD_{N+1}`,
/// `K = C_0 D_{N+1} − W(Φ, D_{N+1})`,
/// `L = W(½(C_{N+1} − C_0), D_{N+1}) − D_{N+1} Σ D_ν`.
pub fn build_wronskian_form<K: Scalar>(inp: &Inputs<K>) -> Result<OdeResult<K>, DeriveError> {
    let sum = sum_d_via_identity(inp)?;
    let d1 = &inp.d1;
    let coeffs = vec![
        &inp.phi * d1,
        &(&inp.c0 * d1) - &wronskian(&inp.phi, d1),
        &wronskian(&inp.c_minus(), d1) - &(d1 * &sum),
    ];
    Ok(OdeResult::new(coeffs, inp.instance))
}

/// `(Φ, Φ′ + C_0, −[Σ D_ν + ½(C′_{N+1} − C′_0)])` for a classical family.
pub fn build_classical_ode<K: Scalar>(inp: &Inputs<K>) -> Result<OdeResult<K>, DeriveError> {
    if !inp.is_semiclassical() {
        return Err(DeriveError::ClassicalRequired("B is not identically zero".into()));
    }
    if inp.phi.degree().unwrap_or(0) > 2 {
        return Err(DeriveError::ClassicalRequired("deg Phi exceeds 2".into()));
    }
    let psi = -&(&inp.phi.d_dx() + &inp.c0);
    if psi.degree() != Some(1) {
        return Err(DeriveError::ClassicalRequired("deg psi is not 1".into()));
    }
    if inp.d1.is_zero() || !inp.d1.is_constant() {
        return Err(DeriveError::ClassicalRequired("D_(N+1) is not a nonzero constant in x".into()));
    }
    let sum = sum_d_via_identity(inp)?;
    let coeffs = vec![
        inp.phi.clone(),
        &inp.phi.d_dx() + &inp.c0,
        -&(&sum + &inp.c_minus().d_dx()),
    ];
    Ok(OdeResult::new(coeffs, inp.instance))
}

/// Everything the semiclassical corollaries give for one instance.
#[derive(Clone, Debug)]
pub struct SemiclassicalOdes<K: Scalar = Rational> {
    pub form_i: OdeResult<K>,
    pub form_ii: OdeResult<K>,
    pub wronskian: OdeResult<K>,
    pub order3: OdeResult<K>,
    pub order4: OdeResult<K>,
    /// `None` when the family is not classical; the reason is kept.
    pub classical: Result<OdeResult<K>, String>,
    pub sum_d: XPolynomial<K>,
}

/// Full derivation for one instance.
#[derive(Clone, Debug)]
pub struct Derivation<K: Scalar = Rational> {
    pub inputs: Inputs<K>,
    pub relations: [StructureRelation<K>; 4],
    pub ode4: OdeResult<K>,
    pub semiclassical: Option<SemiclassicalOdes<K>>,
}

impl<K: Scalar> Derivation<K> {
    pub fn instance(&self) -> Instance {
        self.inputs.instance
    }

    /// Every equation produced, labelled.
    pub fn odes(&self) -> Vec<(&'static str, &OdeResult<K>)> {
        let mut out = vec![("ode4_lh", &self.ode4)];
        if let Some(s) = &self.semiclassical {
            out.push(("ode2_form_i", &s.form_i));
            out.push(("ode2_form_ii", &s.form_ii));
            out.push(("ode2_wronskian", &s.wronskian));
            out.push(("ode3", &s.order3));
            out.push(("ode4_semiclassical", &s.order4));
            if let Ok(c) = &s.classical {
                out.push(("ode2_classical", c));
            }
        }
        out
    }
}

pub fn derive<K: Scalar>(f: &LHFamily<K>, at: At) -> Result<Derivation<K>, DeriveError> {
    let inputs = Inputs::from_family(f, at)?;
    let relations = build_relations(&inputs);
    let ode4 = build_ode4(&inputs, &relations);
    let semiclassical = if inputs.is_semiclassical() {
        Some(SemiclassicalOdes {
            form_i: build_semiclassical_ode2(&inputs, &relations, Form::I)?,
            form_ii: build_semiclassical_ode2(&inputs, &relations, Form::II)?,
            wronskian: build_wronskian_form(&inputs)?,
            order3: build_semiclassical_ode34(&inputs, &relations, 3)?,
            order4: build_semiclassical_ode34(&inputs, &relations, 4)?,
            classical: build_classical_ode(&inputs).map_err(|e| e.to_string()),
            sum_d: sum_d_via_identity(&inputs)?,
        })
    } else {
        None
    };
    Ok(Derivation {
        inputs,
        relations,
        ode4,
        semiclassical,
    })
}

/// The instances covering residue `r` of the family's period: the generic
/// progression and, before it takes over, each low index separately.
pub fn instances_for_residue<K: Scalar>(f: &LHFamily<K>, residue: i64) -> Result<Vec<Instance>, DeriveError> {
    let m = f.modulus();
    if !(0..m).contains(&residue) {
        return Err(DeriveError::MissingBranch(residue));
    }
    let generic = Inputs::from_family(f, At::Branch { modulus: m, residue })?.instance;
    let Instance::Branch { min_n, .. } = generic else { unreachable!() };
    let mut out = vec![generic];
    out.extend((0..min_n).map(|k| Instance::Index { index: m * k + residue }));
    Ok(out)
}

/// Instances for every residue, or for the listed ones.
pub fn instances<K: Scalar>(f: &LHFamily<K>, residues: Option<&[i64]>) -> Result<Vec<Instance>, DeriveError> {
    let all: Vec<i64> = (0..f.modulus()).collect();
    let mut out = Vec::new();
    for &r in residues.unwrap_or(&all) {
        out.extend(instances_for_residue(f, r)?);
    }
    Ok(out)
}

/// Whether a concrete instance's coefficients equal the generic closed form
/// evaluated at the corresponding `n`.
pub fn matches_generic<K: Scalar>(generic: &OdeResult<K>, concrete: &OdeResult<K>) -> Result<bool, DeriveError> {
    let (Instance::Branch { modulus, residue, .. }, Instance::Index { index }) = (generic.instance, concrete.instance) else {
        return Ok(false);
    };
    if (index - residue).rem_euclid(modulus) != 0 {
        return Ok(false);
    }
    let at = generic.at_n((index - residue) / modulus);
    Ok(at? == concrete.coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_xpoly;
    use crate::XPoly;

    fn fam(name: &str) -> LHFamily {
        LHFamily::bundled(name).unwrap()
    }

    fn generic(f: &LHFamily) -> Inputs {
        Inputs::from_family(f, At::Branch { modulus: f.modulus(), residue: 0 }).unwrap()
    }

    fn xp(f: &LHFamily, s: &str) -> XPoly {
        parse_xpoly(s, &f.ring).unwrap()
    }

    #[test]
    fn case1_level1() {
        let f = fam("hermite_case1");
        let inp = generic(&f);
        assert_eq!(inp.instance, Instance::Branch { modulus: 1, residue: 0, min_n: 1 });
        let rels = build_relations(&inp);
        assert_eq!(rels[0].g1, f.b);
        assert_eq!(rels[0].h, xp(&f, "n+tau+1"));
        assert_eq!(rels[0].m[0], xp(&f, "2/rho*(x*(rho-1)+lambda)"));
        assert!(rels[0].g0.is_zero());
    }

    #[test]
    fn hermite_relation2() {
        let f = fam("hermite_classical");
        let rels = build_relations(&generic(&f));
        let r2 = &rels[1];
        assert!(r2.g0.is_zero() && r2.g1.is_zero());
        assert_eq!(r2.h, xp(&f, "2*(n+1)*x"));
        assert!(r2.m[1].is_zero());
        assert_eq!(r2.m[0], xp(&f, "2*(n+1)"));
    }

    #[test]
    fn case2_level4() {
        let f = fam("hermite_case2");
        let rels = build_relations(&generic(&f));
        assert!(rels[3].h.is_zero());
        assert!(rels[3].m[1].is_zero());
        assert!(rels[3].m[0].is_zero());
    }

    #[test]
    fn closed_level3_agrees_with_recursion() {
        for name in crate::family::bundled_names() {
            let f = fam(name);
            for inst in instances(&f, None).unwrap() {
                let inp = Inputs::from_family(&f, inst.at()).unwrap();
                let rels = build_relations(&inp);
                let [g0, g1, h] = raise(&inp, &rels[1].g0, &rels[1].g1, &rels[1].h);
                assert_eq!((g0, g1, h), (rels[2].g0.clone(), rels[2].g1.clone(), rels[2].h.clone()), "{name} {inst:?}");
                let [g0, g1, h] = raise(&inp, &rels[0].g0, &rels[0].g1, &rels[0].h);
                assert_eq!((g0, g1, h), (rels[1].g0.clone(), rels[1].g1.clone(), rels[1].h.clone()), "{name} {inst:?}");
            }
        }
    }

    #[test]
    fn semiclassical_degeneracy() {
        for name in ["hermite_classical", "semiclassical_class1"] {
            let f = fam(name);
            for inst in instances(&f, None).unwrap() {
                let inp = Inputs::from_family(&f, inst.at()).unwrap();
                let rels = build_relations(&inp);
                assert!(rels.iter().all(|r| r.g0.is_zero() && r.g1.is_zero()));
                let ode = build_ode4(&inp, &rels);
                assert!(ode.degenerate);
                assert!(determinants(&rels).iter().all(XPolynomial::is_zero));
            }
        }
    }

    /// Expanding the 4×4 determinant along the `F` column with `F_k` kept as
    /// coefficient vectors over `P, P', …` gives `−(ℰ, 𝒟, 𝒞, ℬ, 𝒜)`; putting
    /// the `G0` column in place of `F` gives zero.
    #[test]
    fn determinant_expansion() {
        let f = fam("hermite_case2");
        let inp = generic(&f);
        let rels = build_relations(&inp);
        let dets = determinants(&rels);
        let zero = XPoly::zero(&f.ring);
        let mut acc = vec![zero.clone(); 5];
        let mut g0_col = zero.clone();
        for (k, rel) in rels.iter().enumerate() {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            let dk = dets[k].scale_k(&Rational::from_integer(sign.into()));
            for (j, c) in rel.rhs().iter().enumerate() {
                acc[j] = &acc[j] + &(&dk * c);
            }
            g0_col = &g0_col + &(&dk * &rel.g0);
        }
        let ode = build_ode4(&inp, &rels);
        for j in 0..5 {
            assert_eq!(acc[j], -ode.coeff_of_derivative(j), "P^({j})");
        }
        assert!(g0_col.is_zero());
        assert!(!ode.degenerate);
    }

    #[test]
    fn hermite_semiclassical_outputs() {
        let f = fam("hermite_classical");
        let d = derive(&f, At::Branch { modulus: 1, residue: 0 }).unwrap();
        let s = d.semiclassical.as_ref().unwrap();
        let c = |v: &[&str]| v.iter().map(|e| xp(&f, e)).collect::<Vec<_>>();
        assert!(proportional(&s.form_ii.coeffs, &c(&["1", "-2*x", "2*(n+1)"])));
        assert!(proportional(&s.order3.coeffs, &c(&["1", "0", "-4*x^2+2*n", "4*x*(n+1)"])));
        assert!(proportional(
            &s.order4.coeffs,
            &c(&["1", "0", "2*(n+1)", "4*x*(-2*x^2+n-2)", "8*(x^2+1)*(n+1)"])
        ));
        assert_eq!(s.wronskian.coeffs, c(&["-2", "4*x", "-4*(n+1)"]));
        assert_eq!(s.sum_d, xp(&f, "-2*(n+1)"));
        assert_eq!(s.classical.as_ref().unwrap().coeffs, c(&["1", "-2*x", "2*(n+1)"]));
    }

    #[test]
    fn form_i_is_minus_gamma_times_form_ii() {
        for name in ["hermite_classical", "semiclassical_class1"] {
            let f = fam(name);
            for inst in instances(&f, None).unwrap() {
                let d = derive(&f, inst.at()).unwrap();
                let s = d.semiclassical.unwrap();
                let g = -&d.inputs.gamma1;
                for (a, b) in s.form_i.coeffs.iter().zip(&s.form_ii.coeffs) {
                    assert_eq!(a, &(&g * b), "{name} {inst:?}");
                }
                assert!(proportional(&s.wronskian.coeffs, &s.form_ii.coeffs), "{name} {inst:?}");
            }
        }
    }

    #[test]
    fn disagreements_locate_single_bad_entry() {
        let f = fam("hermite_case1");
        let ours = c_list(&f, &["2*x", "4", "6*(n+1)"]);
        let theirs = c_list(&f, &["x", "2", "3*n"]);
        assert_eq!(disagreements(&ours, &theirs), [2]);
        assert_eq!(common_unit(&ours, &theirs).unwrap().to_string(), "2");
        assert!(disagreements(&ours, &c_list(&f, &["-x", "-2", "-3*(n+1)"])).is_empty());
    }

    fn c_list(f: &LHFamily, items: &[&str]) -> Vec<XPoly> {
        items.iter().map(|s| xp(f, s)).collect()
    }

    #[test]
    fn guards() {
        let c1 = fam("hermite_case1");
        let inp = generic(&c1);
        let rels = build_relations(&inp);
        assert!(matches!(build_semiclassical_ode2(&inp, &rels, Form::I), Err(DeriveError::SemiclassicalRequired)));
        assert!(matches!(build_semiclassical_ode34(&inp, &rels, 3), Err(DeriveError::SemiclassicalRequired)));
        assert!(matches!(build_wronskian_form(&inp), Err(DeriveError::SemiclassicalRequired)));
        let s7 = fam("semiclassical_class1");
        assert!(matches!(build_classical_ode(&generic(&s7)), Err(DeriveError::ClassicalRequired(_))));
    }

    #[test]
    fn wronskian_of_self_vanishes() {
        let f = fam("semiclassical_class1");
        let p = xp(&f, "(alpha+n)*x^3 - x + beta");
        assert!(wronskian(&p, &p).is_zero());
    }

    #[test]
    fn sum_d_at_zero_is_d0() {
        for name in ["hermite_classical", "semiclassical_class1"] {
            let f = fam(name);
            let inp = Inputs::from_family(&f, At::Index(0)).unwrap();
            assert_eq!(sum_d_via_identity(&inp).unwrap(), f.d, "{name}");
        }
    }

    #[test]
    fn identity_sum_matches_direct_partial_sums() {
        let f = fam("semiclassical_class1");
        let ni = f.ring.n().unwrap();
        for r in 0..2 {
            let inp = Inputs::from_family(&f, At::Branch { modulus: 2, residue: r }).unwrap();
            let closed = sum_d_via_identity(&inp).unwrap();
            let mut direct = XPoly::zero(&f.ring);
            for idx in 0..10 {
                direct = &direct + &f.d_at(idx).unwrap();
                if idx % 2 == r {
                    let k = Rational::from_integer(((idx - r) / 2).into());
                    assert_eq!(closed.evaluate_partial(&[(ni, k)]).unwrap(), direct, "N = {idx}");
                }
            }
        }
        // the odd-branch sum is not a multiple of x + 1: at N = 1 it is
        // D_0 + D_1 = 2(2α+2β+3)x − 2
        let odd = sum_d_via_identity(&Inputs::from_family(&f, At::Index(1)).unwrap()).unwrap();
        assert_eq!(odd, xp(&f, "2*(2*alpha+2*beta+3)*x - 2"));
        assert!(odd.divide_exact(&xp(&f, "x+1")).is_err());
    }

    #[test]
    fn case1_instances() {
        let f = fam("hermite_case1");
        assert_eq!(
            instances(&f, None).unwrap(),
            vec![Instance::Branch { modulus: 1, residue: 0, min_n: 1 }, Instance::Index { index: 0 }]
        );
        let s7 = fam("semiclassical_class1");
        let inst = instances(&s7, None).unwrap();
        assert_eq!(inst[0], Instance::Branch { modulus: 2, residue: 0, min_n: 1 });
        assert!(inst.contains(&Instance::Index { index: 0 }));
    }
}
