//! Defining data of a Laguerre–Hahn family: the Riccati coefficients
//! `Φ, B, C, D`, the recurrence coefficients `β_n, γ_n` and the closed forms
//! of `C_n, D_n`, plus the background transformations that act on them.
//!
//! Sequences are piecewise in the index. A [`ParamSeq`] holds a few explicit
//! low-index values and one closed form per residue class; closed forms are
//! polynomials in `x` whose coefficients are rational in the quotient symbol
//! `n` and the parameters.

use std::collections::BTreeMap;
use std::path::Path;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, FamilyError};
use crate::expr::parse_xpoly;
use crate::mpoly::MultiPoly;
use crate::ratfun::RationalFunction;
use crate::ring::{Ring, RingRef};
use crate::scalar::{parse_scalar, Scalar};
use crate::xpoly::XPolynomial;
use crate::Rational;

/// Closed form valid on the indices `modulus·k + residue ≥ min_index`, with
/// the body written in `n := k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch<K: Scalar = Rational> {
    pub residue: i64,
    pub modulus: i64,
    pub min_index: i64,
    pub body: XPolynomial<K>,
}

impl<K: Scalar> Branch<K> {
    fn covers(&self, idx: i64) -> bool {
        idx >= self.min_index && idx.rem_euclid(self.modulus) == self.residue
    }
}

/// Piecewise sequence over the indices `start, start+1, …`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSeq<K: Scalar = Rational> {
    name: String,
    start: i64,
    exceptional: BTreeMap<i64, XPolynomial<K>>,
    branches: Vec<Branch<K>>,
}

impl<K: Scalar> ParamSeq<K> {
    /// Build and validate: one modulus shared by all branches, and every
    /// index `≥ start` matched by exactly one exceptional entry or branch.
    pub fn new(
        name: &str,
        start: i64,
        exceptional: BTreeMap<i64, XPolynomial<K>>,
        mut branches: Vec<Branch<K>>,
    ) -> Result<Self, FamilyError> {
        let schema = |msg: String| FamilyError::Schema(format!("sequence `{name}`: {msg}"));
        let Some(first) = branches.first() else {
            return Err(schema("at least one branch is required".into()));
        };
        let m = first.modulus;
        if m < 1 {
            return Err(schema(format!("modulus must be positive, got {m}")));
        }
        for b in &branches {
            if b.modulus != m {
                return Err(schema(format!("mixed moduli {m} and {}", b.modulus)));
            }
            if !(0..m).contains(&b.residue) {
                return Err(schema(format!("residue {} is not in 0..{m}", b.residue)));
            }
        }
        if let Some((&k, _)) = exceptional.iter().next() {
            if k < start {
                return Err(FamilyError::OutOfDomain {
                    seq: name.into(),
                    index: k,
                });
            }
        }
        branches.sort_by_key(|b| (b.residue, b.min_index));

        let top = branches
            .iter()
            .map(|b| b.min_index)
            .chain(exceptional.keys().copied())
            .fold(start, i64::max);
        for idx in start..=top + m {
            let hits = exceptional.contains_key(&idx) as usize
                + branches.iter().filter(|b| b.covers(idx)).count();
            match hits {
                0 => {
                    return Err(FamilyError::UncoveredIndex {
                        seq: name.into(),
                        index: idx,
                    })
                }
                1 => {}
                _ => {
                    return Err(FamilyError::OverlappingBranches {
                        seq: name.into(),
                        index: idx,
                    })
                }
            }
        }
        Ok(ParamSeq {
            name: name.into(),
            start,
            exceptional,
            branches,
        })
    }

    /// A single closed form for every index `≥ start`.
    pub fn uniform(name: &str, start: i64, body: XPolynomial<K>) -> Self {
        ParamSeq::new(
            name,
            start,
            BTreeMap::new(),
            vec![Branch {
                residue: 0,
                modulus: 1,
                min_index: start,
                body,
            }],
        )
        .expect("a uniform sequence covers its domain")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn modulus(&self) -> i64 {
        self.branches[0].modulus
    }

    pub fn exceptional(&self) -> &BTreeMap<i64, XPolynomial<K>> {
        &self.exceptional
    }

    pub fn branches(&self) -> &[Branch<K>] {
        &self.branches
    }

    pub fn ring(&self) -> &RingRef {
        self.branches[0].body.ring()
    }

    fn n_var(&self) -> usize {
        self.ring().n().expect("sequence ring declares n")
    }

    fn branch_for(&self, idx: i64) -> Option<&Branch<K>> {
        self.branches.iter().find(|b| b.covers(idx))
    }

    /// Value at a concrete index.
    pub fn seq_at(&self, idx: i64) -> Result<XPolynomial<K>, FamilyError> {
        if idx < self.start {
            return Err(FamilyError::OutOfDomain {
                seq: self.name.clone(),
                index: idx,
            });
        }
        if let Some(v) = self.exceptional.get(&idx) {
            return Ok(v.clone());
        }
        let b = self.branch_for(idx).ok_or_else(|| FamilyError::UncoveredIndex {
            seq: self.name.clone(),
            index: idx,
        })?;
        let k = (idx - b.residue) / b.modulus;
        Ok(b.body.evaluate_partial(&[(self.n_var(), K::from_i64(k))])?)
    }

    /// Closed form of the index `m·n + residue + k` (with `m` this
    /// sequence's modulus) as a polynomial in `n`. The caller is responsible
    /// for only using it where that index is past the exceptional entries.
    pub fn seq_branch(&self, residue: i64, k: i64) -> Result<XPolynomial<K>, FamilyError> {
        Ok(self.progression(self.modulus(), residue, k)?.0)
    }

    /// Closed form of index `modulus·n + residue + k` for a progression whose
    /// modulus is a multiple of this sequence's, together with the least `n`
    /// from which the closed form is the actual value.
    pub fn progression(&self, modulus: i64, residue: i64, k: i64) -> Result<(XPolynomial<K>, i64), FamilyError> {
        let m = self.modulus();
        if modulus < 1 || modulus % m != 0 {
            return Err(FamilyError::Schema(format!(
                "sequence `{}` has modulus {m}, which does not divide {modulus}",
                self.name
            )));
        }
        let off = residue + k;
        let r = off.rem_euclid(m);
        let q = (off - r) / m;
        let b = self
            .branches
            .iter()
            .find(|b| b.residue == r)
            .expect("validated sequences cover every residue");

        let ni = self.n_var();
        let ring = self.ring();
        let affine = &MultiPoly::var(ring, ni).scale(&K::from_i64(modulus / m))
            + &MultiPoly::from_i64(ring, q);
        let body = b.body.substitute(ni, &affine)?;

        // index(n) = modulus·n + off must clear both the branch's lower bound
        // and every exceptional entry on this progression.
        let lower = b.min_index.max(self.start);
        let mut from = div_ceil(lower - off, modulus).max(0);
        for &e in self.exceptional.keys() {
            if (e - off).rem_euclid(modulus) == 0 {
                from = from.max((e - off) / modulus + 1);
            }
        }
        Ok((body, from))
    }

    /// Replace the value at `idx`, splitting the covering branch if needed.
    pub fn with_override(&self, idx: i64, value: XPolynomial<K>) -> Result<Self, FamilyError> {
        let mut exceptional = self.exceptional.clone();
        let mut branches = self.branches.clone();
        if !exceptional.contains_key(&idx) {
            let pos = branches
                .iter()
                .position(|b| b.covers(idx))
                .ok_or_else(|| FamilyError::OutOfDomain {
                    seq: self.name.clone(),
                    index: idx,
                })?;
            let b = &mut branches[pos];
            let mut j = b.min_index.max(self.start);
            while j < idx {
                if b.covers(j) {
                    exceptional.insert(j, self.seq_at(j)?);
                }
                j += 1;
            }
            b.min_index = idx + b.modulus;
        }
        exceptional.insert(idx, value);
        ParamSeq::new(&self.name, self.start, exceptional, branches)
    }

    /// `j ↦ seq(j + r)` on the same domain.
    pub fn shifted(&self, r: i64) -> Result<Self, FamilyError> {
        if r == 0 {
            return Ok(self.clone());
        }
        let exceptional = self
            .exceptional
            .iter()
            .filter(|(&e, _)| e - r >= self.start)
            .map(|(&e, v)| (e - r, v.clone()))
            .collect();
        let branches = self
            .branches
            .iter()
            .map(|b| {
                let off = b.residue - r;
                let res = off.rem_euclid(b.modulus);
                let q = (off - res) / b.modulus;
                Branch {
                    residue: res,
                    modulus: b.modulus,
                    min_index: (b.min_index - r).max(self.start),
                    body: b.body.shift_index(-q),
                }
            })
            .collect();
        ParamSeq::new(&self.name, self.start, exceptional, branches)
    }

    /// Substitute concrete values for parameters everywhere.
    pub fn evaluate_params(&self, values: &[(usize, K)]) -> Result<Self, AlgebraError> {
        Ok(ParamSeq {
            name: self.name.clone(),
            start: self.start,
            exceptional: self
                .exceptional
                .iter()
                .map(|(&k, v)| Ok((k, v.evaluate_partial(values)?)))
                .collect::<Result<_, AlgebraError>>()?,
            branches: self
                .branches
                .iter()
                .map(|b| {
                    Ok(Branch {
                        body: b.body.evaluate_partial(values)?,
                        ..b.clone()
                    })
                })
                .collect::<Result<_, AlgebraError>>()?,
        })
    }
}

fn div_ceil(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// Degrees of `Φ, ψ, B` and the class number of this representation. Zero
/// polynomials have degree `None`, standing for −∞.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub deg_phi: Option<usize>,
    pub deg_psi: Option<usize>,
    pub deg_b: Option<usize>,
    pub s: Option<i64>,
}

/// Complete defining data of a family.
#[derive(Clone, Debug)]
pub struct LHFamily<K: Scalar = Rational> {
    pub name: String,
    pub params: Vec<String>,
    pub ring: RingRef,
    pub phi: XPolynomial<K>,
    pub b: XPolynomial<K>,
    pub c: XPolynomial<K>,
    pub d: XPolynomial<K>,
    pub beta: ParamSeq<K>,
    pub gamma: ParamSeq<K>,
    pub c_seq: ParamSeq<K>,
    pub d_seq: ParamSeq<K>,
    pub assignments: BTreeMap<String, K>,
    pub regularity_notes: String,
    /// Set by [`LHFamily::affine_shift`]: the scalar `D` and every sequence
    /// still describe the unshifted family.
    pub stale_sequences: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDoc {
    name: String,
    parameters: Vec<String>,
    phi: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
    #[serde(rename = "D")]
    d: String,
    beta: SeqDoc,
    gamma: SeqDoc,
    #[serde(rename = "C_seq")]
    c_seq: SeqDoc,
    #[serde(rename = "D_seq")]
    d_seq: SeqDoc,
    #[serde(default)]
    assignments: BTreeMap<String, String>,
    #[serde(default)]
    regularity_notes: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SeqDoc {
    #[serde(default)]
    exceptional: BTreeMap<String, String>,
    branches: Vec<BranchDoc>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BranchDoc {
    residue: i64,
    modulus: i64,
    min_index: i64,
    expr: String,
}

const BUNDLED: [(&str, &str); 4] = [
    ("hermite_case1", include_str!("../families/hermite_case1.json")),
    ("hermite_case2", include_str!("../families/hermite_case2.json")),
    ("hermite_classical", include_str!("../families/hermite_classical.json")),
    ("semiclassical_class1", include_str!("../families/semiclassical_class1.json")),
];

/// Names of the families shipped with the crate.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// Source text of a bundled family file.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

fn parse_field<K: Scalar>(field: &str, src: &str, ring: &RingRef) -> Result<XPolynomial<K>, FamilyError> {
    parse_xpoly(src, ring).map_err(|source| FamilyError::Expr {
        field: field.into(),
        source,
    })
}

fn build_seq<K: Scalar>(field: &str, start: i64, doc: &SeqDoc, ring: &RingRef) -> Result<ParamSeq<K>, FamilyError> {
    let mut exceptional = BTreeMap::new();
    for (key, src) in &doc.exceptional {
        let idx: i64 = key
            .trim()
            .parse()
            .map_err(|_| FamilyError::Schema(format!("`{field}`: exceptional key `{key}` is not an integer")))?;
        exceptional.insert(idx, parse_field(&format!("{field}.exceptional.{key}"), src, ring)?);
    }
    let branches = doc
        .branches
        .iter()
        .enumerate()
        .map(|(i, b)| {
            Ok(Branch {
                residue: b.residue,
                modulus: b.modulus,
                min_index: b.min_index,
                body: parse_field(&format!("{field}.branches[{i}]"), &b.expr, ring)?,
            })
        })
        .collect::<Result<Vec<_>, FamilyError>>()?;
    ParamSeq::new(field, start, exceptional, branches)
}

fn require_x_free<K: Scalar>(field: &str, seq: &ParamSeq<K>) -> Result<(), FamilyError> {
    let xi = seq.ring().x();
    let dirty = seq.exceptional.values().any(|v| v.degree().unwrap_or(0) > 0)
        || seq.branches.iter().any(|b| b.body.degree().unwrap_or(0) > 0 || b.body.depends_on(xi));
    if dirty {
        return Err(FamilyError::Schema(format!("`{field}` must not depend on x")));
    }
    Ok(())
}

impl<K: Scalar> LHFamily<K> {
    /// Parse a family-definition document.
    pub fn from_json(text: &str) -> Result<Self, FamilyError> {
        let doc: FamilyDoc = serde_json::from_str(text)?;
        let mut seen = std::collections::BTreeSet::new();
        for p in &doc.parameters {
            let ok = p.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
                && p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok || p == "x" || p == "n" {
                return Err(FamilyError::Schema(format!("invalid parameter name `{p}`")));
            }
            if !seen.insert(p.as_str()) {
                return Err(FamilyError::Schema(format!("duplicate parameter `{p}`")));
            }
        }
        let ring = Ring::standard(&doc.parameters);

        let phi = parse_field("phi", &doc.phi, &ring)?;
        if phi.is_zero() || !phi.leading_coeff().is_one() {
            return Err(FamilyError::Schema("phi must be monic and nonzero".into()));
        }
        let b = parse_field("B", &doc.b, &ring)?;
        let c = parse_field("C", &doc.c, &ring)?;
        let d = parse_field("D", &doc.d, &ring)?;
        for (field, p) in [("phi", &phi), ("B", &b), ("C", &c), ("D", &d)] {
            if p.depends_on(1) {
                return Err(FamilyError::Schema(format!("`{field}` must not depend on n")));
            }
        }

        let beta = build_seq("beta", 0, &doc.beta, &ring)?;
        let gamma = build_seq("gamma", 1, &doc.gamma, &ring)?;
        let c_seq = build_seq("C_seq", 1, &doc.c_seq, &ring)?;
        let d_seq = build_seq("D_seq", 1, &doc.d_seq, &ring)?;
        require_x_free("beta", &beta)?;
        require_x_free("gamma", &gamma)?;

        let mut assignments = BTreeMap::new();
        for (name, value) in &doc.assignments {
            if !doc.parameters.contains(name) {
                return Err(FamilyError::Schema(format!("assignment to undeclared parameter `{name}`")));
            }
            let v = parse_scalar::<K>(value)
                .ok_or_else(|| FamilyError::Schema(format!("assignment `{name}` = `{value}` is not p/q")))?;
            assignments.insert(name.clone(), v);
        }

        Ok(LHFamily {
            name: doc.name,
            params: doc.parameters,
            ring,
            phi,
            b,
            c,
            d,
            beta,
            gamma,
            c_seq,
            d_seq,
            assignments,
            regularity_notes: doc.regularity_notes,
            stale_sequences: false,
        })
    }

    pub fn load(path: &Path) -> Result<Self, FamilyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FamilyError::Schema(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// One of the families shipped with the crate.
    pub fn bundled(name: &str) -> Result<Self, FamilyError> {
        let src = bundled_source(name).ok_or_else(|| FamilyError::Schema(format!("no bundled family `{name}`")))?;
        Self::from_json(src)
    }

    /// Common period of all sequences.
    pub fn modulus(&self) -> i64 {
        [&self.beta, &self.gamma, &self.c_seq, &self.d_seq]
            .iter()
            .fold(1, |acc, s| acc.lcm(&s.modulus()))
    }

    pub fn is_semiclassical(&self) -> bool {
        self.b.is_zero()
    }

    /// `β_i`.
    pub fn beta_at(&self, i: i64) -> Result<XPolynomial<K>, FamilyError> {
        self.beta.seq_at(i)
    }

    /// `γ_i`, with `γ_0 = 1`.
    pub fn gamma_at(&self, i: i64) -> Result<XPolynomial<K>, FamilyError> {
        if i == 0 {
            Ok(XPolynomial::one(&self.ring))
        } else {
            self.gamma.seq_at(i)
        }
    }

    /// `C_i`, with `C_0 = C`.
    pub fn c_at(&self, i: i64) -> Result<XPolynomial<K>, FamilyError> {
        if i == 0 {
            Ok(self.c.clone())
        } else {
            self.c_seq.seq_at(i)
        }
    }

    /// `D_i`, with `D_0 = D` and `D_{-1} = B`.
    pub fn d_at(&self, i: i64) -> Result<XPolynomial<K>, FamilyError> {
        match i {
            -1 => Ok(self.b.clone()),
            0 => Ok(self.d.clone()),
            _ => self.d_seq.seq_at(i),
        }
    }

    /// Value of `item` at `N + offset`, either at a concrete `N` or in closed
    /// form along `N = modulus·n + residue`. The second component is the
    /// least `n` from which the closed form holds (0 for concrete indices).
    pub fn fetch(&self, at: At, item: Item) -> Result<(XPolynomial<K>, i64), FamilyError> {
        let (seq, off) = match item {
            Item::Beta(k) => (&self.beta, k),
            Item::Gamma(k) => (&self.gamma, k),
            Item::C(k) => (&self.c_seq, k),
            Item::D(k) => (&self.d_seq, k),
        };
        match at {
            At::Index(n) => {
                let i = n + off;
                let v = match item {
                    Item::Beta(_) => self.beta_at(i)?,
                    Item::Gamma(_) => self.gamma_at(i)?,
                    Item::C(_) => self.c_at(i)?,
                    Item::D(_) => self.d_at(i)?,
                };
                Ok((v, 0))
            }
            At::Branch { modulus, residue } => seq.progression(modulus, residue, off),
        }
    }

    /// `ψ = −Φ′ − C`.
    pub fn psi(&self) -> XPolynomial<K> {
        -&(&self.phi.d_dx() + &self.c)
    }

    pub fn class_degrees(&self) -> ClassReport {
        let deg_phi = self.phi.degree();
        let deg_psi = self.psi().degree();
        let deg_b = self.b.degree();
        let lift = |d: Option<usize>, k: i64| d.map(|d| d as i64 - k);
        let s = [lift(deg_psi, 1), lift(deg_phi.max(deg_b), 2)].into_iter().flatten().max();
        ClassReport {
            deg_phi,
            deg_psi,
            deg_b,
            s,
        }
    }

    /// Shifted form under `x ↦ a·x + b`:
    /// `Φ̃ = a^{-deg Φ}Φ(ax+b)`, `ψ̃ = a^{1-deg Φ}ψ(ax+b)`, `B̃ = a^{-deg Φ}B(ax+b)`,
    /// and `C̃ = −Φ̃′ − ψ̃`. Nothing else is transformed; unless the shift is
    /// the identity the result is flagged with `stale_sequences`.
    pub fn affine_shift(&self, a: &K, b: &K) -> Result<Self, FamilyError> {
        if a.is_zero() {
            return Err(AlgebraError::InvalidAffine.into());
        }
        let ring = &self.ring;
        let ra = RationalFunction::constant(ring, a.clone());
        let rb = RationalFunction::constant(ring, b.clone());
        let deg = self.phi.degree().unwrap_or(0) as u32;
        let inv = a.recip();
        let phi = self.phi.subst_affine(&ra, &rb)?.scale_k(&inv.powi(deg));
        let bb = self.b.subst_affine(&ra, &rb)?.scale_k(&inv.powi(deg));
        let psi_scale = if deg == 0 { a.clone() } else { inv.powi(deg - 1) };
        let psi = self.psi().subst_affine(&ra, &rb)?.scale_k(&psi_scale);
        let c = -&(&phi.d_dx() + &psi);
        let identity = a.is_one() && b.is_zero();
        Ok(LHFamily {
            phi,
            b: bb,
            c,
            stale_sequences: self.stale_sequences || !identity,
            ..self.clone()
        })
    }

    /// Symbolic check of
    /// `C_{N+1} = −C_N + 2(x−β_N)D_N` and
    /// `γ_{N+1}D_{N+1} = −Φ + γ_N D_{N−1} − (x−β_N)C_N + (x−β_N)²D_N`
    /// on every residue class (closed forms) and on every low index that
    /// falls before the closed forms take over.
    pub fn verify_sr_recurrences(&self) -> Result<SrReport<K>, FamilyError> {
        let m = self.modulus();
        let mut checks = Vec::new();
        for r in 0..m {
            let at = At::Branch { modulus: m, residue: r };
            let (res, from) = self.sr_residuals(at)?;
            checks.push(SrCheck {
                label: crate::derivation::Instance::Branch { modulus: m, residue: r, min_n: from }.label(),
                sr1: res.0,
                sr2: res.1,
            });
            for k in 0..from {
                let idx = m * k + r;
                let (res, _) = self.sr_residuals(At::Index(idx))?;
                checks.push(SrCheck {
                    label: format!("N = {idx}"),
                    sr1: res.0,
                    sr2: res.1,
                });
            }
        }
        Ok(SrReport { checks })
    }

    fn sr_residuals(&self, at: At) -> Result<((XPolynomial<K>, XPolynomial<K>), i64), FamilyError> {
        let mut from = 0;
        let mut get = |item| -> Result<XPolynomial<K>, FamilyError> {
            let (v, f) = self.fetch(at, item)?;
            from = from.max(f);
            Ok(v)
        };
        let beta = get(Item::Beta(0))?;
        let gamma = get(Item::Gamma(0))?;
        let gamma1 = get(Item::Gamma(1))?;
        let c = get(Item::C(0))?;
        let c1 = get(Item::C(1))?;
        let d_prev = get(Item::D(-1))?;
        let d = get(Item::D(0))?;
        let d1 = get(Item::D(1))?;

        let xb = &XPolynomial::x(&self.ring) - &beta;
        let two = XPolynomial::from_i64(&self.ring, 2);
        let sr1 = &(&c1 + &c) - &(&(&two * &xb) * &d);
        let rhs = &(&(&(&gamma * &d_prev) - &self.phi) - &(&xb * &c)) + &(&(&xb * &xb) * &d);
        let sr2 = &(&gamma1 * &d1) - &rhs;
        Ok(((sr1, sr2), from))
    }

    /// Ring indices paired with concrete parameter values.
    pub fn param_values(&self, assignment: &BTreeMap<String, K>) -> Result<Vec<(usize, K)>, FamilyError> {
        assignment
            .iter()
            .map(|(name, v)| {
                self.ring
                    .index_of(name)
                    .filter(|&i| i >= 2)
                    .map(|i| (i, v.clone()))
                    .ok_or_else(|| FamilyError::Schema(format!("unknown parameter `{name}`")))
            })
            .collect()
    }

    /// The same family with some parameters fixed to concrete values. The
    /// ring is kept, so results stay comparable with the symbolic family.
    pub fn specialize(&self, assignment: &BTreeMap<String, K>) -> Result<Self, FamilyError> {
        let vals = self.param_values(assignment)?;
        let ev = |p: &XPolynomial<K>| p.evaluate_partial(&vals);
        Ok(LHFamily {
            phi: ev(&self.phi)?,
            b: ev(&self.b)?,
            c: ev(&self.c)?,
            d: ev(&self.d)?,
            beta: self.beta.evaluate_params(&vals)?,
            gamma: self.gamma.evaluate_params(&vals)?,
            c_seq: self.c_seq.evaluate_params(&vals)?,
            d_seq: self.d_seq.evaluate_params(&vals)?,
            ..self.clone()
        })
    }
}

/// Where to evaluate index-dependent data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum At {
    /// A concrete index `N`.
    Index(i64),
    /// The progression `N = modulus·n + residue`, symbolically in `n`.
    Branch { modulus: i64, residue: i64 },
}

/// A sequence term at offset `k` from the current index `N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Item {
    Beta(i64),
    Gamma(i64),
    C(i64),
    D(i64),
}

#[derive(Clone, Debug)]
pub struct SrCheck<K: Scalar = Rational> {
    pub label: String,
    pub sr1: XPolynomial<K>,
    pub sr2: XPolynomial<K>,
}

impl<K: Scalar> SrCheck<K> {
    pub fn passed(&self) -> bool {
        self.sr1.is_zero() && self.sr2.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct SrReport<K: Scalar = Rational> {
    pub checks: Vec<SrCheck<K>>,
}

impl<K: Scalar> SrReport<K> {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(SrCheck::passed)
    }
}

/// r-perturbed recurrence: `β̃_0 = β_0 + μ_0`, and for `1 ≤ i ≤ r`
/// `β̃_i = β_i + μ_i`, `γ̃_i = λ_i γ_i`. Values are x-free polynomials.
pub fn perturb_recurrence<K: Scalar>(
    beta: &ParamSeq<K>,
    gamma: &ParamSeq<K>,
    mu0: &XPolynomial<K>,
    mu: &[XPolynomial<K>],
    lambda: &[XPolynomial<K>],
    r: usize,
) -> Result<(ParamSeq<K>, ParamSeq<K>), FamilyError> {
    if mu.len() != r || lambda.len() != r {
        return Err(FamilyError::PerturbationLength);
    }
    if let Some(i) = lambda.iter().position(XPolynomial::is_zero) {
        return Err(FamilyError::ZeroPerturbation(i + 1));
    }
    let mut b = beta.clone();
    let mut g = gamma.clone();
    if !mu0.is_zero() {
        b = b.with_override(0, &b.seq_at(0)? + mu0)?;
    }
    for i in 1..=r {
        let (m, l) = (&mu[i - 1], &lambda[i - 1]);
        let idx = i as i64;
        if !m.is_zero() {
            b = b.with_override(idx, &b.seq_at(idx)? + m)?;
        }
        if !l.is_one_poly() {
            g = g.with_override(idx, &g.seq_at(idx)? * l)?;
        }
    }
    Ok((b, g))
}

/// Associated recurrence of order `r`: `β^{(r)}_i = β_{i+r}`, `γ^{(r)}_i = γ_{i+r}`.
pub fn associated_shift<K: Scalar>(
    beta: &ParamSeq<K>,
    gamma: &ParamSeq<K>,
    r: i64,
) -> Result<(ParamSeq<K>, ParamSeq<K>), FamilyError> {
    Ok((beta.shifted(r)?, gamma.shifted(r)?))
}

trait IsOnePoly {
    fn is_one_poly(&self) -> bool;
}

impl<K: Scalar> IsOnePoly for XPolynomial<K> {
    fn is_one_poly(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::XPoly;

    fn fam(name: &str) -> LHFamily {
        LHFamily::bundled(name).unwrap()
    }

    fn xp(f: &LHFamily, s: &str) -> XPoly {
        parse_xpoly(s, &f.ring).unwrap()
    }

    #[test]
    fn bundled_families_load() {
        for name in bundled_names() {
            let f = fam(name);
            assert_eq!(f.name, name);
        }
        assert_eq!(fam("semiclassical_class1").gamma.modulus(), 2);
        assert_eq!(fam("semiclassical_class1").modulus(), 2);
        assert_eq!(fam("hermite_case1").modulus(), 1);
    }

    #[test]
    fn seq_at_case1_gamma() {
        let f = fam("hermite_case1");
        assert_eq!(f.gamma.seq_at(1).unwrap(), xp(&f, "rho*(tau+1)/2"));
        assert_eq!(f.gamma.seq_at(4).unwrap(), xp(&f, "(tau+4)/2"));
        assert!(matches!(f.gamma.seq_at(0), Err(FamilyError::OutOfDomain { .. })));
        assert_eq!(f.gamma.seq_branch(0, 1).unwrap(), xp(&f, "(n+tau+1)/2"));
    }

    #[test]
    fn seq_branch_of_constant_is_constant() {
        let f = fam("hermite_case1");
        for k in -2..3 {
            assert_eq!(f.d_seq.seq_branch(0, k).unwrap(), xp(&f, "-2"));
        }
    }

    #[test]
    fn seq_at_agrees_with_branch_forms() {
        let f = fam("semiclassical_class1");
        let ni = f.ring.n().unwrap();
        for seq in [&f.beta, &f.gamma, &f.c_seq, &f.d_seq] {
            for b in seq.branches() {
                for k in 0..5 {
                    let idx = b.modulus * k + b.residue;
                    if idx < b.min_index || seq.exceptional().contains_key(&idx) {
                        continue;
                    }
                    let closed = seq
                        .seq_branch(b.residue, 0)
                        .unwrap()
                        .evaluate_partial(&[(ni, Rational::from_integer(k.into()))])
                        .unwrap();
                    assert_eq!(seq.seq_at(idx).unwrap(), closed, "{} at {idx}", seq.name());
                }
            }
        }
    }

    #[test]
    fn progression_over_a_finer_modulus() {
        let f = fam("hermite_case1");
        // γ at index 2n + 1 + 1 along the even progression
        let (g, from) = f.fetch(At::Branch { modulus: 2, residue: 0 }, Item::Gamma(1)).unwrap();
        assert_eq!(g, xp(&f, "(2*n+1+tau)/2"));
        assert_eq!(from, 1);
        let (d, from) = f.fetch(At::Branch { modulus: 1, residue: 0 }, Item::D(-1)).unwrap();
        assert_eq!(d, xp(&f, "-2"));
        assert_eq!(from, 2);
    }

    fn doc_with_beta(beta: &str) -> String {
        let src = bundled_source("hermite_classical").unwrap();
        let mut v: serde_json::Value = serde_json::from_str(src).unwrap();
        v["beta"] = serde_json::from_str(beta).unwrap();
        v.to_string()
    }

    #[test]
    fn coverage_errors() {
        let even_only = doc_with_beta(r#"{"branches":[{"residue":0,"modulus":2,"min_index":0,"expr":"0"}]}"#);
        assert!(matches!(
            LHFamily::<Rational>::from_json(&even_only),
            Err(FamilyError::UncoveredIndex { index: 1, .. })
        ));
        let overlap = doc_with_beta(
            r#"{"exceptional":{"0":"1"},"branches":[{"residue":0,"modulus":1,"min_index":0,"expr":"0"}]}"#,
        );
        assert!(matches!(
            LHFamily::<Rational>::from_json(&overlap),
            Err(FamilyError::OverlappingBranches { index: 0, .. })
        ));
        let mixed = doc_with_beta(
            r#"{"branches":[{"residue":0,"modulus":1,"min_index":0,"expr":"0"},{"residue":1,"modulus":2,"min_index":0,"expr":"0"}]}"#,
        );
        assert!(matches!(LHFamily::<Rational>::from_json(&mixed), Err(FamilyError::Schema(_))));
        let bad_expr = doc_with_beta(r#"{"branches":[{"residue":0,"modulus":1,"min_index":0,"expr":"2x"}]}"#);
        assert!(matches!(LHFamily::<Rational>::from_json(&bad_expr), Err(FamilyError::Expr { .. })));
        let x_dep = doc_with_beta(r#"{"branches":[{"residue":0,"modulus":1,"min_index":0,"expr":"x"}]}"#);
        assert!(matches!(LHFamily::<Rational>::from_json(&x_dep), Err(FamilyError::Schema(_))));
        assert!(matches!(LHFamily::<Rational>::from_json("{}"), Err(FamilyError::Json(_))));
    }

    #[test]
    fn psi_examples() {
        let h = fam("hermite_classical");
        assert_eq!(h.psi(), xp(&h, "2*x"));
        let s = fam("semiclassical_class1");
        assert_eq!(s.psi(), xp(&s, "-(2*alpha+2*beta+4)*x^2 + x + 2*beta + 1"));
    }

    #[test]
    fn class_degrees_examples() {
        let c1 = fam("hermite_case1").class_degrees();
        assert_eq!((c1.deg_phi, c1.deg_psi, c1.deg_b, c1.s), (Some(0), Some(1), Some(2), Some(0)));
        let s7 = fam("semiclassical_class1").class_degrees();
        assert_eq!((s7.deg_phi, s7.deg_psi, s7.deg_b, s7.s), (Some(3), Some(2), None, Some(1)));
        let h = fam("hermite_classical").class_degrees();
        assert_eq!((h.deg_b, h.s), (None, Some(0)));
    }

    #[test]
    fn affine_shift_examples() {
        let f = fam("hermite_case2");
        let one = Rational::from_integer(1.into());
        let zero = Rational::from_integer(0.into());
        let same = f.affine_shift(&one, &zero).unwrap();
        assert_eq!((same.phi.clone(), same.b.clone(), same.c.clone()), (f.phi.clone(), f.b.clone(), f.c.clone()));
        assert!(!same.stale_sequences);

        let lam = xp(&f, "lambda").constant_value().unwrap();
        let shifted = f
            .affine_shift(&one, &zero)
            .unwrap()
            .b
            .subst_affine(&RationalFunction::one(&f.ring), &-lam.clone())
            .unwrap();
        assert_eq!(shifted, xp(&f, "2*x^2 - 6*lambda*x + 4*lambda^2 + 1 - rho"));

        let two = Rational::from_integer(2.into());
        let s = fam("semiclassical_class1");
        let t = s.affine_shift(&two, &one).unwrap();
        assert!(t.stale_sequences);
        assert_eq!(t.phi, xp(&s, "x^3 + 3/2*x^2 + 1/2*x"));
        assert_eq!(t.class_degrees().s, s.class_degrees().s);
    }

    #[test]
    fn sr_recurrences_hold_on_bundled_families() {
        for name in bundled_names() {
            let rep = fam(name).verify_sr_recurrences().unwrap();
            for c in &rep.checks {
                assert!(c.passed(), "{name} {}: {} | {}", c.label, c.sr1, c.sr2);
            }
        }
    }

    #[test]
    fn corrupted_family_fails_sr() {
        let src = bundled_source("hermite_case1").unwrap().replace(r#""expr": "-2" }"#, r#""expr": "2" }"#);
        let f = LHFamily::<Rational>::from_json(&src).unwrap();
        assert!(!f.verify_sr_recurrences().unwrap().passed());
    }

    #[test]
    fn perturbation_and_association() {
        let h = fam("hermite_classical");
        let ring = Ring::standard(&["lambda", "rho"]);
        let lift = |p: &ParamSeq| {
            let b = &p.branches()[0];
            let body = parse_xpoly(&b.body.to_string(), &ring).unwrap();
            ParamSeq::new(p.name(), p.start(), BTreeMap::new(), vec![Branch { body, ..b.clone() }]).unwrap()
        };
        let (beta, gamma) = (lift(&h.beta), lift(&h.gamma));
        let p = |s: &str| parse_xpoly::<Rational>(s, &ring).unwrap();

        let (b0, g0) = perturb_recurrence(&beta, &gamma, &p("0"), &[], &[], 0).unwrap();
        assert_eq!((&b0, &g0), (&beta, &gamma));
        let (b1, g1) = perturb_recurrence(&beta, &gamma, &p("0"), &[p("0")], &[p("1")], 1).unwrap();
        assert_eq!((&b1, &g1), (&beta, &gamma));

        let (bt, gt) = perturb_recurrence(&beta, &gamma, &p("lambda"), &[p("0")], &[p("rho")], 1).unwrap();
        assert_eq!(bt.seq_at(0).unwrap(), p("lambda"));
        assert_eq!(gt.seq_at(1).unwrap(), p("rho/2"));
        for i in 2..8 {
            assert_eq!(gt.seq_at(i).unwrap(), gamma.seq_at(i).unwrap());
            assert_eq!(bt.seq_at(i).unwrap(), beta.seq_at(i).unwrap());
        }
        let (ba, ga) = associated_shift(&bt, &gt, 1).unwrap();
        for i in 1..8 {
            assert_eq!(ba.seq_at(i).unwrap(), beta.seq_at(i + 1).unwrap());
            assert_eq!(ga.seq_at(i).unwrap(), gamma.seq_at(i + 1).unwrap());
        }
        assert!(matches!(
            perturb_recurrence(&beta, &gamma, &p("0"), &[p("0")], &[p("0")], 1),
            Err(FamilyError::ZeroPerturbation(1))
        ));
        assert!(matches!(
            perturb_recurrence(&beta, &gamma, &p("0"), &[], &[p("1")], 1),
            Err(FamilyError::PerturbationLength)
        ));
    }

    #[test]
    fn case2_associated_is_hermite() {
        let c2 = fam("hermite_case2");
        let (b, g) = associated_shift(&c2.beta, &c2.gamma, 1).unwrap();
        for i in 0..8 {
            assert!(b.seq_at(i).unwrap().is_zero());
        }
        for i in 1..8 {
            assert_eq!(g.seq_at(i).unwrap(), xp(&c2, &format!("{i}/2")));
        }
    }

    #[test]
    fn case1_associated_shift() {
        let f = fam("hermite_case1");
        let (b, g) = associated_shift(&f.beta, &f.gamma, 1).unwrap();
        for i in 0..6 {
            assert!(b.seq_at(i).unwrap().is_zero());
        }
        assert_eq!(g.seq_branch(0, 1).unwrap(), xp(&f, "(n+tau+2)/2"));
        assert_eq!(g.seq_at(1).unwrap(), xp(&f, "(tau+2)/2"));
    }
}
