//! Multivariate GCD over an exact field.
//!
//! Recursive on a chosen main variable: split off contents (which are
//! themselves polynomials in the remaining variables), run a subresultant
//! remainder sequence on the primitive parts, and reassemble.



use crate::mpoly::MultiPoly;
use crate::ring::Monomial;
use crate::scalar::{rational_gcd, Scalar};

type Coeffs<K> = Vec<MultiPoly<K>>;

/// Greatest common divisor of `a` and `b`.
///
/// The result is `q * p` where `q` is the positive rational gcd of all
/// coefficients of both inputs and `p` is content-free with a positive
/// leading coefficient. `gcd(p, 0)` is `p` up to sign.
pub fn gcd<K: Scalar>(a: &MultiPoly<K>, b: &MultiPoly<K>) -> MultiPoly<K> {
    if a.is_zero() {
        return normalize(b);
    }
    if b.is_zero() {
        return normalize(a);
    }
    let q = rational_gcd(&a.content(), &b.content());
    let p = primitive_gcd(&a.primitive_part(), &b.primitive_part());
    p.scale(&q)
}

/// Content-free, positive-leading gcd of `a` and `b` (the primitive part of
/// [`gcd`]).
pub fn gcd_primitive<K: Scalar>(a: &MultiPoly<K>, b: &MultiPoly<K>) -> MultiPoly<K> {
    if a.is_zero() {
        return b.primitive_part();
    }
    if b.is_zero() {
        return a.primitive_part();
    }
    primitive_gcd(&a.primitive_part(), &b.primitive_part())
}

/// Primitive gcd of a list; stops early once a unit is reached.
///
/// Variables that provably do not occur in the gcd are split away first
/// (the gcd then divides every coefficient with respect to them), which
/// keeps the remainder sequences small when the inputs are large
/// polynomials with a low-dimensional common factor.
pub fn gcd_many<'a, K: Scalar, I>(items: I) -> MultiPoly<K>
where
    I: IntoIterator<Item = &'a MultiPoly<K>>,
{
    let list: Vec<MultiPoly<K>> = items.into_iter().cloned().collect();
    assert!(!list.is_empty(), "gcd_many needs at least one polynomial");
    let ring = list[0].ring().clone();
    let list: Vec<_> = list.into_iter().filter(|p| !p.is_zero()).collect();
    if list.is_empty() {
        return MultiPoly::zero(&ring);
    }
    gcd_list(list)
}

fn gcd_list<K: Scalar>(list: Vec<MultiPoly<K>>) -> MultiPoly<K> {
    let ring = list[0].ring().clone();
    let mut list: Vec<_> = list.iter().map(MultiPoly::primitive_part).collect();
    list.sort_by_key(MultiPoly::num_terms);
    list.dedup();
    if list.len() == 1 {
        return list.pop().unwrap();
    }
    if list.iter().any(MultiPoly::is_constant) {
        return MultiPoly::one(&ring);
    }

    let mut vars: Vec<usize> = list.iter().flat_map(|p| p.variables()).collect();
    vars.sort_unstable();
    vars.dedup();
    if vars.len() > 1 {
        if let Some(v) = vars.iter().copied().find(|&v| absent_from_gcd(&list, v)) {
            let coeffs = list
                .iter()
                .flat_map(|p| p.coeffs_in(v))
                .filter(|c| !c.is_zero())
                .collect();
            return gcd_list(coeffs);
        }
    }

    for &v in &vars {
        if let Some(g) = gcd_by_univariate_image(&list, v) {
            return g;
        }
    }

    let mut g = list[0].clone();
    for p in &list[1..] {
        if g.is_one() {
            break;
        }
        if p.divide_exact(&g).is_ok() {
            continue;
        }
        g = primitive_gcd(&g, p);
    }
    g
}

/// Split off the content in `v`, then guess the primitive part from one
/// univariate image and confirm it by trial division.
///
/// With the leading coefficient of the first primitive part nonvanishing at
/// the point, the image gcd `h` has at least the degree of the true
/// primitive gcd. If `h` (a polynomial in `v` alone) divides every primitive
/// part it also divides the gcd, and the two agree up to a constant. When
/// the gcd has coefficients involving other variables the division fails
/// and `None` is returned.
fn gcd_by_univariate_image<K: Scalar>(list: &[MultiPoly<K>], v: usize) -> Option<MultiPoly<K>> {
    if list.iter().any(|p| !p.depends_on(v)) {
        return None;
    }
    let mut contents = Vec::with_capacity(list.len());
    let mut prims = Vec::with_capacity(list.len());
    for p in list {
        let coeffs: Vec<_> = p.coeffs_in(v).into_iter().filter(|c| !c.is_zero()).collect();
        let c = gcd_list(coeffs);
        prims.push(p.divide_exact(&c).expect("content divides"));
        contents.push(c);
    }
    let point = lucky_point(&prims, v)?;
    let mut h = prims[0].evaluate_partial(&point);
    for p in &prims[1..] {
        if h.is_constant() {
            break;
        }
        h = gcd_primitive(&h, &p.evaluate_partial(&point));
    }
    if !h.is_constant() && !prims.iter().all(|p| p.divide_exact(&h).is_ok()) {
        return None;
    }
    let c = gcd_list(contents);
    Some(if h.is_constant() { c } else { (&c * &h).primitive_part() })
}

/// Integer values for every variable other than `v` at which the leading
/// coefficient in `v` of `list[0]` does not vanish.
fn lucky_point<K: Scalar>(list: &[MultiPoly<K>], v: usize) -> Option<Vec<(usize, K)>> {
    let mut others: Vec<usize> = list.iter().flat_map(|p| p.variables()).filter(|&w| w != v).collect();
    others.sort_unstable();
    others.dedup();
    let lead = list[0].coeffs_in(v).pop()?;
    const PRIMES: [i64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    (0..3).find_map(|attempt| {
        let point: Vec<(usize, K)> = others
            .iter()
            .enumerate()
            .map(|(i, &w)| (w, K::from_i64(PRIMES[(i + 5 * attempt) % PRIMES.len()] + attempt as i64)))
            .collect();
        (!lead.evaluate_partial(&point).is_zero()).then_some(point)
    })
}

/// True when `v` certainly does not occur in the gcd of `list`.
///
/// Either some member is free of `v`, or at a point where the leading
/// coefficient (in `v`) of the first member survives, the univariate
/// images have a constant gcd. The image of the true gcd divides every
/// image and keeps its degree in `v` at such a point, so both tests are
/// sound; a failed test only means "unknown".
fn absent_from_gcd<K: Scalar>(list: &[MultiPoly<K>], v: usize) -> bool {
    if list.iter().any(|p| !p.depends_on(v)) {
        return true;
    }
    let Some(point) = lucky_point(list, v) else {
        return false;
    };
    let mut g = list[0].evaluate_partial(&point);
    for p in &list[1..] {
        if g.is_constant() {
            break;
        }
        g = gcd_primitive(&g, &p.evaluate_partial(&point));
    }
    g.is_constant()
}

/// Least common multiple, normalized like [`gcd_primitive`].
pub fn lcm_primitive<K: Scalar>(a: &MultiPoly<K>, b: &MultiPoly<K>) -> MultiPoly<K> {
    if a.is_zero() || b.is_zero() {
        return MultiPoly::zero(a.ring());
    }
    let a = a.primitive_part();
    let b = b.primitive_part();
    if a.is_one() {
        return b;
    }
    if b.is_one() || a == b {
        return a;
    }
    let g = primitive_gcd(&a, &b);
    (&a * &b.divide_exact(&g).expect("gcd divides")).primitive_part()
}

fn normalize<K: Scalar>(p: &MultiPoly<K>) -> MultiPoly<K> {
    if p.leading_coeff().is_negative() {
        -p
    } else {
        p.clone()
    }
}

/// Both inputs nonzero and primitive; output primitive.
fn primitive_gcd<K: Scalar>(a: &MultiPoly<K>, b: &MultiPoly<K>) -> MultiPoly<K> {
    let ring = a.ring().clone();
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(&ring);
    }
    if a == b {
        return a.clone();
    }

    // Pull out the common monomial factor so the remaining work sees no
    // spurious powers of a single variable.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = ma.gcd(&mb);
    let (a, b) = if ma.is_one() && mb.is_one() {
        (a.clone(), b.clone())
    } else {
        (strip_monomial(a, &ma), strip_monomial(b, &mb))
    };
    let mono_poly = MultiPoly::monomial(&ring, mono, K::one());
    if a.is_monomial() || b.is_monomial() {
        // A monomial-free polynomial shares nothing with a monomial.
        return mono_poly;
    }

    let rest = gcd_stripped(&a, &b);
    (&mono_poly * &rest).primitive_part()
}

fn strip_monomial<K: Scalar>(p: &MultiPoly<K>, m: &Monomial) -> MultiPoly<K> {
    MultiPoly::from_terms(
        p.ring(),
        p.terms().map(|(k, c)| (m.quotient_of(k), c.clone())),
    )
}

fn gcd_stripped<K: Scalar>(a: &MultiPoly<K>, b: &MultiPoly<K>) -> MultiPoly<K> {
    let ring = a.ring().clone();
    let va = a.variables();
    let vb = b.variables();

    // A variable present in only one argument cannot divide the gcd, so the
    // gcd divides every coefficient with respect to it.
    if let Some(&v) = va.iter().find(|v| !vb.contains(v)) {
        return gcd_with_coeffs(b, &a.coeffs_in(v));
    }
    if let Some(&v) = vb.iter().find(|v| !va.contains(v)) {
        return gcd_with_coeffs(a, &b.coeffs_in(v));
    }

    let v = *va
        .iter()
        .min_by_key(|&&v| a.degree_in(v).unwrap().max(b.degree_in(v).unwrap()))
        .expect("nonconstant");

    let ca = a.coeffs_in(v);
    let cb = b.coeffs_in(v);
    let cont_a = content_of(&ca);
    let cont_b = content_of(&cb);
    let cont = if cont_a.is_one() || cont_b.is_one() {
        MultiPoly::one(&ring)
    } else {
        primitive_gcd(&cont_a, &cont_b)
    };
    let pa = divide_all(&ca, &cont_a);
    let pb = divide_all(&cb, &cont_b);
    let g = subresultant_gcd(pa, pb);
    let g = divide_all(&g, &content_of(&g));
    let g = MultiPoly::from_coeffs_in(&ring, v, &g);
    (&cont * &g).primitive_part()
}

fn gcd_with_coeffs<K: Scalar>(p: &MultiPoly<K>, coeffs: &Coeffs<K>) -> MultiPoly<K> {
    let mut g = p.primitive_part();
    for c in coeffs {
        if c.is_zero() {
            continue;
        }
        if g.is_one() {
            break;
        }
        g = primitive_gcd(&g, &c.primitive_part());
    }
    g
}

/// Primitive gcd of the nonzero coefficients.
fn content_of<K: Scalar>(coeffs: &Coeffs<K>) -> MultiPoly<K> {
    let mut nz = coeffs.iter().filter(|c| !c.is_zero());
    let first = nz.next().expect("nonzero polynomial");
    let mut g = first.primitive_part();
    for c in nz {
        if g.is_one() {
            break;
        }
        g = primitive_gcd(&g, &c.primitive_part());
    }
    g
}

fn divide_all<K: Scalar>(coeffs: &Coeffs<K>, d: &MultiPoly<K>) -> Coeffs<K> {
    if d.is_one() {
        return coeffs.clone();
    }
    coeffs
        .iter()
        .map(|c| c.divide_exact(d).expect("content divides coefficient"))
        .collect()
}

fn degree<K: Scalar>(p: &Coeffs<K>) -> usize {
    p.len() - 1
}

fn trim<K: Scalar>(mut p: Coeffs<K>) -> Coeffs<K> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    p
}

fn is_zero<K: Scalar>(p: &Coeffs<K>) -> bool {
    p.iter().all(MultiPoly::is_zero)
}

/// Pseudo-remainder of `a` by `b` in the main variable.
fn prem<K: Scalar>(a: &Coeffs<K>, b: &Coeffs<K>) -> Coeffs<K> {
    let db = degree(b);
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    let mut steps = degree(a) + 1 - db;
    while !is_zero(&r) && degree(&r) >= db {
        let lr = r.last().unwrap().clone();
        let shift = degree(&r) - db;
        let mut next: Coeffs<K> = r.iter().map(|c| c * &lb).collect();
        for (i, c) in b.iter().enumerate() {
            next[i + shift] = &next[i + shift] - &(c * &lr);
        }
        r = trim(next);
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        r = r.iter().map(|c| c * &f).collect();
    }
    r
}

/// Subresultant PRS; inputs primitive in the main variable.
fn subresultant_gcd<K: Scalar>(a: Coeffs<K>, b: Coeffs<K>) -> Coeffs<K> {
    let ring = a[0].ring().clone();
    let (mut a, mut b) = if degree(&a) >= degree(&b) { (a, b) } else { (b, a) };
    let mut g = MultiPoly::one(&ring);
    let mut h = MultiPoly::one(&ring);
    loop {
        let d = degree(&a) - degree(&b);
        let r = prem(&a, &b);
        if is_zero(&r) {
            return b;
        }
        if degree(&r) == 0 {
            return vec![MultiPoly::one(&ring)];
        }
        let div = &g * &h.pow(d as u32);
        a = b;
        b = r
            .iter()
            .map(|c| c.divide_exact(&div).expect("subresultant division is exact"))
            .collect();
        g = a.last().unwrap().clone();
        h = if d == 0 {
            h
        } else if d == 1 {
            g.clone()
        } else {
            g.pow(d as u32)
                .divide_exact(&h.pow(d as u32 - 1))
                .expect("subresultant division is exact")
        };
    }
}

/// Cofactors `(a / g, b / g)` for a previously computed gcd.
pub fn cofactors<K: Scalar>(
    a: &MultiPoly<K>,
    b: &MultiPoly<K>,
    g: &MultiPoly<K>,
) -> (MultiPoly<K>, MultiPoly<K>) {
    let ca = a.divide_exact(g).expect("gcd divides a");
    let cb = b.divide_exact(g).expect("gcd divides b");
    (ca, cb)
}
