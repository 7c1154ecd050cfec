//! Common-factor extraction for ODE coefficient lists, and deterministic
//! text/LaTeX emission of relations and equations.

use std::fmt::Write as _;

use crate::derivation::{OdeResult, StructureRelation};
use crate::error::DeriveError;
use crate::gcd::{gcd_many, lcm_primitive};
use crate::mpoly::MultiPoly;
use crate::ratfun::RationalFunction;
use crate::render::{join_pieces, xpoly_pieces};
use crate::scalar::{rational_gcd, Scalar};
use crate::xpoly::XPolynomial;
use crate::Rational;

/// An equation divided through by the common factor `c = unit · common` of
/// its coefficients. `unit` is free of `x`; `common` is a primitive
/// polynomial with positive leading coefficient and may involve `x`.
#[derive(Clone, Debug)]
pub struct ReducedOde<K: Scalar = Rational> {
    pub ode: OdeResult<K>,
    pub unit: RationalFunction<K>,
    pub common: MultiPoly<K>,
    pub reduced: Vec<XPolynomial<K>>,
}

impl<K: Scalar> ReducedOde<K> {
    /// `c(x; n)` as an x-polynomial.
    pub fn common_factor(&self) -> XPolynomial<K> {
        XPolynomial::from_mpoly(&self.common).scale(&self.unit)
    }
}

/// Divide `ode` by the greatest common divisor of its coefficients.
///
/// Denominators are cleared with their lcm `L`, the primitive gcd `g` of the
/// cleared polynomials is divided out, and what is left of `1/L` and the
/// rational content goes into the unit. The sign is fixed so that the
/// leading term of the first nonzero reduced coefficient is positive.
pub fn reduce_ode<K: Scalar>(ode: &OdeResult<K>) -> Result<ReducedOde<K>, DeriveError> {
    if ode.degenerate {
        return Err(DeriveError::DegenerateOde);
    }
    let ring = ode.coeffs[0].ring().clone();
    let l = ode
        .coeffs
        .iter()
        .fold(MultiPoly::one(&ring), |acc, c| lcm_primitive(&acc, &c.denominator_lcm()));
    let cleared = ode
        .coeffs
        .iter()
        .map(|c| c.to_mpoly_scaled(&l))
        .collect::<Result<Vec<_>, _>>()?;
    let g = gcd_many(cleared.iter().filter(|p| !p.is_zero()));
    let quotients = cleared
        .iter()
        .map(|p| p.divide_exact(&g))
        .collect::<Result<Vec<_>, _>>()?;

    let content = quotients
        .iter()
        .filter(|q| !q.is_zero())
        .fold(K::zero(), |acc, q| rational_gcd(&acc, &q.content()));
    let lead = quotients
        .iter()
        .find(|q| !q.is_zero())
        .expect("non-degenerate")
        .leading_coeff();
    let scale = if lead.is_negative() { -content } else { content };
    let inv = scale.recip();
    let reduced = quotients
        .iter()
        .map(|q| XPolynomial::from_mpoly(&q.scale(&inv)))
        .collect();
    let unit = RationalFunction::new(MultiPoly::constant(&ring, scale), l)?;
    Ok(ReducedOde {
        ode: ode.clone(),
        unit,
        common: g,
        reduced,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
}

impl Format {
    fn latex(self) -> bool {
        self == Format::Latex
    }
}

fn derivative_symbol(k: usize, format: Format, base: &str, index: &str) -> String {
    match format {
        Format::Text => {
            let primes = "'".repeat(k);
            if index.is_empty() {
                format!("{base}{primes}")
            } else {
                format!("{base}{primes}[{index}]")
            }
        }
        Format::Latex => {
            let sub = if index.is_empty() { String::new() } else { format!("_{{{index}}}") };
            let sup = match k {
                0 => String::new(),
                1..=3 => "'".repeat(k),
                _ => format!("^{{({k})}}"),
            };
            format!("{base}{sub}{sup}")
        }
    }
}

/// `coef·symbol` pieces with the sign of a single-term coefficient pulled
/// out; multi-term coefficients are parenthesized.
fn term_pieces<K: Scalar>(coef: &XPolynomial<K>, symbol: &str, format: Format) -> Option<(bool, String)> {
    if coef.is_zero() {
        return None;
    }
    let latex = format.latex();
    let mut pieces = xpoly_pieces(coef, latex);
    let (negative, body) = if pieces.len() == 1 {
        let p = pieces.remove(0);
        let body = if has_top_level_space(&p.body) {
            if latex {
                format!("\\left({}\\right)", p.body)
            } else {
                format!("({})", p.body)
            }
        } else {
            p.body
        };
        (p.negative, body)
    } else {
        let inner = join_pieces(&pieces);
        let wrapped = if latex { format!("\\left({inner}\\right)") } else { format!("({inner})") };
        (false, wrapped)
    };
    let text = if body == "1" {
        symbol.to_string()
    } else if latex {
        format!("{body} {symbol}")
    } else {
        format!("{body}*{symbol}")
    };
    Some((negative, text))
}

/// A sum printed without enclosing brackets, e.g. `n + 1`.
fn has_top_level_space(body: &str) -> bool {
    let mut depth = 0i32;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ' ' if depth == 0 && (body[i..].starts_with(" + ") || body[i..].starts_with(" - ")) => return true,
            _ => {}
        }
    }
    false
}

fn join_signed(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (neg, t)) in terms.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(t);
    }
    s
}

/// `Σ coeffs[i] · P^{(order-i)} = 0`.
pub fn emit_equation<K: Scalar>(coeffs: &[XPolynomial<K>], format: Format) -> String {
    let order = coeffs.len() - 1;
    let terms: Vec<_> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(i, c)| term_pieces(c, &derivative_symbol(order - i, format, "P", ""), format))
        .collect();
    format!("{} = 0", join_signed(&terms))
}

pub fn emit_ode<K: Scalar>(ode: &OdeResult<K>, format: Format) -> String {
    emit_equation(&ode.coeffs, format)
}

/// Equation line, then `c = …`.
pub fn emit_reduced<K: Scalar>(r: &ReducedOde<K>, format: Format) -> String {
    let c = r.common_factor();
    let mut out = emit_equation(&r.reduced, format);
    let _ = write!(out, "\nc = {}", c.render(format.latex()));
    out
}

/// One relation as an equation in `P1 = P^{(1)}` and `P`.
pub fn emit_relation<K: Scalar>(rel: &StructureRelation<K>, format: Format) -> String {
    if rel.is_zero() {
        return "0 = 0".into();
    }
    let (q, p) = match format {
        Format::Text => ("P1", "P"),
        Format::Latex => ("P^{(1)}", "P"),
    };
    let sym = |base: &str, idx: &str, k: usize| match format {
        Format::Text => derivative_symbol(k, format, base, idx),
        Format::Latex => {
            let b = if base == q { "P" } else { base };
            let s = derivative_symbol(k, format, b, idx);
            if base == q {
                s.replacen("P_", "P^{(1)}_", 1)
            } else {
                s
            }
        }
    };
    let lhs: Vec<_> = [
        (&rel.g0, sym(q, "n-1", 0)),
        (&rel.g1, sym(q, "n", 0)),
        (&rel.h, sym(p, "n", 0)),
    ]
    .into_iter()
    .filter_map(|(c, s)| term_pieces(c, &s, format))
    .collect();
    let rhs: Vec<_> = rel
        .rhs()
        .iter()
        .enumerate()
        .rev()
        .filter_map(|(k, c)| term_pieces(c, &sym(p, "n+1", k), format))
        .collect();
    format!("{} = {}", join_signed(&lhs), join_signed(&rhs))
}

/// `name = value` lines for the coefficients of one relation.
pub fn emit_relation_coefficients<K: Scalar>(rel: &StructureRelation<K>, format: Format) -> String {
    rel.named()
        .into_iter()
        .map(|(name, v)| format!("{name} = {}", v.render(format.latex())))
        .collect::<Vec<_>>()
        .join("\n")
}

/// Render one coefficient of an ODE with its content pulled out.
pub fn emit_coefficient<K: Scalar>(c: &XPolynomial<K>, format: Format) -> String {
    c.render(format.latex())
}
