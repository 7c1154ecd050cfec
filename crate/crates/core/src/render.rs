//! Deterministic text and LaTeX rendering of x-polynomials.
//!
//! Powers of `x` are outermost. Each coefficient is written as its rational
//! content times a primitive polynomial in `n` and the parameters, over a
//! primitive denominator when one remains. The text form reparses with the
//! expression grammar.
use crate::mpoly::{format_scalar, MultiPoly};
use crate::ratfun::RationalFunction;
use crate::scalar::Scalar;
use crate::xpoly::XPolynomial;

/// One rendered summand: its sign and its absolute-value text.
pub(crate) struct Piece {
    pub negative: bool,
    pub body: String,
}

fn x_power(k: usize, latex: bool) -> String {
    match (k, latex) {
        (0, _) => String::new(),
        (1, _) => "x".into(),
        (_, true) => format!("x^{{{k}}}"),
        (_, false) => format!("x^{k}"),
    }
}

fn poly_text<K: Scalar>(p: &MultiPoly<K>, latex: bool) -> String {
    if latex {
        p.to_latex()
    } else {
        p.to_string()
    }
}

fn needs_parens<K: Scalar>(p: &MultiPoly<K>) -> bool {
    p.num_terms() > 1
}

/// Split `c` into sign and magnitude text, followed by the `x^k` factor.
pub(crate) fn coefficient_piece<K: Scalar>(c: &RationalFunction<K>, k: usize, latex: bool) -> Piece {
    let (unit, prim) = c.numer().primitive_split();
    let negative = unit.is_negative();
    let q = unit.abs();
    let den = c.denom();
    let xs = x_power(k, latex);

    let mut factors: Vec<String> = Vec::new();
    let prim_is_one = prim.is_one();
    if !prim_is_one {
        let t = poly_text(&prim, latex);
        let wrap = needs_parens(&prim) && (!q.is_one() || !xs.is_empty() || !den.is_one() || latex);
        factors.push(if wrap && !latex {
            format!("({t})")
        } else if wrap {
            format!("\\left({t}\\right)")
        } else {
            t
        });
    }

    let body = if latex {
        let numer = {
            let mut parts = Vec::new();
            let qn = K::from_int(q.numer().clone());
            if !qn.is_one() || factors.is_empty() {
                parts.push(format_scalar(&qn, true));
            }
            parts.extend(factors.iter().cloned());
            parts.join(" ")
        };
        let qd = K::from_int(q.denom().clone());
        let denom_text = if den.is_one() {
            if qd.is_one() {
                None
            } else {
                Some(format_scalar(&qd, true))
            }
        } else {
            let d = poly_text(den, true);
            Some(if qd.is_one() {
                d
            } else if needs_parens(den) {
                format!("{} \\left({}\\right)", format_scalar(&qd, true), d)
            } else {
                format!("{} {}", format_scalar(&qd, true), d)
            })
        };
        let core = match denom_text {
            Some(d) => format!("\\frac{{{numer}}}{{{d}}}"),
            None => numer,
        };
        if xs.is_empty() {
            core
        } else if core == "1" {
            xs
        } else {
            format!("{core} {xs}")
        }
    } else {
        let qn = K::from_int(q.numer().clone());
        let qd = K::from_int(q.denom().clone());
        let mut parts: Vec<String> = Vec::new();
        if !qn.is_one() || (factors.is_empty() && (xs.is_empty() || !qd.is_one() || !den.is_one())) {
            parts.push(format_scalar(&qn, false));
        }
        parts.extend(factors);
        let mut s = parts.join("*");
        let mut dparts: Vec<String> = Vec::new();
        if !qd.is_one() {
            dparts.push(format_scalar(&qd, false));
        }
        if !den.is_one() {
            let d = poly_text(den, false);
            dparts.push(if needs_parens(den) && !dparts.is_empty() { format!("({d})") } else { d });
        }
        if !dparts.is_empty() {
            let d = dparts.join("*");
            let simple = dparts.len() == 1 && (den.is_one() || (!needs_parens(den) && den.total_degree() == Some(1) && den.leading_coeff().is_one()));
            s = if simple { format!("{s}/{d}") } else { format!("{s}/({d})") };
        }
        match (s.is_empty(), xs.is_empty()) {
            (true, true) => "1".into(),
            (true, false) => xs,
            (false, true) => s,
            (false, false) => format!("{s}*{xs}"),
        }
    };
    Piece { negative, body }
}

/// Summands of `p`, highest power of `x` first.
pub(crate) fn xpoly_pieces<K: Scalar>(p: &XPolynomial<K>, latex: bool) -> Vec<Piece> {
    p.coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| coefficient_piece(c, k, latex))
        .collect()
}

pub(crate) fn join_pieces(pieces: &[Piece]) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, p) in pieces.iter().enumerate() {
        match (i, p.negative) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(&p.body);
    }
    s
}

pub fn render_xpoly<K: Scalar>(p: &XPolynomial<K>, latex: bool) -> String {
    join_pieces(&xpoly_pieces(p, latex))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;
    use crate::XPoly;

    fn xp(s: &str) -> XPoly {
        let r = Ring::standard(&["alpha", "rho"]);
        crate::expr::parse_xpoly(s, &r).unwrap()
    }

    #[test]
    fn content_is_pulled_out() {
        assert_eq!(render_xpoly(&xp("-8*(n+1)*x^4 + 2*n*x - 3"), false), "-8*(n + 1)*x^4 + 2*n*x - 3");
        assert_eq!(render_xpoly(&xp("x^2/(2*rho) - 1/2"), false), "1/(2*rho)*x^2 - 1/2");
        assert_eq!(render_xpoly(&xp("(n+alpha)/(n+1)"), false), "(n + alpha)/(n + 1)");
        assert_eq!(render_xpoly(&XPoly::zero(&Ring::standard::<&str>(&[])), false), "0");
    }

    #[test]
    fn text_form_reparses() {
        for s in ["-8*(n+1)*x^4 + 2*n*x - 3", "x^2/(2*rho) - 1/2", "3*(n+alpha)/(2*n+rho)*x - x^3/rho^2"] {
            let p = xp(s);
            assert_eq!(xp(&render_xpoly(&p, false)), p, "{s}");
        }
    }

    #[test]
    fn latex_form() {
        assert_eq!(render_xpoly(&xp("-8*(n+1)*x^4"), true), "-8 \\left(n + 1\\right) x^{4}");
        assert_eq!(render_xpoly(&xp("x/(2*rho)"), true), "\\frac{1}{2 \\rho} x");
    }
}
