//! Canonical text: terms by descending total degree, then descending
//! exponent of the first generator; monomials in normal order.

use std::fmt;

use num_traits::{One, Signed};

use super::element::{Convention, WeylExpr};
use crate::coeff::{fmt_monomial, fmt_rational, ParamPoly, ParamRat, Rational};

pub(crate) fn ordered_keys(e: &WeylExpr) -> Vec<(i32, i32)> {
    let mut keys: Vec<(i32, i32)> = e.terms.keys().copied().collect();
    keys.sort_by(|a, b| {
        (b.0 + b.1)
            .cmp(&(a.0 + a.1))
            .then(b.0.cmp(&a.0))
            .then(b.1.cmp(&a.1))
    });
    keys
}

fn power(name: &str, e: i32) -> Option<String> {
    match e {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{name}^{e}")),
    }
}

/// `v1^m*v2^n` (or the reverse) without a coefficient; empty for `(0, 0)`.
fn monomial_text(e: &WeylExpr, key: (i32, i32)) -> String {
    let a = power(e.vars.first(), key.0);
    let b = power(e.vars.second(), key.1);
    let parts: Vec<String> = match e.layout.convention {
        Convention::FirstLeft => [a, b],
        Convention::SecondLeft => [b, a],
    }
    .into_iter()
    .flatten()
    .collect();
    parts.join("*")
}

/// A polynomial with its sign pulled out: `(negative, text)`.
/// Unit polynomials render as `"1"`.
fn poly_body(p: &ParamPoly) -> (bool, String) {
    if p.len() == 1 {
        let (m, c) = p.leading().expect("one term");
        let neg = c.is_negative();
        let a = c.abs();
        let mut parts = Vec::new();
        if !a.is_one() || m.is_one() {
            parts.push(fmt_rational(&a));
        }
        if !m.is_one() {
            parts.push(fmt_monomial(m));
        }
        (neg, parts.join("*"))
    } else if p.leading_negative() {
        (true, format!("({})", -p))
    } else {
        (false, format!("({p})"))
    }
}

fn is_atom(s: &str) -> bool {
    !s.contains(['*', ' ', '/', '('])
}

/// Sign and body of a coefficient, where the body is a product-ready factor
/// chain (or `"1"`).
fn coeff_body(c: &ParamRat) -> (bool, String) {
    if c.is_poly() {
        return poly_body(c.numer());
    }
    // Clear rational denominators of the numerator into the displayed
    // denominator: c = (L*num) / (L*den).
    let l = c.numer().denominator_lcm();
    let lr = Rational::from(l.clone());
    let num = c.numer().scale(&lr);
    let (neg, nb) = poly_body(&num);
    let (_, db) = poly_body(c.denom());
    let den = if l.is_one() { db } else { format!("{l}*{db}") };
    let den = if is_atom(&den) || (den.starts_with('(') && den.ends_with(')') && l.is_one()) {
        den
    } else {
        format!("({den})")
    };
    (neg, format!("{nb}/{den}"))
}

impl fmt::Display for WeylExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys = ordered_keys(self);
        if keys.is_empty() {
            return f.write_str("0");
        }
        for (i, key) in keys.into_iter().enumerate() {
            let (neg, body) = coeff_body(&self.terms[&key]);
            let mono = monomial_text(self, key);
            let text = match (body.as_str(), mono.is_empty()) {
                (b, true) => b.to_string(),
                ("1", false) => mono,
                (b, false) => format!("{b}*{mono}"),
            };
            match (i, neg) {
                (0, false) => write!(f, "{text}")?,
                (0, true) => write!(f, "-{text}")?,
                (_, false) => write!(f, " + {text}")?,
                (_, true) => write!(f, " - {text}")?,
            }
        }
        Ok(())
    }
}
