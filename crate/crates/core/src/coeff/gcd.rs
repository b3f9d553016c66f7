//! Multivariate polynomial gcd over ℚ.
//!
//! Recursive on the main variable: content and primitive part with respect
//! to that variable, and a subresultant remainder sequence on the primitive
//! parts. Coefficient rings are the polynomials in the remaining symbols.

use num_traits::One;

use super::poly::{ParamPoly, Rational};
use super::symbol::{Monomial, Symbol};

/// Monic gcd (leading coefficient 1 in graded-lex order); `gcd(0, 0) = 0`.
pub fn gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return ParamPoly::one();
    }
    if a.len() == 1 || b.len() == 1 {
        return monomial_gcd(a, b);
    }
    if a == b {
        return a.monic();
    }
    let x = main_symbol(a, b);
    if !a.contains(x) {
        return gcd(a, &content(b, x));
    }
    if !b.contains(x) {
        return gcd(&content(a, x), b);
    }
    let (ca, cb) = (content(a, x), content(b, x));
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_part(&prs_gcd(&pa, &pb, x), x);
    (&c * &g).monic()
}

pub fn lcm(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    if a.is_zero() || b.is_zero() {
        return ParamPoly::zero();
    }
    let g = gcd(a, b);
    (&a.div_exact(&g).expect("gcd divides") * b).monic()
}

/// gcd when at least one side is a single term: the monomial part shared by
/// every term of the other side.
fn monomial_gcd(a: &ParamPoly, b: &ParamPoly) -> ParamPoly {
    let mut acc: Option<Monomial> = None;
    for (m, _) in a.terms().chain(b.terms()) {
        acc = Some(match acc {
            None => m.clone(),
            Some(g) => g.gcd(m),
        });
    }
    ParamPoly::term(Rational::one(), acc.unwrap_or_default())
}

fn main_symbol(a: &ParamPoly, b: &ParamPoly) -> Symbol {
    let sa = a.symbols();
    let sb = b.symbols();
    // Prefer a symbol both share; otherwise any symbol present.
    sa.iter()
        .find(|s| sb.contains(s))
        .or_else(|| sa.first())
        .or_else(|| sb.first())
        .copied()
        .expect("non-constant polynomial has a symbol")
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content(p: &ParamPoly, x: Symbol) -> ParamPoly {
    let mut g = ParamPoly::zero();
    for c in p.to_univariate(x).into_iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.monic() } else { gcd(&g, &c) };
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn primitive_part(p: &ParamPoly, x: Symbol) -> ParamPoly {
    if p.is_zero() {
        return ParamPoly::zero();
    }
    p.div_exact(&content(p, x)).expect("content divides")
}

type Uni = Vec<ParamPoly>;

fn trim(mut u: Uni) -> Uni {
    while u.last().is_some_and(ParamPoly::is_zero) {
        u.pop();
    }
    u
}

fn deg(u: &Uni) -> usize {
    u.len() - 1
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &Uni, b: &Uni) -> Uni {
    let mut r = a.clone();
    let db = deg(b);
    let lb = b[db].clone();
    let mut steps = deg(a) + 1 - db;
    while !r.is_empty() && r.len() > db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            let k = i + dr - db;
            r[k] = &r[k] - &(&lr * bc);
        }
        r = trim(r);
        steps -= 1;
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

fn div_all(u: Uni, d: &ParamPoly) -> Uni {
    u.into_iter()
        .map(|c| c.div_exact(d).expect("subresultant division is exact"))
        .collect()
}

/// Subresultant remainder sequence on primitive inputs; returns the last
/// nonzero remainder (a multiple of the gcd in `x`).
fn prs_gcd(a: &ParamPoly, b: &ParamPoly, x: Symbol) -> ParamPoly {
    let (mut ua, mut ub) = (trim(a.to_univariate(x)), trim(b.to_univariate(x)));
    if deg(&ua) < deg(&ub) {
        std::mem::swap(&mut ua, &mut ub);
    }
    let mut g = ParamPoly::one();
    let mut hh = ParamPoly::one();
    loop {
        let delta = deg(&ua) - deg(&ub);
        let r = prem(&ua, &ub);
        if r.is_empty() {
            return ParamPoly::from_univariate(x, &ub);
        }
        if r.len() == 1 {
            return ParamPoly::one();
        }
        ua = ub;
        let divisor = &g * &hh.pow(delta as u32);
        ub = div_all(r, &divisor);
        g = ua[deg(&ua)].clone();
        hh = match delta {
            0 => hh,
            1 => g.clone(),
            _ => g
                .pow(delta as u32)
                .div_exact(&hh.pow(delta as u32 - 1))
                .expect("subresultant scaling is exact"),
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::poly::int;

    fn v(s: Symbol) -> ParamPoly {
        ParamPoly::var(s)
    }

    #[test]
    fn common_linear_factor() {
        let (a, b, h) = (v(Symbol::A), v(Symbol::B), v(Symbol::H));
        let f = &(&a + &b) + &h.scale(&int(2));
        let x = &f * &(&a - &h);
        let y = &f * &(&b.pow(2) + &ParamPoly::one());
        assert_eq!(gcd(&x, &y), f);
        assert_eq!(gcd(&(&a - &h), &(&a + &h)), ParamPoly::one());
    }

    #[test]
    fn squares_and_scalars() {
        let (a, h) = (v(Symbol::A), v(Symbol::H));
        let x = (&a.pow(2) - &h.pow(2)).scale(&int(6));
        let y = (&a - &h).scale(&int(4));
        assert_eq!(gcd(&x, &y), &a - &h);
        assert_eq!(gcd(&(&a - &h).pow(3), &(&a - &h).pow(2)), (&a - &h).pow(2));
    }

    #[test]
    fn monomial_cases() {
        let (a, h, t) = (v(Symbol::A), v(Symbol::H), v(Symbol::T));
        let x = &(&a * &h) * &t;
        let y = &(&h.pow(2) * &t) + &h;
        assert_eq!(gcd(&x, &y), h);
        assert_eq!(gcd(&ParamPoly::from_int(3), &x), ParamPoly::one());
    }

    #[test]
    fn multivariate_cofactors() {
        let (a, b, c, h) = (v(Symbol::A), v(Symbol::B), v(Symbol::C), v(Symbol::H));
        let f1 = &(&a * &b) - &(&c * &h);
        let f2 = &(&a + &c) + &ParamPoly::one();
        let g1 = &b.pow(2) + &(&a * &h);
        let g2 = &(&c - &b) * &h;
        let x = &(&f1 * &f2) * &g1;
        let y = &(&f1 * &f2) * &g2;
        assert_eq!(gcd(&x, &y), (&f1 * &f2).monic());
    }
}
