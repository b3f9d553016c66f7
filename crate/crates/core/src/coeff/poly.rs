//! Sparse multivariate polynomials over ℚ in the commuting symbols.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbol::{Monomial, Symbol};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Polynomial in the global symbol space. Terms are kept in a graded-lex
/// ordered map with no zero coefficients, so structural equality is equality.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(s: Symbol) -> Self {
        Self::term(Rational::one(), Monomial::var(s))
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = ParamPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value when the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rational)> {
        self.terms.into_iter()
    }

    /// Largest monomial under graded lex, with its coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(s) > 0)
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().map(|f| f.0))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(m, d)| (m.clone(), d * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self.terms.iter().map(|(n, d)| (n.mul(m), d * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Divides by the leading coefficient, so the leading coefficient is 1.
    pub fn monic(&self) -> ParamPoly {
        match self.leading() {
            None => ParamPoly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &ParamPoly) -> Option<ParamPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        if d.len() == 1 {
            let inv = dc.recip();
            let mut out = BTreeMap::new();
            for (m, c) in &self.terms {
                out.insert(m.div(&dm)?, c * &inv);
            }
            return Some(ParamPoly { terms: out });
        }
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let qm = rm.div(&dm)?;
            let qc = rc / &dc;
            rem -= &d.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Substitutes polynomials for symbols; unbound symbols stay.
    pub fn substitute(&self, bind: &dyn Fn(Symbol) -> Option<ParamPoly>) -> ParamPoly {
        let mut cache: BTreeMap<(Symbol, u32), ParamPoly> = BTreeMap::new();
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut acc = ParamPoly::constant(c.clone());
            for (s, e) in m.factors() {
                match bind(s) {
                    None => kept.push((s, e)),
                    Some(img) => {
                        let p = cache.entry((s, e)).or_insert_with(|| img.pow(e)).clone();
                        acc = &acc * &p;
                    }
                }
            }
            let km = Monomial::from_pairs(kept);
            out += &acc.mul_monomial(&km, &Rational::one());
        }
        out
    }

    /// Formal partial derivative.
    pub fn derivative(&self, s: Symbol) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(s);
            if e > 0 {
                let nm = rest.mul(&Monomial::power(s, e - 1));
                out.add_term(nm, c * int(e as i64));
            }
        }
        out
    }

    /// Collects the polynomial as `Σ s^i · coeff_i` with coefficients free of `s`.
    pub fn to_univariate(&self, s: Symbol) -> Vec<ParamPoly> {
        let mut out = vec![ParamPoly::zero(); self.degree_in(s) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(s);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_univariate(s: Symbol, coeffs: &[ParamPoly]) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out += &c.mul_monomial(&Monomial::power(s, i as u32), &Rational::one());
        }
        out
    }

    /// Splits by the exponent of `s`: `self = Σ s^e · part_e`.
    pub fn split_by(&self, s: Symbol) -> BTreeMap<u32, ParamPoly> {
        let mut out: BTreeMap<u32, ParamPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(s);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Whether the leading coefficient is negative.
    pub fn leading_negative(&self) -> bool {
        self.leading().is_some_and(|(_, c)| c.is_negative())
    }
}

impl From<Rational> for ParamPoly {
    fn from(c: Rational) -> Self {
        ParamPoly::constant(c)
    }
}

impl From<Symbol> for ParamPoly {
    fn from(s: Symbol) -> Self {
        ParamPoly::var(s)
    }
}

impl AddAssign<&ParamPoly> for ParamPoly {
    fn add_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&ParamPoly> for ParamPoly {
    fn sub_assign(&mut self, rhs: &ParamPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let (mut big, small) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        big += small;
        big
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        if self.is_zero() || rhs.is_zero() {
            return ParamPoly::zero();
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ParamPoly {
            type Output = ParamPoly;
            fn $f(self, rhs: ParamPoly) -> ParamPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        -&self
    }
}

pub(crate) fn fmt_rational(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub(crate) fn fmt_monomial(m: &Monomial) -> String {
    m.factors()
        .map(|(s, e)| {
            if e == 1 {
                s.name()
            } else {
                format!("{}^{}", s.name(), e)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for ParamPoly {
    /// Terms in descending graded-lex order: `a^2 - 1/2*b*h + 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&fmt_monomial(m))?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), fmt_monomial(m))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: Symbol) -> ParamPoly {
        ParamPoly::var(s)
    }

    #[test]
    fn difference_of_squares() {
        let (a, b) = (v(Symbol::A), v(Symbol::B));
        let lhs = &(&a + &b) * &(&a - &b);
        let rhs = &a.pow(2) - &b.pow(2);
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.to_string(), "a^2 - b^2");
    }

    #[test]
    fn additive_identity() {
        let p = &v(Symbol::A) * &v(Symbol::H) + ParamPoly::from_int(3);
        assert_eq!(&p + &ParamPoly::zero(), p);
    }

    #[test]
    fn exact_division() {
        let (a, h) = (v(Symbol::A), v(Symbol::H));
        let num = &a.pow(2) - &h.pow(2);
        let den = &a - &h;
        assert_eq!(num.div_exact(&den), Some(&a + &h));
        assert_eq!(den.div_exact(&num), None);
        assert_eq!((&a + &ParamPoly::one()).div_exact(&h), None);
    }

    #[test]
    fn display_orders_terms() {
        let p = ParamPoly::from_terms([
            (Monomial::one(), int(3)),
            (
                Monomial::from_pairs([(Symbol::B, 1), (Symbol::H, 1)]),
                rat(-1, 2),
            ),
            (Monomial::power(Symbol::A, 2), int(1)),
        ]);
        assert_eq!(p.to_string(), "a^2 - 1/2*b*h + 3");
    }

    #[test]
    fn substitute_and_derivative() {
        let (a, b, h) = (v(Symbol::A), v(Symbol::B), v(Symbol::H));
        let p = &(&a + &b) + &(&h * &ParamPoly::from_int(2));
        let q = p.substitute(&|s| (s == Symbol::H).then(ParamPoly::zero));
        assert_eq!(q, &a + &b);
        assert_eq!(a.pow(3).derivative(Symbol::A), a.pow(2).scale(&int(3)));
    }
}
