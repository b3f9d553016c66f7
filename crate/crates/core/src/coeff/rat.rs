//! Rational functions in the commuting symbols, kept in canonical form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{int, ParamPoly, Rational};
use super::symbol::{Monomial, Symbol};
use super::CoeffError;

/// `num / den` with `gcd(num, den) = 1` and `den` monic under graded lex.
/// Zero is `0 / 1`. Canonical form makes structural equality decide equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ParamRat {
    num: ParamPoly,
    den: ParamPoly,
}

impl Default for ParamRat {
    fn default() -> Self {
        ParamRat::zero()
    }
}

impl ParamRat {
    pub fn zero() -> Self {
        ParamRat {
            num: ParamPoly::zero(),
            den: ParamPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(ParamPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(ParamPoly::from_int(n))
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(ParamPoly::constant(c))
    }

    pub fn var(s: Symbol) -> Self {
        Self::from_poly(ParamPoly::var(s))
    }

    pub fn from_poly(p: ParamPoly) -> Self {
        ParamRat {
            num: p,
            den: ParamPoly::one(),
        }
    }

    /// Reduces `num / den` to canonical form.
    pub fn normalize(num: ParamPoly, den: ParamPoly) -> Result<Self, CoeffError> {
        if den.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    pub fn numer(&self) -> &ParamPoly {
        &self.num
    }

    pub fn denom(&self) -> &ParamPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&ParamPoly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_poly() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    fn reduce(num: ParamPoly, den: ParamPoly) -> Self {
        if num.is_zero() {
            return ParamRat::zero();
        }
        if let Some(c) = den.as_constant() {
            return ParamRat {
                num: num.scale(&c.recip()),
                den: ParamPoly::one(),
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            ParamRat { num, den }
        } else {
            let inv = lc.recip();
            ParamRat {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamRat {
        if c.is_zero() {
            return ParamRat::zero();
        }
        ParamRat {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &ParamPoly) -> ParamRat {
        if self.is_poly() {
            return ParamRat::from_poly(&self.num * p);
        }
        if let Some(c) = p.as_constant() {
            return self.scale(&c);
        }
        Self::reduce(&self.num * p, self.den.clone())
    }

    /// `self · c · m` for a rational `c` and a symbol monomial `m`.
    pub fn mul_term(&self, m: &Monomial, c: &Rational) -> ParamRat {
        if c.is_zero() {
            return ParamRat::zero();
        }
        let num = self.num.mul_monomial(m, c);
        if self.is_poly() || m.is_one() {
            ParamRat {
                num,
                den: self.den.clone(),
            }
        } else {
            Self::reduce(num, self.den.clone())
        }
    }

    pub fn recip(&self) -> Result<ParamRat, CoeffError> {
        if self.is_zero() {
            return Err(CoeffError::ZeroDenominator);
        }
        Ok(Self::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, rhs: &ParamRat) -> Result<ParamRat, CoeffError> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<ParamRat, CoeffError> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(ParamRat {
            num: base.num.pow(n),
            den: base.den.pow(n),
        })
    }

    /// Exact division by `h`, required to leave no `h` in the denominator:
    /// the numerator must be divisible by `h`.
    pub fn div_h_exact(&self) -> Option<ParamRat> {
        let h = Monomial::var(Symbol::H);
        let mut out = ParamPoly::zero();
        for (m, c) in self.num.terms() {
            out.add_term(m.div(&h)?, c.clone());
        }
        Some(ParamRat {
            num: out,
            den: self.den.clone(),
        })
    }

    pub fn derivative(&self, s: Symbol) -> ParamRat {
        if !self.contains(s) {
            return ParamRat::zero();
        }
        if self.is_poly() {
            return ParamRat::from_poly(self.num.derivative(s));
        }
        let n = &(&self.num.derivative(s) * &self.den) - &(&self.num * &self.den.derivative(s));
        Self::reduce(n, self.den.pow(2))
    }

    /// Substitutes rational functions for symbols.
    pub fn specialize(
        &self,
        bindings: &BTreeMap<Symbol, ParamRat>,
    ) -> Result<ParamRat, CoeffError> {
        let n = specialize_poly(&self.num, bindings);
        let d = specialize_poly(&self.den, bindings);
        if d.is_zero() {
            return Err(CoeffError::DenominatorVanishes(self.to_string()));
        }
        n.checked_div(&d)
    }
}

/// Evaluates a polynomial with some symbols replaced by rational functions.
pub fn specialize_poly(p: &ParamPoly, bindings: &BTreeMap<Symbol, ParamRat>) -> ParamRat {
    if bindings.values().all(ParamRat::is_poly) {
        let polys: BTreeMap<Symbol, ParamPoly> = bindings
            .iter()
            .map(|(s, r)| (*s, r.numer().clone()))
            .collect();
        return ParamRat::from_poly(p.substitute(&|s| polys.get(&s).cloned()));
    }
    let mut out = ParamRat::zero();
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut acc = ParamRat::constant(c.clone());
        for (s, e) in m.factors() {
            match bindings.get(&s) {
                Some(r) => acc = &acc * &r.pow(e as i32).expect("positive power"),
                None => kept.push((s, e)),
            }
        }
        let km = ParamPoly::term(Rational::one(), Monomial::from_pairs(kept));
        out = &out + &acc.mul_poly(&km);
    }
    out
}

impl From<ParamPoly> for ParamRat {
    fn from(p: ParamPoly) -> Self {
        ParamRat::from_poly(p)
    }
}

impl From<Symbol> for ParamRat {
    fn from(s: Symbol) -> Self {
        ParamRat::var(s)
    }
}

impl From<Rational> for ParamRat {
    fn from(c: Rational) -> Self {
        ParamRat::constant(c)
    }
}

impl Add for &ParamRat {
    type Output = ParamRat;
    fn add(self, rhs: &ParamRat) -> ParamRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let n = &self.num + &rhs.num;
            return if self.is_poly() {
                ParamRat::from_poly(n)
            } else {
                ParamRat::reduce(n, self.den.clone())
            };
        }
        if rhs.is_poly() {
            return ParamRat::reduce(&self.num + &(&rhs.num * &self.den), self.den.clone());
        }
        if self.is_poly() {
            return ParamRat::reduce(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let l = self.den.div_exact(&g).expect("gcd divides");
        let r = rhs.den.div_exact(&g).expect("gcd divides");
        let n = &(&self.num * &r) + &(&rhs.num * &l);
        ParamRat::reduce(n, &self.den * &r)
    }
}

impl Neg for &ParamRat {
    type Output = ParamRat;
    fn neg(self) -> ParamRat {
        ParamRat {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &ParamRat {
    type Output = ParamRat;
    fn sub(self, rhs: &ParamRat) -> ParamRat {
        self + &(-rhs)
    }
}

impl Mul for &ParamRat {
    type Output = ParamRat;
    fn mul(self, rhs: &ParamRat) -> ParamRat {
        if self.is_zero() || rhs.is_zero() {
            return ParamRat::zero();
        }
        if self.is_poly() && rhs.is_poly() {
            return ParamRat::from_poly(&self.num * &rhs.num);
        }
        if rhs.is_poly() {
            return self.mul_poly(&rhs.num);
        }
        if self.is_poly() {
            return rhs.mul_poly(&self.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let n1 = self.num.div_exact(&g1).unwrap();
        let d2 = rhs.den.div_exact(&g1).unwrap();
        let n2 = rhs.num.div_exact(&g2).unwrap();
        let d1 = self.den.div_exact(&g2).unwrap();
        ParamRat::reduce(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &ParamRat {
    type Output = ParamRat;
    /// Panics on division by zero; use [`ParamRat::checked_div`] otherwise.
    fn div(self, rhs: &ParamRat) -> ParamRat {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for ParamRat {
            type Output = ParamRat;
            fn $f(self, rhs: ParamRat) -> ParamRat {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for ParamRat {
    type Output = ParamRat;
    fn neg(self) -> ParamRat {
        -&self
    }
}

impl fmt::Display for ParamRat {
    /// `num` alone when the denominator is 1, else `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// `1/n` as a rational function, for small integer denominators.
pub fn inv_int(n: i64) -> ParamRat {
    ParamRat::constant(int(n).recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::poly::rat;

    fn p(s: Symbol) -> ParamPoly {
        ParamPoly::var(s)
    }

    #[test]
    fn scalar_denominator_cancels() {
        let num = (&p(Symbol::A) + &p(Symbol::B)).scale(&int(2));
        let r = ParamRat::normalize(num, ParamPoly::from_int(2)).unwrap();
        assert_eq!(r, ParamRat::from_poly(&p(Symbol::A) + &p(Symbol::B)));
    }

    #[test]
    fn sign_normalization() {
        let f = &(&p(Symbol::A) + &p(Symbol::B)) + &p(Symbol::H).scale(&int(2));
        let r = ParamRat::normalize(ParamPoly::from_int(-1), f.scale(&int(-2))).unwrap();
        assert_eq!(r.denom(), &f);
        assert_eq!(r.numer(), &ParamPoly::constant(rat(1, 2)));
        assert_eq!(r.to_string(), "(1/2)/(a + b + 2*h)");
    }

    #[test]
    fn cancels_common_factor() {
        let (a, h) = (p(Symbol::A), p(Symbol::H));
        let r = ParamRat::normalize(&a.pow(2) - &h.pow(2), &a - &h).unwrap();
        assert_eq!(r, ParamRat::from_poly(&a + &h));
        // multiplying back recovers the numerator
        assert_eq!(r.mul_poly(&(&a - &h)).numer(), &(&a.pow(2) - &h.pow(2)));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(ParamRat::normalize(ParamPoly::one(), ParamPoly::zero()).is_err());
        assert!(ParamRat::zero().recip().is_err());
    }

    #[test]
    fn specialize_classical_and_normalized() {
        let (a, b, h) = (p(Symbol::A), p(Symbol::B), p(Symbol::H));
        let f = &(&a + &b) + &h.scale(&int(2));
        let k14 = ParamRat::normalize(ParamPoly::from_int(-1), f.scale(&int(2))).unwrap();
        let mut h0 = BTreeMap::new();
        h0.insert(Symbol::H, ParamRat::zero());
        let classical = k14.specialize(&h0).unwrap();
        let expect =
            ParamRat::normalize(ParamPoly::from_int(-1), (&a + &b).scale(&int(2))).unwrap();
        assert_eq!(classical, expect);

        let mut norm = BTreeMap::new();
        norm.insert(
            Symbol::A,
            ParamRat::from_poly(&(&ParamPoly::one() - &b) - &h.scale(&int(2))),
        );
        assert_eq!(
            k14.specialize(&norm).unwrap(),
            ParamRat::constant(rat(-1, 2))
        );

        let mut kill = BTreeMap::new();
        kill.insert(Symbol::A, ParamRat::from_poly(-&b));
        kill.insert(Symbol::H, ParamRat::zero());
        assert!(k14.specialize(&kill).is_err());
    }

    #[test]
    fn field_operations() {
        let (a, h) = (ParamRat::var(Symbol::A), ParamRat::var(Symbol::H));
        let x = &a / &h;
        let y = &h / &a;
        assert!((&x * &y).is_one());
        let s = &x + &y;
        let back = &(&s - &y) - &x;
        assert!(back.is_zero());
        assert_eq!(x.derivative(Symbol::H), -&(&a / &(&h * &h)));
    }
}
