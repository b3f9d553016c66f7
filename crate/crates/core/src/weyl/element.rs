use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::WeylError;
use crate::coeff::{Monomial, ParamRat, Rational, Symbol};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `v1^m v2^n`
    FirstLeft,
    /// `v2^n v1^m`
    SecondLeft,
}

impl Convention {
    pub fn other(self) -> Convention {
        match self {
            Convention::FirstLeft => Convention::SecondLeft,
            Convention::SecondLeft => Convention::FirstLeft,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    First,
    Second,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Layout {
    pub convention: Convention,
    pub laurent: Option<Slot>,
}

impl Layout {
    pub const POLY: Layout = Layout {
        convention: Convention::FirstLeft,
        laurent: None,
    };

    /// The layout whose normal order keeps products in `slot`'s localization
    /// closest to the defining relation: first-left for `v1`, second-left
    /// for `v2`.
    pub fn laurent_in(slot: Slot) -> Layout {
        let convention = match slot {
            Slot::First => Convention::FirstLeft,
            Slot::Second => Convention::SecondLeft,
        };
        Layout {
            convention,
            laurent: Some(slot),
        }
    }

    pub fn poly(convention: Convention) -> Layout {
        Layout {
            convention,
            laurent: None,
        }
    }

    fn admits(&self, key: (i32, i32)) -> bool {
        match self.laurent {
            None => key.0 >= 0 && key.1 >= 0,
            Some(Slot::First) => key.1 >= 0,
            Some(Slot::Second) => key.0 >= 0,
        }
    }
}

/// Names of the two generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vars(Arc<[String; 2]>);

impl Vars {
    pub fn new(first: &str, second: &str) -> Vars {
        Vars(Arc::new([first.to_string(), second.to_string()]))
    }

    pub fn first(&self) -> &str {
        &self.0[0]
    }

    pub fn second(&self) -> &str {
        &self.0[1]
    }

    pub fn name(&self, slot: Slot) -> &str {
        match slot {
            Slot::First => self.first(),
            Slot::Second => self.second(),
        }
    }

    pub fn slot_of(&self, name: &str) -> Option<Slot> {
        if name == self.first() {
            Some(Slot::First)
        } else if name == self.second() {
            Some(Slot::Second)
        } else {
            None
        }
    }
}

impl fmt::Display for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.first(), self.second())
    }
}

pub(crate) type Terms = BTreeMap<(i32, i32), ParamRat>;

/// A normal-ordered element. Term keys are `(exponent of v1, exponent of v2)`.
#[derive(Clone, Debug)]
pub struct WeylExpr {
    pub(crate) vars: Vars,
    pub(crate) layout: Layout,
    pub(crate) terms: Terms,
}

/// `R^b L^c = Σ_k coef_k h^k L^(c-k) R^(b-k)` where `L` is the left slot of
/// the convention. Returns `(k, coef_k)` pairs, sign included.
pub(crate) fn reorder(conv: Convention, b: i32, c: i32) -> Result<Vec<(u32, BigInt)>, WeylError> {
    let bound = match (b >= 0, c >= 0) {
        (true, true) => b.min(c),
        (true, false) => b,
        (false, true) => c,
        (false, false) => return Err(WeylError::InfiniteSeries(format!("R^{b} L^{c}"))),
    };
    let sign = match conv {
        Convention::FirstLeft => -1,
        Convention::SecondLeft => 1,
    };
    let mut out = Vec::with_capacity(bound as usize + 1);
    let mut coef = BigInt::one();
    for k in 0..=bound {
        out.push((k as u32, coef.clone()));
        let next = &coef * BigInt::from(b - k) * BigInt::from(c - k) * BigInt::from(sign);
        coef = next / BigInt::from(k + 1);
    }
    Ok(out)
}

fn to_lr(conv: Convention, key: (i32, i32)) -> (i32, i32) {
    match conv {
        Convention::FirstLeft => key,
        Convention::SecondLeft => (key.1, key.0),
    }
}

fn from_lr(conv: Convention, lr: (i32, i32)) -> (i32, i32) {
    to_lr(conv, lr)
}

pub(crate) fn accumulate(terms: &mut Terms, key: (i32, i32), c: ParamRat) {
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            let s = o.get() + &c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn h_power(k: u32) -> Monomial {
    Monomial::power(Symbol::H, k)
}

impl WeylExpr {
    pub fn zero(vars: &Vars, layout: Layout) -> WeylExpr {
        WeylExpr {
            vars: vars.clone(),
            layout,
            terms: Terms::new(),
        }
    }

    pub fn scalar(vars: &Vars, layout: Layout, c: ParamRat) -> WeylExpr {
        let mut terms = Terms::new();
        accumulate(&mut terms, (0, 0), c);
        WeylExpr {
            vars: vars.clone(),
            layout,
            terms,
        }
    }

    pub fn one(vars: &Vars, layout: Layout) -> WeylExpr {
        Self::scalar(vars, layout, ParamRat::one())
    }

    pub fn generator(vars: &Vars, layout: Layout, slot: Slot) -> WeylExpr {
        let key = match slot {
            Slot::First => (1, 0),
            Slot::Second => (0, 1),
        };
        Self::monomial(vars, layout, key, ParamRat::one()).expect("generators are polynomial")
    }

    /// `c` times the normal-ordered monomial with exponents `key`.
    pub fn monomial(
        vars: &Vars,
        layout: Layout,
        key: (i32, i32),
        c: ParamRat,
    ) -> Result<WeylExpr, WeylError> {
        Self::from_terms(vars, layout, [(key, c)])
    }

    pub fn from_terms(
        vars: &Vars,
        layout: Layout,
        terms: impl IntoIterator<Item = ((i32, i32), ParamRat)>,
    ) -> Result<WeylExpr, WeylError> {
        let mut out = Self::zero(vars, layout);
        for (k, c) in terms {
            if !layout.admits(k) {
                return Err(WeylError::LaurentViolation(format!(
                    "{}^{} {}^{}",
                    vars.first(),
                    k.0,
                    vars.second(),
                    k.1
                )));
            }
            accumulate(&mut out.terms, k, c);
        }
        Ok(out)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn convention(&self) -> Convention {
        self.layout.convention
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(i32, i32), &ParamRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: (i32, i32)) -> ParamRat {
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// No generator appears.
    pub fn is_central(&self) -> bool {
        self.terms.keys().all(|k| *k == (0, 0))
    }

    pub fn as_scalar(&self) -> Option<ParamRat> {
        self.is_central().then(|| self.coeff((0, 0)))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|k| k.0 >= 0 && k.1 >= 0)
    }

    pub fn max_degree(&self, slot: Slot) -> Option<i32> {
        self.terms.keys().map(|k| pick(*k, slot)).max()
    }

    pub fn min_degree(&self, slot: Slot) -> Option<i32> {
        self.terms.keys().map(|k| pick(*k, slot)).min()
    }

    /// True when any coefficient mentions `s`.
    pub fn contains_symbol(&self, s: Symbol) -> bool {
        self.terms.values().any(|c| c.contains(s))
    }

    /// The same generators under a fresh pair of names.
    pub fn renamed(&self, vars: &Vars) -> WeylExpr {
        WeylExpr {
            vars: vars.clone(),
            layout: self.layout,
            terms: self.terms.clone(),
        }
    }

    /// Re-expresses in `layout`: converts the ordering convention if needed
    /// and re-declares the Laurent side.
    pub fn to_layout(&self, layout: Layout) -> Result<WeylExpr, WeylError> {
        let conv = self.convert_convention(layout.convention)?;
        if let Some(k) = conv.terms.keys().find(|k| !layout.admits(**k)) {
            return Err(WeylError::LaurentViolation(format!(
                "{}^{} {}^{}",
                self.vars.first(),
                k.0,
                self.vars.second(),
                k.1
            )));
        }
        Ok(WeylExpr { layout, ..conv })
    }

    /// The same element written in the other normal order.
    pub fn convert_convention(&self, target: Convention) -> Result<WeylExpr, WeylError> {
        if target == self.layout.convention {
            return Ok(self.clone());
        }
        let mut out = Terms::new();
        for (&key, c) in &self.terms {
            // In the target's terms the source monomial reads R^b L^c.
            let (l, r) = to_lr(target, key);
            for (k, coef) in reorder(target, r, l)? {
                let ki = k as i32;
                let nk = from_lr(target, (l - ki, r - ki));
                accumulate(&mut out, nk, c.mul_term(&h_power(k), &Rational::from(coef)));
            }
        }
        Ok(WeylExpr {
            vars: self.vars.clone(),
            layout: Layout {
                convention: target,
                ..self.layout
            },
            terms: out,
        })
    }

    fn join(&self, other: &WeylExpr) -> Result<Layout, WeylError> {
        if self.vars != other.vars {
            return Err(WeylError::VariableMismatch(
                self.vars.to_string(),
                other.vars.to_string(),
            ));
        }
        if self.layout.convention != other.layout.convention {
            return Err(WeylError::ConventionMismatch);
        }
        let laurent = match (self.layout.laurent, other.layout.laurent) {
            (Some(a), Some(b)) if a != b => return Err(WeylError::LaurentMismatch),
            (a, b) => a.or(b),
        };
        Ok(Layout {
            convention: self.layout.convention,
            laurent,
        })
    }

    pub fn try_add(&self, other: &WeylExpr) -> Result<WeylExpr, WeylError> {
        let layout = self.join(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            accumulate(&mut terms, *k, c.clone());
        }
        Ok(WeylExpr {
            vars: self.vars.clone(),
            layout,
            terms,
        })
    }

    pub fn try_sub(&self, other: &WeylExpr) -> Result<WeylExpr, WeylError> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> WeylExpr {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &ParamRat) -> WeylExpr {
        self.map_coeffs(|x| x * c)
    }

    /// Applies `f` to every coefficient, dropping terms that become zero.
    pub fn map_coeffs(&self, f: impl Fn(&ParamRat) -> ParamRat) -> WeylExpr {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let v = f(c);
                (!v.is_zero()).then_some((*k, v))
            })
            .collect();
        WeylExpr {
            vars: self.vars.clone(),
            layout: self.layout,
            terms,
        }
    }

    pub fn try_map_coeffs<E>(
        &self,
        f: impl Fn(&ParamRat) -> Result<ParamRat, E>,
    ) -> Result<WeylExpr, E> {
        let mut terms = Terms::new();
        for (k, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(*k, v);
            }
        }
        Ok(WeylExpr {
            vars: self.vars.clone(),
            layout: self.layout,
            terms,
        })
    }

    /// Coefficient-wise `∂/∂t`.
    pub fn partial_t(&self) -> WeylExpr {
        self.map_coeffs(|c| c.derivative(Symbol::T))
    }

    /// Normal-ordered product `self · other`.
    pub fn try_mul(&self, other: &WeylExpr) -> Result<WeylExpr, WeylError> {
        let layout = self.join(other)?;
        let conv = layout.convention;
        let mut terms = Terms::new();
        for (&ka, ca) in &self.terms {
            let (a1, b1) = to_lr(conv, ka);
            for (&kb, cb) in &other.terms {
                let (c1, d1) = to_lr(conv, kb);
                let cc = ca * cb;
                for (k, coef) in reorder(conv, b1, c1)? {
                    let ki = k as i32;
                    let key = from_lr(conv, (a1 + c1 - ki, b1 + d1 - ki));
                    accumulate(
                        &mut terms,
                        key,
                        cc.mul_term(&h_power(k), &Rational::from(coef)),
                    );
                }
            }
        }
        Ok(WeylExpr {
            vars: self.vars.clone(),
            layout,
            terms,
        })
    }

    pub fn commutator(&self, other: &WeylExpr) -> Result<WeylExpr, WeylError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    /// Inverse of a central unit times a power of the Laurent generator.
    pub fn inverse(&self) -> Result<WeylExpr, WeylError> {
        let fail = || WeylError::NotInvertible(self.to_string());
        if self.terms.len() != 1 {
            return Err(fail());
        }
        let (&(m, n), c) = self.terms.iter().next().expect("one term");
        let ok = match self.layout.laurent {
            _ if (m, n) == (0, 0) => true,
            Some(Slot::First) => n == 0,
            Some(Slot::Second) => m == 0,
            None => false,
        };
        if !ok {
            return Err(fail());
        }
        let ci = c.recip()?;
        Self::monomial(&self.vars, self.layout, (-m, -n), ci)
    }

    pub fn pow(&self, e: i32) -> Result<WeylExpr, WeylError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = WeylExpr::one(&self.vars, self.layout);
        let mut sq = base;
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.try_mul(&sq)?;
            }
            n >>= 1;
            if n > 0 {
                sq = sq.try_mul(&sq)?;
            }
        }
        Ok(acc)
    }

    /// Divides every coefficient by `h`; fails if some numerator has an
    /// `h`-free term.
    pub fn div_h_exact(&self) -> Result<WeylExpr, WeylError> {
        let mut terms = Terms::new();
        for (k, c) in &self.terms {
            match c.div_h_exact() {
                Some(v) => {
                    terms.insert(*k, v);
                }
                None => return Err(WeylError::NotDivisibleByH(self.term_string(*k, c))),
            }
        }
        Ok(WeylExpr {
            vars: self.vars.clone(),
            layout: self.layout,
            terms,
        })
    }

    /// `(polynomial part, principal part, most negative exponent)` with
    /// respect to the Laurent variable.
    pub fn laurent_split(&self) -> (WeylExpr, WeylExpr, i32) {
        let Some(slot) = self.layout.laurent else {
            return (self.clone(), WeylExpr::zero(&self.vars, self.layout), 0);
        };
        let (neg, pos): (Terms, Terms) = self
            .terms
            .iter()
            .map(|(k, c)| (*k, c.clone()))
            .partition(|(k, _)| pick(*k, slot) < 0);
        let min = neg.keys().map(|k| pick(*k, slot)).min().unwrap_or(0);
        (
            WeylExpr {
                vars: self.vars.clone(),
                layout: self.layout,
                terms: pos,
            },
            WeylExpr {
                vars: self.vars.clone(),
                layout: self.layout,
                terms: neg,
            },
            min,
        )
    }

    /// Substitutes scalars for symbols in every coefficient.
    pub fn specialize(&self, bindings: &BTreeMap<Symbol, ParamRat>) -> Result<WeylExpr, WeylError> {
        Ok(self.try_map_coeffs(|c| c.specialize(bindings))?)
    }

    pub(crate) fn term_string(&self, key: (i32, i32), c: &ParamRat) -> String {
        let single = WeylExpr {
            vars: self.vars.clone(),
            layout: self.layout,
            terms: [(key, c.clone())].into(),
        };
        single.to_string()
    }

    /// Terms in printing order.
    pub fn ordered_terms(&self) -> Vec<((i32, i32), &ParamRat)> {
        super::print::ordered_keys(self)
            .into_iter()
            .map(|k| (k, &self.terms[&k]))
            .collect()
    }

    /// Up to `limit` terms rendered individually, in printing order.
    pub fn witness_terms(&self, limit: usize) -> Vec<String> {
        super::print::ordered_keys(self)
            .into_iter()
            .take(limit)
            .map(|k| self.term_string(k, &self.terms[&k]))
            .collect()
    }
}

pub(crate) fn pick(key: (i32, i32), slot: Slot) -> i32 {
    match slot {
        Slot::First => key.0,
        Slot::Second => key.1,
    }
}

impl PartialEq for WeylExpr {
    /// Algebra equality: same generators and same element, whatever the
    /// normal order or declared Laurent side.
    fn eq(&self, other: &Self) -> bool {
        if self.vars != other.vars {
            return false;
        }
        if self.layout.convention == other.layout.convention {
            return self.terms == other.terms;
        }
        match other.convert_convention(self.layout.convention) {
            Ok(o) => self.terms == o.terms,
            Err(_) => false,
        }
    }
}

impl Eq for WeylExpr {}

macro_rules! weyl_op {
    ($tr:ident, $f:ident, $m:ident) => {
        impl std::ops::$tr for &WeylExpr {
            type Output = WeylExpr;
            /// Panics on mismatched algebras; the `try_` form reports instead.
            fn $f(self, rhs: &WeylExpr) -> WeylExpr {
                self.$m(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl std::ops::$tr for WeylExpr {
            type Output = WeylExpr;
            fn $f(self, rhs: WeylExpr) -> WeylExpr {
                (&self).$f(&rhs)
            }
        }
    };
}
weyl_op!(Add, add, try_add);
weyl_op!(Sub, sub, try_sub);
weyl_op!(Mul, mul, try_mul);

impl std::ops::Neg for &WeylExpr {
    type Output = WeylExpr;
    fn neg(self) -> WeylExpr {
        WeylExpr::neg(self)
    }
}

impl std::ops::Neg for WeylExpr {
    type Output = WeylExpr;
    fn neg(self) -> WeylExpr {
        WeylExpr::neg(&self)
    }
}
