//! Commutative shadow of the algebra: polynomials (Laurent in either
//! variable) in two commuting generators with the Poisson bracket.

use std::collections::BTreeMap;
use std::fmt;

use super::element::{accumulate, Layout, Slot, Terms, Vars, WeylExpr};
use super::WeylError;
use crate::coeff::{int, ParamRat, Symbol};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CommPoly {
    vars: Vars,
    terms: Terms,
}

impl CommPoly {
    pub fn zero(vars: &Vars) -> CommPoly {
        CommPoly {
            vars: vars.clone(),
            terms: Terms::new(),
        }
    }

    pub fn scalar(vars: &Vars, c: ParamRat) -> CommPoly {
        let mut terms = Terms::new();
        accumulate(&mut terms, (0, 0), c);
        CommPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(vars: &Vars, slot: Slot) -> CommPoly {
        let key = if slot == Slot::First { (1, 0) } else { (0, 1) };
        CommPoly {
            vars: vars.clone(),
            terms: [(key, ParamRat::one())].into(),
        }
    }

    pub fn from_terms(
        vars: &Vars,
        terms: impl IntoIterator<Item = ((i32, i32), ParamRat)>,
    ) -> CommPoly {
        let mut out = Terms::new();
        for (k, c) in terms {
            accumulate(&mut out, k, c);
        }
        CommPoly {
            vars: vars.clone(),
            terms: out,
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, i32), &ParamRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: (i32, i32)) -> ParamRat {
        self.terms.get(&key).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_central(&self) -> bool {
        self.terms.keys().all(|k| *k == (0, 0))
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|k| k.0 >= 0 && k.1 >= 0)
    }

    /// The terms with no negative exponent.
    pub fn regular_part(&self) -> CommPoly {
        CommPoly::from_terms(
            &self.vars,
            self.terms
                .iter()
                .filter(|(k, _)| k.0 >= 0 && k.1 >= 0)
                .map(|(k, c)| (*k, c.clone())),
        )
    }

    pub fn add(&self, o: &CommPoly) -> CommPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &o.terms {
            accumulate(&mut terms, *k, c.clone());
        }
        CommPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn sub(&self, o: &CommPoly) -> CommPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> CommPoly {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, c: &ParamRat) -> CommPoly {
        self.map_coeffs(|x| x * c)
    }

    pub fn map_coeffs(&self, f: impl Fn(&ParamRat) -> ParamRat) -> CommPoly {
        CommPoly::from_terms(&self.vars, self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    pub fn mul(&self, o: &CommPoly) -> CommPoly {
        let mut terms = Terms::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &o.terms {
                accumulate(&mut terms, (ka.0 + kb.0, ka.1 + kb.1), ca * cb);
            }
        }
        CommPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Inverse of a single term.
    pub fn inverse(&self) -> Result<CommPoly, WeylError> {
        if self.terms.len() != 1 {
            return Err(WeylError::NotInvertible(self.to_string()));
        }
        let (k, c) = self.terms.iter().next().expect("one term");
        Ok(CommPoly::from_terms(
            &self.vars,
            [((-k.0, -k.1), c.recip()?)],
        ))
    }

    pub fn pow(&self, e: i32) -> Result<CommPoly, WeylError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = CommPoly::scalar(&self.vars, ParamRat::one());
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    pub fn partial(&self, slot: Slot) -> CommPoly {
        CommPoly::from_terms(
            &self.vars,
            self.terms.iter().filter_map(|(&(m, n), c)| {
                let (e, key) = if slot == Slot::First {
                    (m, (m - 1, n))
                } else {
                    (n, (m, n - 1))
                };
                (e != 0).then(|| (key, c.scale(&int(e as i64))))
            }),
        )
    }

    pub fn partial_t(&self) -> CommPoly {
        self.map_coeffs(|c| c.derivative(Symbol::T))
    }

    pub fn specialize(&self, bindings: &BTreeMap<Symbol, ParamRat>) -> Result<CommPoly, WeylError> {
        let mut terms = Terms::new();
        for (k, c) in &self.terms {
            accumulate(&mut terms, *k, c.specialize(bindings)?);
        }
        Ok(CommPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    /// Image under `v1 ↦ φ`, `v2 ↦ ψ` (negative powers through monomial
    /// inverses).
    pub fn substitute(&self, phi: &CommPoly, psi: &CommPoly) -> Result<CommPoly, WeylError> {
        let mut out = CommPoly::zero(&phi.vars);
        let mut cache: BTreeMap<(u8, i32), CommPoly> = BTreeMap::new();
        for (&(m, n), c) in &self.terms {
            let mut get = |which: u8, e: i32| -> Result<CommPoly, WeylError> {
                if let Some(v) = cache.get(&(which, e)) {
                    return Ok(v.clone());
                }
                let v = if which == 0 { phi.pow(e)? } else { psi.pow(e)? };
                cache.insert((which, e), v.clone());
                Ok(v)
            };
            let a = get(0, m)?;
            let b = get(1, n)?;
            out = out.add(&a.mul(&b).scale(c));
        }
        Ok(out)
    }
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = WeylExpr {
            vars: self.vars.clone(),
            layout: Layout::POLY,
            terms: self.terms.clone(),
        };
        write!(f, "{w}")
    }
}

/// `{u, v} = ∂u/∂v1 ∂v/∂v2 − ∂u/∂v2 ∂v/∂v1`.
pub fn poisson_bracket(u: &CommPoly, v: &CommPoly) -> CommPoly {
    u.partial(Slot::First)
        .mul(&v.partial(Slot::Second))
        .sub(&u.partial(Slot::Second).mul(&v.partial(Slot::First)))
}

/// `h ↦ 0` with the generators made commutative.
pub fn classical_limit(f: &WeylExpr) -> Result<CommPoly, WeylError> {
    let zero: BTreeMap<Symbol, ParamRat> = [(Symbol::H, ParamRat::zero())].into();
    let mut terms = Terms::new();
    for (k, c) in f.terms() {
        let v = c
            .specialize(&zero)
            .map_err(|_| WeylError::PoleAtZero(c.to_string()))?;
        accumulate(&mut terms, *k, v);
    }
    Ok(CommPoly {
        vars: f.vars().clone(),
        terms,
    })
}
