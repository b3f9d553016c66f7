use std::collections::HashMap;

use super::element::{Convention, WeylExpr};
use super::WeylError;
use crate::coeff::ParamRat;

#[derive(Clone, Copy, Debug)]
pub struct SubstOptions {
    /// Verify `[φ, ψ] = h` before substituting.
    pub check_canonical: bool,
}

impl Default for SubstOptions {
    fn default() -> Self {
        SubstOptions {
            check_canonical: true,
        }
    }
}

struct Powers<'a> {
    base: &'a WeylExpr,
    inv: Option<WeylExpr>,
    cache: HashMap<i32, WeylExpr>,
}

impl<'a> Powers<'a> {
    fn new(base: &'a WeylExpr) -> Self {
        let mut cache = HashMap::new();
        cache.insert(0, WeylExpr::one(base.vars(), base.layout()));
        cache.insert(1, base.clone());
        Powers {
            base,
            inv: None,
            cache,
        }
    }

    fn get(&mut self, e: i32) -> Result<WeylExpr, WeylError> {
        if let Some(v) = self.cache.get(&e) {
            return Ok(v.clone());
        }
        let v = if e > 0 {
            self.get(e - 1)?.try_mul(self.base)?
        } else {
            if self.inv.is_none() {
                self.inv = Some(self.base.inverse()?);
            }
            let inv = self.inv.clone().expect("set above");
            self.get(e + 1)?.try_mul(&inv)?
        };
        self.cache.insert(e, v.clone());
        Ok(v)
    }
}

/// Order-preserving image of `f` under `v1 ↦ φ`, `v2 ↦ ψ`. A negative power
/// of a generator maps to the same power of its image's inverse, which must
/// exist in the target algebra.
pub fn substitute(
    f: &WeylExpr,
    phi: &WeylExpr,
    psi: &WeylExpr,
    opts: SubstOptions,
) -> Result<WeylExpr, WeylError> {
    // Bring polynomial images into a common layout.
    let (phi, psi) = align(phi, psi)?;
    if opts.check_canonical {
        let b = phi.commutator(&psi)?;
        let h = WeylExpr::scalar(
            phi.vars(),
            phi.layout(),
            ParamRat::var(crate::coeff::Symbol::H),
        );
        if b != h {
            return Err(WeylError::NonCanonical(b.to_string()));
        }
    }
    let mut out = WeylExpr::zero(phi.vars(), phi.layout().join_laurent(psi.layout()));
    let mut pp = Powers::new(&phi);
    let mut qq = Powers::new(&psi);
    for (&(m, n), c) in f.terms() {
        let (a, b) = (pp.get(m)?, qq.get(n)?);
        let prod = match f.convention() {
            Convention::FirstLeft => a.try_mul(&b)?,
            Convention::SecondLeft => b.try_mul(&a)?,
        };
        out = out.try_add(&prod.scale(c))?;
    }
    Ok(out)
}

fn align(phi: &WeylExpr, psi: &WeylExpr) -> Result<(WeylExpr, WeylExpr), WeylError> {
    if phi.layout() == psi.layout() {
        return Ok((phi.clone(), psi.clone()));
    }
    let target = match (phi.layout().laurent, psi.layout().laurent) {
        (Some(_), None) => phi.layout(),
        (None, Some(_)) => psi.layout(),
        (None, None) => phi.layout(),
        (Some(_), Some(_)) if phi.layout().laurent == psi.layout().laurent => phi.layout(),
        _ => return Err(WeylError::LaurentMismatch),
    };
    Ok((phi.to_layout(target)?, psi.to_layout(target)?))
}

impl super::Layout {
    pub(crate) fn join_laurent(self, other: super::Layout) -> super::Layout {
        super::Layout {
            laurent: self.laurent.or(other.laurent),
            ..self
        }
    }
}
