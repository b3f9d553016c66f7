use std::collections::HashMap;

use super::element::{accumulate, Convention, Layout, Slot, Terms, WeylExpr};
use super::WeylError;
use crate::coeff::{int, ParamPoly, ParamRat, Symbol};

/// The derivation `δ = g(t)·d/dt` of a Hamiltonian flow: `δ(v) = (1/h)[v, H]`
/// on generators and `δ(c) = g·∂c/∂t` on scalar coefficients.
#[derive(Clone, Debug)]
pub struct FlowDerivation {
    pub dv1: WeylExpr,
    pub dv2: WeylExpr,
    pub g: ParamPoly,
    hamiltonian: Option<WeylExpr>,
}

impl FlowDerivation {
    /// A derivation given directly by its generator images.
    pub fn from_images(dv1: WeylExpr, dv2: WeylExpr, g: ParamPoly) -> FlowDerivation {
        FlowDerivation {
            dv1,
            dv2,
            g,
            hamiltonian: None,
        }
    }

    pub fn hamiltonian(&self) -> Option<&WeylExpr> {
        self.hamiltonian.as_ref()
    }

    /// The same derivation without its Hamiltonian, forcing the Leibniz path.
    pub fn leibniz_only(&self) -> FlowDerivation {
        FlowDerivation {
            hamiltonian: None,
            ..self.clone()
        }
    }
}

/// `δ(v1) = (1/h)[v1, H]`, `δ(v2) = (1/h)[v2, H]`, with time weight `g`.
pub fn hamilton_flow(h: &WeylExpr, g: &ParamPoly) -> Result<FlowDerivation, WeylError> {
    if !h.is_polynomial() {
        return Err(WeylError::NotPolynomial(h.to_string()));
    }
    let (dv1, dv2) = bracket_images(h)?;
    Ok(FlowDerivation {
        dv1,
        dv2,
        g: g.clone(),
        hamiltonian: Some(h.clone()),
    })
}

fn bracket_images(h: &WeylExpr) -> Result<(WeylExpr, WeylExpr), WeylError> {
    let x = WeylExpr::generator(h.vars(), h.layout(), Slot::First);
    let y = WeylExpr::generator(h.vars(), h.layout(), Slot::Second);
    Ok((
        x.commutator(h)?.div_h_exact()?,
        y.commutator(h)?.div_h_exact()?,
    ))
}

/// `(∂H/∂v2, ∂H/∂v1)` taken formally on the normal-ordered coefficients.
/// These equal `(1/h)[v1, H]` and `−(1/h)[v2, H]` in either convention.
pub fn hamilton_partials(h: &WeylExpr) -> Result<(WeylExpr, WeylExpr), WeylError> {
    if !h.is_polynomial() {
        return Err(WeylError::NotPolynomial(h.to_string()));
    }
    Ok((
        formal_partial(h, Slot::Second),
        formal_partial(h, Slot::First),
    ))
}

pub(crate) fn formal_partial(h: &WeylExpr, slot: Slot) -> WeylExpr {
    let mut terms = Terms::new();
    for (&(m, n), c) in h.terms() {
        let (e, key) = match slot {
            Slot::First => (m, (m - 1, n)),
            Slot::Second => (n, (m, n - 1)),
        };
        if e != 0 {
            accumulate(&mut terms, key, c.scale(&int(e as i64)));
        }
    }
    WeylExpr {
        vars: h.vars().clone(),
        layout: h.layout(),
        terms,
    }
}

fn weight_term(d: &FlowDerivation, f: &WeylExpr) -> WeylExpr {
    if d.g.is_zero() {
        return WeylExpr::zero(f.vars(), f.layout());
    }
    f.partial_t().scale(&ParamRat::from_poly(d.g.clone()))
}

/// Extends `d` to `f`: Leibniz rule in written order on monomials,
/// `δ(v⁻¹) = −v⁻¹ δ(v) v⁻¹`, and `g·∂/∂t` on coefficients. When the
/// derivation carries its Hamiltonian the commutator form is used instead.
pub fn apply_derivation(d: &FlowDerivation, f: &WeylExpr) -> Result<WeylExpr, WeylError> {
    if d.dv1.vars() != f.vars() {
        return Err(WeylError::VariableMismatch(
            d.dv1.vars().to_string(),
            f.vars().to_string(),
        ));
    }
    let layout = f.layout();
    if let Some(h) = &d.hamiltonian {
        let h = h.to_layout(Layout {
            laurent: None,
            ..layout
        })?;
        let br = f.commutator(&h)?.div_h_exact()?;
        return br.try_add(&weight_term(d, f));
    }
    let dv1 = d.dv1.to_layout(widen(d.dv1.layout(), layout)?)?;
    let dv2 = d.dv2.to_layout(widen(d.dv2.layout(), layout)?)?;
    let (lslot, rslot) = match layout.convention {
        Convention::FirstLeft => (Slot::First, Slot::Second),
        Convention::SecondLeft => (Slot::Second, Slot::First),
    };
    let images = |s: Slot| if s == Slot::First { &dv1 } else { &dv2 };
    let mut left = PowerDerivatives::new(
        WeylExpr::generator(f.vars(), layout, lslot),
        images(lslot).clone(),
    );
    let mut right = PowerDerivatives::new(
        WeylExpr::generator(f.vars(), layout, rslot),
        images(rslot).clone(),
    );
    let mut out = weight_term(d, f);
    for (&key, c) in f.terms() {
        let (l, r) = match layout.convention {
            Convention::FirstLeft => key,
            Convention::SecondLeft => (key.1, key.0),
        };
        let a = left.power(l)?;
        let b = right.power(r)?;
        let da = left.derivative(l)?;
        let db = right.derivative(r)?;
        let t = da.try_mul(&b)?.try_add(&a.try_mul(&db)?)?;
        out = out.try_add(&t.scale(c))?;
    }
    Ok(out)
}

/// The layout of an image once placed in `target`: convention follows the
/// target, Laurent side must agree when both declare one.
fn widen(from: Layout, target: Layout) -> Result<Layout, WeylError> {
    match (from.laurent, target.laurent) {
        (Some(a), Some(b)) if a != b => Err(WeylError::LaurentMismatch),
        (a, b) => Ok(Layout {
            convention: target.convention,
            laurent: b.or(a),
        }),
    }
}

struct PowerDerivatives {
    gen: WeylExpr,
    dgen: WeylExpr,
    pows: HashMap<i32, WeylExpr>,
    ders: HashMap<i32, WeylExpr>,
}

impl PowerDerivatives {
    fn new(gen: WeylExpr, dgen: WeylExpr) -> Self {
        let mut pows = HashMap::new();
        pows.insert(0, WeylExpr::one(gen.vars(), gen.layout()));
        pows.insert(1, gen.clone());
        let mut ders = HashMap::new();
        ders.insert(0, WeylExpr::zero(gen.vars(), gen.layout()));
        ders.insert(1, dgen.clone());
        PowerDerivatives {
            gen,
            dgen,
            pows,
            ders,
        }
    }

    fn power(&mut self, e: i32) -> Result<WeylExpr, WeylError> {
        if let Some(p) = self.pows.get(&e) {
            return Ok(p.clone());
        }
        let step = if e > 0 {
            self.gen.clone()
        } else {
            self.gen.inverse()?
        };
        let prev = self.power(e - e.signum())?;
        let p = prev.try_mul(&step)?;
        self.pows.insert(e, p.clone());
        Ok(p)
    }

    /// `δ(v^e) = δ(v^(e∓1))·v^(±1) + v^(e∓1)·δ(v^(±1))`.
    fn derivative(&mut self, e: i32) -> Result<WeylExpr, WeylError> {
        if let Some(d) = self.ders.get(&e) {
            return Ok(d.clone());
        }
        let d = if e == -1 {
            let inv = self.power(-1)?;
            inv.try_mul(&self.dgen)?.try_mul(&inv)?.neg()
        } else {
            let s = e.signum();
            let unit = self.power(s)?;
            let dunit = self.derivative(s)?;
            let prev = self.power(e - s)?;
            let dprev = self.derivative(e - s)?;
            dprev.try_mul(&unit)?.try_add(&prev.try_mul(&dunit)?)?
        };
        self.ders.insert(e, d.clone());
        Ok(d)
    }
}

impl WeylExpr {
    /// Whether `t` appears in any coefficient.
    pub fn depends_on_t(&self) -> bool {
        self.contains_symbol(Symbol::T)
    }
}
