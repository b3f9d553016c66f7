//! Commuting scalar symbols and their monomials.
//!
//! Every scalar coefficient in the crate lives in one fixed, globally ordered
//! symbol space: the parameters `a, b, c, d, e`, the deformation parameter
//! `h`, the time `t`, the root variables `alpha0..alpha4`, and an unbounded
//! family of unknowns `k1, k2, ...`. The order of that list is the variable
//! order used by the graded-lex term order.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A commuting scalar symbol. The numeric id defines the variable order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol(u16);

const NAMED: [&str; 12] = [
    "a", "b", "c", "d", "e", "h", "t", "alpha0", "alpha1", "alpha2", "alpha3", "alpha4",
];
const FIRST_UNKNOWN: u16 = NAMED.len() as u16;

impl Symbol {
    pub const A: Symbol = Symbol(0);
    pub const B: Symbol = Symbol(1);
    pub const C: Symbol = Symbol(2);
    pub const D: Symbol = Symbol(3);
    pub const E: Symbol = Symbol(4);
    pub const H: Symbol = Symbol(5);
    pub const T: Symbol = Symbol(6);

    /// `alpha_i` for `i` in `0..5`.
    pub fn alpha(i: usize) -> Symbol {
        assert!(i < 5, "alpha index {i} out of range");
        Symbol(7 + i as u16)
    }

    /// The unknown `k_j`, one-based.
    pub fn unknown(j: usize) -> Symbol {
        assert!(j >= 1, "unknowns are one-based");
        let id = FIRST_UNKNOWN as usize + j - 1;
        Symbol(u16::try_from(id).expect("unknown index overflows symbol space"))
    }

    /// One-based index if this is an unknown `k_j`.
    pub fn unknown_index(self) -> Option<usize> {
        (self.0 >= FIRST_UNKNOWN).then(|| (self.0 - FIRST_UNKNOWN) as usize + 1)
    }

    pub fn alpha_index(self) -> Option<usize> {
        (7..12).contains(&self.0).then(|| (self.0 - 7) as usize)
    }

    pub fn is_unknown(self) -> bool {
        self.0 >= FIRST_UNKNOWN
    }

    pub fn id(self) -> u16 {
        self.0
    }

    pub fn name(self) -> String {
        match self.unknown_index() {
            Some(j) => format!("k{j}"),
            None => NAMED[self.0 as usize].to_string(),
        }
    }

    pub fn from_name(name: &str) -> Option<Symbol> {
        if let Some(pos) = NAMED.iter().position(|n| *n == name) {
            return Some(Symbol(pos as u16));
        }
        let digits = name.strip_prefix('k')?;
        if digits.is_empty()
            || digits.starts_with('0')
            || !digits.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let j: usize = digits.parse().ok()?;
        (FIRST_UNKNOWN as usize + j - 1 <= u16::MAX as usize).then(|| Symbol::unknown(j))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A power product of symbols, stored sparsely as `(symbol, exponent)` pairs
/// sorted by symbol with strictly positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(SmallVec<[(Symbol, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Self::power(s, 1)
    }

    pub fn power(s: Symbol, e: u32) -> Self {
        let mut v = SmallVec::new();
        if e > 0 {
            v.push((s, e));
        }
        Monomial(v)
    }

    /// Builds from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, u32)>) -> Self {
        let mut v: SmallVec<[(Symbol, u32); 4]> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        v.sort_by_key(|p| p.0);
        let mut out: SmallVec<[(Symbol, u32); 4]> = SmallVec::with_capacity(v.len());
        for (s, e) in v {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, s: Symbol) -> u32 {
        self.0
            .binary_search_by_key(&s, |p| p.0)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Symbol, u32)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == s {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => continue,
                    Ordering::Greater => out.push((s, e - f)),
                }
            } else {
                out.push((s, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Removes `s` entirely, returning its former exponent.
    pub fn without(&self, s: Symbol) -> (Monomial, u32) {
        let mut e = 0;
        let v = self
            .0
            .iter()
            .copied()
            .filter(|p| {
                if p.0 == s {
                    e = p.1;
                    false
                } else {
                    true
                }
            })
            .collect();
        (Monomial(v), e)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(self.0.iter().filter_map(|&(s, e)| {
            let f = other.exponent(s);
            (f > 0).then(|| (s, e.min(f)))
        }))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// earliest symbol in the fixed order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            let (mut i, mut j) = (0, 0);
            loop {
                match (a.get(i), b.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {
                            if x.1 != y.1 {
                                return x.1.cmp(&y.1);
                            }
                            i += 1;
                            j += 1;
                        }
                    },
                }
            }
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for s in [
            Symbol::A,
            Symbol::H,
            Symbol::T,
            Symbol::alpha(3),
            Symbol::unknown(1),
            Symbol::unknown(48),
        ] {
            assert_eq!(Symbol::from_name(&s.name()), Some(s));
        }
        assert_eq!(Symbol::from_name("k0"), None);
        assert_eq!(Symbol::from_name("k01"), None);
        assert_eq!(Symbol::from_name("x"), None);
    }

    #[test]
    fn grlex_prefers_degree_then_earlier_symbols() {
        let a2 = Monomial::power(Symbol::A, 2);
        let ab = Monomial::from_pairs([(Symbol::A, 1), (Symbol::B, 1)]);
        let b2 = Monomial::power(Symbol::B, 2);
        let c3 = Monomial::power(Symbol::C, 3);
        assert!(a2 > ab && ab > b2 && c3 > a2);
        assert!(Monomial::var(Symbol::A) > Monomial::var(Symbol::H));
        assert!(Monomial::one() < Monomial::var(Symbol::unknown(7)));
    }

    #[test]
    fn division_and_gcd() {
        let m = Monomial::from_pairs([(Symbol::A, 2), (Symbol::H, 1)]);
        let n = Monomial::var(Symbol::A);
        assert_eq!(
            m.div(&n),
            Some(Monomial::from_pairs([(Symbol::A, 1), (Symbol::H, 1)]))
        );
        assert_eq!(n.div(&m), None);
        assert_eq!(m.div(&Monomial::var(Symbol::B)), None);
        assert_eq!(m.gcd(&n), n);
        assert_eq!(m.mul(&n).exponent(Symbol::A), 3);
    }
}
