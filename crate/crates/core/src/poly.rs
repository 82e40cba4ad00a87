//! Sparse bivariate polynomials over a coefficient field.
//!
//! `BiPoly<K>` stores a map from exponent pairs to nonzero coefficients, so
//! structural equality is value equality. Term order is graded: total degree
//! first, then ascending power of `y` (1, x, y, x², xy, y², …). That order is
//! load-bearing — serialization, matrix column layout, and all printed output
//! follow it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};



use crate::scalar::{from_u32, Field};

/// The two variables of the base ring.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
}

/// Exponent pair of a monomial `x^degx * y^degy`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Mono {
    pub degx: u32,
    pub degy: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { degx: 0, degy: 0 };

    pub fn new(degx: u32, degy: u32) -> Self {
        Mono { degx, degy }
    }

    pub fn total(&self) -> u32 {
        self.degx + self.degy
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono::new(self.degx + other.degx, self.degy + other.degy)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total(), self.degy).cmp(&(other.total(), other.degy))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `x` and `y`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPoly<K> {
    terms: BTreeMap<Mono, K>,
}

impl<K: Field> BiPoly<K> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(K::one())
    }

    pub fn constant(c: K) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::monomial(1, 0, K::one()),
            Var::Y => Self::monomial(0, 1, K::one()),
        }
    }

    pub fn monomial(degx: u32, degy: u32, c: K) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::new(degx, degy), c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, K)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (degx, degy, c) in it {
            p.add_term(Mono::new(degx, degy), c);
        }
        p
    }

    /// Add `c * mono`, keeping the zero-stripping invariant.
    pub(crate) fn add_term(&mut self, mono: Mono, c: K) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    e.insert(sum);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::ONE)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// Terms in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &K)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, degx: u32, degy: u32) -> K {
        self.terms
            .get(&Mono::new(degx, degy))
            .cloned()
            .unwrap_or_else(K::zero)
    }

    /// Total degree; `None` plays the role of -infinity for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Mono::total).max()
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| match v {
                Var::X => m.degx,
                Var::Y => m.degy,
            })
            .max()
    }

    /// Partial derivative.
    pub fn diff(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (e, dm) = match v {
                Var::X => (m.degx, Mono::new(m.degx.wrapping_sub(1), m.degy)),
                Var::Y => (m.degy, Mono::new(m.degx, m.degy.wrapping_sub(1))),
            };
            if e > 0 {
                out.add_term(dm, c.clone() * from_u32::<K>(e));
            }
        }
        out
    }

    /// Iterated partial derivative, `order` times with respect to `v`.
    pub fn diff_iter(&self, v: Var, order: u32) -> Self {
        let mut p = self.clone();
        for _ in 0..order {
            if p.is_zero() {
                break;
            }
            p = p.diff(v);
        }
        p
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.add_term(*m, a.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }
}

impl<K: Field> Add for &BiPoly<K> {
    type Output = BiPoly<K>;
    fn add(self, rhs: &BiPoly<K>) -> BiPoly<K> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<K: Field> Sub for &BiPoly<K> {
    type Output = BiPoly<K>;
    fn sub(self, rhs: &BiPoly<K>) -> BiPoly<K> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone().neg());
        }
        out
    }
}

impl<K: Field> Mul for &BiPoly<K> {
    type Output = BiPoly<K>;
    fn mul(self, rhs: &BiPoly<K>) -> BiPoly<K> {
        let mut out = BiPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<K: Field> Neg for &BiPoly<K> {
    type Output = BiPoly<K>;
    fn neg(self) -> BiPoly<K> {
        let mut out = BiPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone().neg());
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Printing. Operators reuse the same summand machinery, so the printed form
// of any value reparses under the expression grammar.
// ---------------------------------------------------------------------------

pub(crate) struct Summand {
    pub neg: bool,
    pub body: String,
}

/// Format `mag * x^degx * y^degy * <dpart>` with the usual omissions
/// (unit coefficients, exponent one). `mag` must be nonnegative.
pub(crate) fn term_body<K: Field>(mag: &K, mono: &Mono, dpart: &str) -> String {
    let mut pieces: Vec<String> = Vec::new();
    let unit = mag.is_one();
    if !unit || (mono.total() == 0 && dpart.is_empty()) {
        pieces.push(format!("{mag}"));
    }
    for (name, e) in [("x", mono.degx), ("y", mono.degy)] {
        match e {
            0 => {}
            1 => pieces.push(name.to_string()),
            _ => pieces.push(format!("{name}^{e}")),
        }
    }
    if !dpart.is_empty() {
        pieces.push(dpart.to_string());
    }
    pieces.join("*")
}

pub(crate) fn poly_summands<K: Field>(p: &BiPoly<K>, dpart: &str) -> Vec<Summand> {
    p.terms()
        .map(|(m, c)| Summand {
            neg: c.is_negative(),
            body: term_body(&c.abs(), m, dpart),
        })
        .collect()
}

pub(crate) fn write_summands(f: &mut fmt::Formatter<'_>, summands: &[Summand]) -> fmt::Result {
    if summands.is_empty() {
        return write!(f, "0");
    }
    for (idx, s) in summands.iter().enumerate() {
        if idx == 0 {
            if s.neg {
                write!(f, "-")?;
            }
        } else if s.neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        write!(f, "{}", s.body)?;
    }
    Ok(())
}

impl<K: Field> fmt::Display for BiPoly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_summands(f, &poly_summands(self, ""))
    }
}
