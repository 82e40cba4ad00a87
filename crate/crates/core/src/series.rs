//! Truncated power series and operator application.
//!
//! A `TruncatedSeries` holds the coefficients of a formal power series on all
//! monomials of total degree strictly below its order; zeros are stored
//! implicitly. Applying an operator costs accuracy: differentiating pulls
//! information down from coefficients beyond the truncation and multiplying
//! by a polynomial pushes terms up toward it, so a result is only trusted
//! below `order - total_order - coefficient_degree`. The application routine
//! computes that bound and refuses to produce an empty answer.

use std::collections::BTreeMap;



use crate::error::{Error, Result};
use crate::poly::Mono;
use crate::scalar::{from_u32, Field};
use crate::weyl::WeylOperator;

/// Power series coefficients below a truncation order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries<K> {
    order: u32,
    coeffs: BTreeMap<Mono, K>,
}

impl<K: Field> TruncatedSeries<K> {
    /// The zero series, trusted up to `order`.
    pub fn zero(order: u32) -> Self {
        TruncatedSeries { order, coeffs: BTreeMap::new() }
    }

    /// Build a series by evaluating `f(s, t)` on every pair with s + t < order.
    pub fn from_fn(order: u32, mut f: impl FnMut(u32, u32) -> K) -> Self {
        let mut out = Self::zero(order);
        for total in 0..order {
            for s in (0..=total).rev() {
                let t = total - s;
                out.set(s, t, f(s, t));
            }
        }
        out
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn set(&mut self, s: u32, t: u32, c: K) {
        debug_assert!(s + t < self.order);
        if c.is_zero() {
            self.coeffs.remove(&Mono::new(s, t));
        } else {
            self.coeffs.insert(Mono::new(s, t), c);
        }
    }

    fn add_to(&mut self, s: u32, t: u32, c: K) {
        if c.is_zero() {
            return;
        }
        let cur = self.coeff(s, t);
        self.set(s, t, cur + c);
    }

    pub fn coeff(&self, s: u32, t: u32) -> K {
        self.coeffs
            .get(&Mono::new(s, t))
            .cloned()
            .unwrap_or_else(K::zero)
    }

    /// Nonzero coefficients in graded order.
    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &K)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// First nonzero coefficient in graded order, if any.
    pub fn first_nonzero(&self) -> Option<(Mono, K)> {
        self.coeffs.iter().next().map(|(m, c)| (*m, c.clone()))
    }
}

/// s * (s-1) * ... * (s-i+1) as a field element.
fn falling<K: Field>(s: u32, i: u32) -> K {
    let mut acc = K::one();
    for l in 0..i {
        acc = acc * from_u32::<K>(s - l);
    }
    acc
}

impl<K: Field> WeylOperator<K> {
    /// Apply the operator to a truncated series.
    ///
    /// The result order is `s.order() - r - g` where `r` is the operator's
    /// total derivative order and `g` its largest coefficient degree; an
    /// error is returned when nothing survives that bound.
    pub fn apply(&self, s: &TruncatedSeries<K>) -> Result<TruncatedSeries<K>> {
        let r = self.total_order();
        let g = self.coeff_degree();
        let required = r + g;
        if s.order() <= required {
            return Err(Error::TruncationTooShort {
                required,
                available: s.order(),
            });
        }
        let out_order = s.order() - required;
        let mut out = TruncatedSeries::zero(out_order);
        for (om, c) in self.terms() {
            for (pm, k) in c.terms() {
                for (sm, v) in s.iter() {
                    // d^i/dx^i d^j/dy^j of x^s y^t, then shifted by the
                    // coefficient monomial.
                    if sm.degx < om.i || sm.degy < om.j {
                        continue;
                    }
                    let ds = sm.degx - om.i + pm.degx;
                    let dt = sm.degy - om.j + pm.degy;
                    if ds + dt >= out_order {
                        continue;
                    }
                    let factor = falling::<K>(sm.degx, om.i) * falling::<K>(sm.degy, om.j);
                    out.add_to(ds, dt, v.clone() * factor * k.clone());
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use crate::{Operator, Poly, Rational, Series};
    use num_integer::binomial;
    use num_bigint::BigInt;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// Coefficients of 1/(1-x-y): binomial(s+t, s).
    fn geometric(order: u32) -> Series {
        Series::from_fn(order, |s, t| {
            Rational::from_integer(binomial(BigInt::from(s + t), BigInt::from(s)))
        })
    }

    #[test]
    fn derivative_of_x_is_one() {
        let mut s = Series::zero(4);
        s.set(1, 0, q(1));
        let out = Operator::dx().apply(&s).unwrap();
        assert_eq!(out.order(), 3);
        assert_eq!(out.coeff(0, 0), q(1));
        assert_eq!(out.iter().count(), 1);
    }

    #[test]
    fn annihilator_kills_geometric_series() {
        let ell = Poly::from_terms([(0, 0, q(1)), (1, 0, q(-1)), (0, 1, q(-1))]);
        let a = &Operator::term(1, 0, ell) - &Operator::one();
        let out = a.apply(&geometric(12)).unwrap();
        assert_eq!(out.order(), 12 - 1 - 1);
        assert!(out.is_zero());
    }

    #[test]
    fn symmetry_operator_kills_geometric_series() {
        let s = &Operator::dx() - &Operator::dy();
        let out = s.apply(&geometric(10)).unwrap();
        assert!(out.is_zero());
    }

    #[test]
    fn nonannihilator_leaves_residue() {
        let out = Operator::dx().apply(&geometric(6)).unwrap();
        assert!(!out.is_zero());
        let (m, c) = out.first_nonzero().unwrap();
        assert_eq!((m.degx, m.degy, c), (0, 0, q(1)));
    }

    #[test]
    fn too_short_truncation_is_rejected() {
        let s = Series::zero(2);
        let op = Operator::term(1, 0, Poly::from_terms([(1, 0, q(2))]));
        // r = 1, g = 1: order 2 leaves nothing.
        assert!(matches!(
            op.apply(&s),
            Err(crate::Error::TruncationTooShort { required: 2, available: 2 })
        ));
    }
}
