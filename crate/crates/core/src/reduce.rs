//! Reduction of monomials against an annihilator pair, with certificates.
//!
//! An [`AnnihilatorPair`] holds operators `A = L*Dx^m + lower` (free of Dy)
//! and `B = L*Dy^n + lower` (free of Dx) with a common leading coefficient
//! `L`. Reduction rewrites `L*Dx^alpha*Dy^beta` as a left combination of `A`
//! and `B` plus a remainder of lower order; iterating, with one extra factor
//! of `L` per round, pushes the remainder entirely under the stairs
//! (Dx-order < m and Dy-order < n). Every step keeps exact cofactors, so
//! each result carries a replayable identity
//!
//! ```text
//! L^max(k,1) * Dx^alpha * Dy^beta = remainder + U*A + V*B
//! ```
//!
//! with `k = 0` reserved for the already-under-the-stairs case, whose
//! remainder is `L*Dx^alpha*Dy^beta` itself.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::poly::{BiPoly, Var};
use crate::scalar::Field;
use crate::weyl::{commute_past, OpMono, WeylOperator};

/// Validated operator pair sharing a leading coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AnnihilatorPair<K> {
    a: WeylOperator<K>,
    b: WeylOperator<K>,
    l: BiPoly<K>,
    m: u32,
    n: u32,
    d: u32,
}

impl<K: Field> AnnihilatorPair<K> {
    /// `A`, the Dx-only operator.
    pub fn a(&self) -> &WeylOperator<K> {
        &self.a
    }

    /// `B`, the Dy-only operator.
    pub fn b(&self) -> &WeylOperator<K> {
        &self.b
    }

    /// Shared leading coefficient.
    pub fn l(&self) -> &BiPoly<K> {
        &self.l
    }

    /// Dx-order of `A`.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Dy-order of `B`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Degree budget: the largest total degree among all coefficients.
    pub fn d(&self) -> u32 {
        self.d
    }

    /// `A - L*Dx^m`: the sub-leading part of `A`.
    fn lower_a(&self) -> WeylOperator<K> {
        &self.a - &WeylOperator::term(self.m, 0, self.l.clone())
    }

    fn lower_b(&self) -> WeylOperator<K> {
        &self.b - &WeylOperator::term(0, self.n, self.l.clone())
    }
}

/// Validate a raw operator pair and equalize leading coefficients.
///
/// If the leading coefficients differ, `A` is left-multiplied by the leading
/// coefficient of `B` and vice versa, making `L` their product. Applying
/// this to an already-valid pair returns it unchanged.
pub fn make_system<K: Field>(
    raw_a: WeylOperator<K>,
    raw_b: WeylOperator<K>,
) -> Result<AnnihilatorPair<K>> {
    if raw_a.is_zero() {
        return Err(Error::InvalidSystem("A is the zero operator".into()));
    }
    if raw_b.is_zero() {
        return Err(Error::InvalidSystem("B is the zero operator".into()));
    }
    if !raw_a.only_dx() {
        return Err(Error::InvalidSystem("A must involve Dx only".into()));
    }
    if !raw_b.only_dy() {
        return Err(Error::InvalidSystem("B must involve Dy only".into()));
    }
    let m = raw_a.order_dx().unwrap();
    let n = raw_b.order_dy().unwrap();
    if m == 0 {
        return Err(Error::InvalidSystem("A must have positive Dx-order".into()));
    }
    if n == 0 {
        return Err(Error::InvalidSystem("B must have positive Dy-order".into()));
    }
    let la = raw_a.coeff(m, 0);
    let lb = raw_b.coeff(0, n);
    let (a, b) = if la == lb {
        (raw_a, raw_b)
    } else {
        (raw_a.mul_poly_left(&lb), raw_b.mul_poly_left(&la))
    };
    let l = a.coeff(m, 0);
    let d = a
        .terms()
        .chain(b.terms())
        .filter_map(|(_, c)| c.total_degree())
        .max()
        .unwrap_or(0);
    Ok(AnnihilatorPair { a, b, l, m, n, d })
}

/// One reduction of `L * Dx^alpha * Dy^beta`, with exact cofactors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReducedForm<K> {
    pub alpha: u32,
    pub beta: u32,
    /// Rounds of `L`-multiplication applied; 0 means the monomial was
    /// already under the stairs and the remainder is `L*Dx^alpha*Dy^beta`.
    pub k: u32,
    pub remainder: WeylOperator<K>,
    pub cofactor_a: WeylOperator<K>,
    pub cofactor_b: WeylOperator<K>,
}

impl<K: Field> ReducedForm<K> {
    /// Number of `L` factors on the left of the certificate identity.
    pub fn l_power(&self) -> u32 {
        self.k.max(1)
    }
}

/// Single reduction pass.
///
/// With `alpha < m` and `beta < n` the monomial is already under the stairs
/// (`k = 0`). Otherwise one substitution of `B` (preferred when
/// `beta >= n`) or `A` produces a remainder whose terms each satisfy
/// either (i < m and j < n) or i + j <= alpha + beta - 1, with coefficient
/// total degree at most `d`.
pub fn reduce_step<K: Field>(
    sys: &AnnihilatorPair<K>,
    alpha: u32,
    beta: u32,
) -> ReducedForm<K> {
    let l = &sys.l;
    if alpha < sys.m && beta < sys.n {
        return ReducedForm {
            alpha,
            beta,
            k: 0,
            remainder: WeylOperator::term(alpha, beta, l.clone()),
            cofactor_a: WeylOperator::zero(),
            cofactor_b: WeylOperator::zero(),
        };
    }
    if beta >= sys.n {
        // L*Dx^a*Dy^b = Dx^a*Dy^(b-n)*B
        //             - Dx^a*Dy^(b-n)*(B - L*Dy^n)
        //             - Dx^a*Q*Dy^n - P*Dy^b
        // where Dx^a*L = L*Dx^a + P and Dy^(b-n)*L = L*Dy^(b-n) + Q.
        let p = commute_past(l, alpha, Var::X).1;
        let q = commute_past(l, beta - sys.n, Var::Y).1;
        let v = WeylOperator::monomial(alpha, beta - sys.n);
        let t1 = &v * &sys.lower_b();
        let t2 = (&WeylOperator::monomial(alpha, 0) * &q).mul_mono_right(0, sys.n);
        let t3 = p.mul_mono_right(0, beta);
        let remainder = &(&-&t1 - &t2) - &t3;
        ReducedForm {
            alpha,
            beta,
            k: 1,
            remainder,
            cofactor_a: WeylOperator::zero(),
            cofactor_b: v,
        }
    } else {
        // Mirror image through A, using that Dx and Dy commute.
        let p = commute_past(l, beta, Var::Y).1;
        let q = commute_past(l, alpha - sys.m, Var::X).1;
        let u = WeylOperator::monomial(alpha - sys.m, beta);
        let t1 = &u * &sys.lower_a();
        let t2 = (&WeylOperator::monomial(0, beta) * &q).mul_mono_right(sys.m, 0);
        let t3 = p.mul_mono_right(alpha, 0);
        let remainder = &(&-&t1 - &t2) - &t3;
        ReducedForm {
            alpha,
            beta,
            k: 1,
            remainder,
            cofactor_a: u,
            cofactor_b: WeylOperator::zero(),
        }
    }
}

/// Split an operator into its under-the-stairs part and the rest.
fn split_stairs<K: Field>(
    op: &WeylOperator<K>,
    m: u32,
    n: u32,
) -> (WeylOperator<K>, Vec<(OpMono, BiPoly<K>)>) {
    let mut under = WeylOperator::zero();
    let mut outside = Vec::new();
    for (mono, c) in op.terms() {
        if mono.i < m && mono.j < n {
            under.add_term(*mono, c.clone());
        } else {
            outside.push((*mono, c.clone()));
        }
    }
    (under, outside)
}

/// Reduction context that memoizes per-monomial results for one system.
pub struct Reducer<'a, K: Field> {
    sys: &'a AnnihilatorPair<K>,
    steps: HashMap<(u32, u32), ReducedForm<K>>,
    fulls: HashMap<(u32, u32), ReducedForm<K>>,
}

impl<'a, K: Field> Reducer<'a, K> {
    pub fn new(sys: &'a AnnihilatorPair<K>) -> Self {
        Reducer { sys, steps: HashMap::new(), fulls: HashMap::new() }
    }

    pub fn system(&self) -> &'a AnnihilatorPair<K> {
        self.sys
    }

    pub fn step(&mut self, alpha: u32, beta: u32) -> ReducedForm<K> {
        self.steps
            .entry((alpha, beta))
            .or_insert_with(|| reduce_step(self.sys, alpha, beta))
            .clone()
    }

    /// Iterate reduction until the remainder sits under the stairs.
    ///
    /// Each round multiplies the running identity by `L` and substitutes a
    /// single reduction for every term still outside the stairs; the proved
    /// bound `k <= max(0, alpha + beta + 1 - min(m, n))` caps the rounds and
    /// is asserted.
    pub fn full(&mut self, alpha: u32, beta: u32) -> ReducedForm<K> {
        if let Some(hit) = self.fulls.get(&(alpha, beta)) {
            return hit.clone();
        }
        let sys = self.sys;
        let first = self.step(alpha, beta);
        let result = if first.k == 0 {
            first
        } else {
            let mut k = 1u32;
            let (mut under, mut outside) = split_stairs(&first.remainder, sys.m, sys.n);
            let mut u = first.cofactor_a;
            let mut v = first.cofactor_b;
            while !outside.is_empty() {
                k += 1;
                under = under.mul_poly_left(&sys.l);
                u = u.mul_poly_left(&sys.l);
                v = v.mul_poly_left(&sys.l);
                let mut acc = WeylOperator::zero();
                for (mono, c) in &outside {
                    let st = self.step(mono.i, mono.j);
                    acc = &acc + &st.remainder.mul_poly_left(c);
                    u = &u + &st.cofactor_a.mul_poly_left(c);
                    v = &v + &st.cofactor_b.mul_poly_left(c);
                }
                let (settled, rest) = split_stairs(&acc, sys.m, sys.n);
                under = &under + &settled;
                outside = rest;
            }
            let bound = (alpha as i64 + beta as i64 + 1 - sys.m.min(sys.n) as i64).max(0);
            assert!(
                (k as i64) <= bound,
                "reduction used {k} rounds, above the proved bound {bound}"
            );
            ReducedForm {
                alpha,
                beta,
                k,
                remainder: under,
                cofactor_a: u,
                cofactor_b: v,
            }
        };
        self.fulls.insert((alpha, beta), result.clone());
        result
    }
}

/// Iterated reduction of `L^k * Dx^alpha * Dy^beta` to an under-the-stairs
/// remainder. One-shot convenience over [`Reducer::full`].
pub fn reduce_full<K: Field>(
    sys: &AnnihilatorPair<K>,
    alpha: u32,
    beta: u32,
) -> ReducedForm<K> {
    Reducer::new(sys).full(alpha, beta)
}

/// One congruence of the gap demonstration: `L^l_power * Dx^m * Dy =
/// cofactor_a * A + remainder`, working modulo `A` alone.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapCertificate<K> {
    pub l_power: u32,
    pub remainder: WeylOperator<K>,
    pub cofactor_a: WeylOperator<K>,
}

/// Outcome of [`claim_gap_demo`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GapReport<K> {
    pub m: u32,
    /// dL/dy, whose vanishing decides the obstruction.
    pub l_y: BiPoly<K>,
    /// Whether the single-L normal form keeps a term of Dx-order >= m.
    pub obstruction_present: bool,
    pub single_l: GapCertificate<K>,
    pub double_l: GapCertificate<K>,
}

/// Demonstrate why reduction needs powers of `L`: reducing `L*Dx^m*Dy`
/// modulo the left ideal of `A` alone strands a term of Dx-order `m`
/// exactly when dL/dy is nonzero, while one extra factor of `L` brings
/// every Dx-order below `m` with Dy-order at most 1. Both normal forms are
/// returned with their cofactors.
pub fn claim_gap_demo<K: Field>(sys: &AnnihilatorPair<K>) -> GapReport<K> {
    let l = &sys.l;
    let m = sys.m;
    let l_y = l.diff(Var::Y);
    // A = L*Dx^m - R0, so L*Dx^m = A + R0 with R0 of Dx-order < m.
    let r0 = -&sys.lower_a();
    let dy_r0 = &WeylOperator::dy() * &r0;
    // Dy * (L*Dx^m) = Dy*A + Dy*R0 and Dy*L = L*Dy + L_y give
    // L*Dx^m*Dy = Dy*A + Dy*R0 - L_y*Dx^m.
    let single_rem = &dy_r0 - &WeylOperator::term(m, 0, l_y.clone());
    let single = GapCertificate {
        l_power: 1,
        remainder: single_rem.clone(),
        cofactor_a: WeylOperator::dy(),
    };
    // Multiplying by L and substituting L*Dx^m = A + R0 once more:
    // L^2*Dx^m*Dy = (L*Dy - L_y)*A + L*(Dy*R0) - L_y*R0.
    let double = GapCertificate {
        l_power: 2,
        remainder: &dy_r0.mul_poly_left(l) - &r0.mul_poly_left(&l_y),
        cofactor_a: &WeylOperator::term(0, 1, l.clone()) - &WeylOperator::from_poly(l_y.clone()),
    };
    let obstruction_present = single_rem.terms().any(|(mono, _)| mono.i >= m);
    GapReport { m, l_y, obstruction_present, single_l: single, double_l: double }
}
