//! Operators in the algebra K\[x,y\]<Dx,Dy>.
//!
//! Every operator is kept in normal form: a sum of terms `c(x,y)*Dx^i*Dy^j`
//! with the polynomial coefficient on the left. Multiplication is the only
//! nontrivial operation; it moves derivative monomials across coefficients
//! with the product rule, so `Dx*x` comes out as `x*Dx + 1`.
//!
//! The expansion identities
//!
//! ```text
//! Dv^k * f = sum_l  binom(k,l) * (d^l f / dv^l) * Dv^(k-l)        (push right)
//! f * Dv^k = sum_l (-1)^l binom(k,l) * Dv^(k-l) * (d^l f / dv^l)  (push left)
//! ```
//!
//! are implemented directly from these closed forms, not in terms of each
//! other, so the multiplication routine and the two expansions can be tested
//! against one another as independent claims.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};


use crate::poly::{poly_summands, term_body, write_summands, BiPoly, Summand, Var};
use crate::scalar::Field;

/// Derivative part `Dx^i * Dy^j` of a normal-form term.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct OpMono {
    pub i: u32,
    pub j: u32,
}

impl OpMono {
    pub fn new(i: u32, j: u32) -> Self {
        OpMono { i, j }
    }

    pub fn total(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for OpMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total(), self.j).cmp(&(other.total(), other.j))
    }
}

impl PartialOrd for OpMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Normal-form operator: map from derivative monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylOperator<K> {
    terms: BTreeMap<OpMono, BiPoly<K>>,
}

/// Binomial rows 0..=max by the Pascal recurrence, computed in the field.
fn pascal_rows<K: Field>(max: u32) -> Vec<Vec<K>> {
    let mut rows: Vec<Vec<K>> = vec![vec![K::one()]];
    for k in 1..=max as usize {
        let prev = &rows[k - 1];
        let mut row = Vec::with_capacity(k + 1);
        row.push(K::one());
        for l in 1..k {
            row.push(prev[l - 1].clone() + prev[l].clone());
        }
        row.push(K::one());
        rows.push(row);
    }
    rows
}

impl<K: Field> WeylOperator<K> {
    pub fn zero() -> Self {
        WeylOperator { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(BiPoly::one())
    }

    pub fn from_poly(p: BiPoly<K>) -> Self {
        Self::term(0, 0, p)
    }

    /// The bare monomial `Dx^i * Dy^j`.
    pub fn monomial(i: u32, j: u32) -> Self {
        Self::term(i, j, BiPoly::one())
    }

    pub fn dx() -> Self {
        Self::monomial(1, 0)
    }

    pub fn dy() -> Self {
        Self::monomial(0, 1)
    }

    /// Single term `p * Dx^i * Dy^j`.
    pub fn term(i: u32, j: u32, p: BiPoly<K>) -> Self {
        let mut op = Self::zero();
        op.add_term(OpMono::new(i, j), p);
        op
    }

    fn var_monomial(v: Var, k: u32) -> OpMono {
        match v {
            Var::X => OpMono::new(k, 0),
            Var::Y => OpMono::new(0, k),
        }
    }

    pub(crate) fn add_term(&mut self, mono: OpMono, p: BiPoly<K>) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = &*e.get() + &p;
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

    /// Terms in graded order of the derivative monomial.
    pub fn terms(&self) -> impl Iterator<Item = (&OpMono, &BiPoly<K>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BiPoly<K> {
        self.terms
            .get(&OpMono::new(i, j))
            .cloned()
            .unwrap_or_else(BiPoly::zero)
    }

    /// Largest `i` with a `Dx^i` term, if any.
    pub fn order_dx(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.i).max()
    }

    pub fn order_dy(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.j).max()
    }

    /// Largest `i + j` over all terms (0 for the zero operator).
    pub fn total_order(&self) -> u32 {
        self.terms.keys().map(OpMono::total).max().unwrap_or(0)
    }

    /// Largest total degree over all coefficients (0 for the zero operator).
    pub fn coeff_degree(&self) -> u32 {
        self.terms
            .values()
            .filter_map(BiPoly::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn only_dx(&self) -> bool {
        self.terms.keys().all(|m| m.j == 0)
    }

    pub fn only_dy(&self) -> bool {
        self.terms.keys().all(|m| m.i == 0)
    }

    /// All coefficients free of `y` (the shape of an eliminated operator).
    pub fn coeffs_free_of_y(&self) -> bool {
        self.terms
            .values()
            .all(|p| p.degree_in(Var::Y).unwrap_or(0) == 0)
    }

    /// Left-multiply by a polynomial: `f * self`, already normal.
    pub fn mul_poly_left(&self, f: &BiPoly<K>) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f * c);
        }
        out
    }

    /// Right-multiply by `Dx^i * Dy^j` (no commutation needed).
    pub fn mul_mono_right(&self, i: u32, j: u32) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(OpMono::new(m.i + i, m.j + j), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &K) -> Self {
        let mut out = Self::zero();
        for (m, p) in &self.terms {
            out.add_term(*m, p.scale(c));
        }
        out
    }

    /// `self^e` by repeated multiplication.
    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    /// Formal adjoint: reverses products, fixes x and y, negates Dx and Dy.
    /// The adjoint of `c * Dx^i * Dy^j` is `(-1)^(i+j) * Dx^i * Dy^j * c`,
    /// renormalized.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let moved = &Self::monomial(m.i, m.j) * &Self::from_poly(c.clone());
            let signed = if m.total() % 2 == 1 { -&moved } else { moved };
            out = &out + &signed;
        }
        out
    }
}

impl<K: Field> Add for &WeylOperator<K> {
    type Output = WeylOperator<K>;
    fn add(self, rhs: &WeylOperator<K>) -> WeylOperator<K> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<K: Field> Sub for &WeylOperator<K> {
    type Output = WeylOperator<K>;
    fn sub(self, rhs: &WeylOperator<K>) -> WeylOperator<K> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<K: Field> Neg for &WeylOperator<K> {
    type Output = WeylOperator<K>;
    fn neg(self) -> WeylOperator<K> {
        let mut out = WeylOperator::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, -c);
        }
        out
    }
}

impl<K: Field> Mul for &WeylOperator<K> {
    type Output = WeylOperator<K>;

    /// Normal-form product. For each pair of terms the derivative monomial of
    /// the left factor is pushed across the right coefficient with the mixed
    /// product rule:
    ///
    /// ```text
    /// Dx^i Dy^j * g = sum_{a<=i, b<=j} binom(i,a) binom(j,b)
    ///                 * (d^(a+b) g / dx^a dy^b) * Dx^(i-a) Dy^(j-b)
    /// ```
    fn mul(self, rhs: &WeylOperator<K>) -> WeylOperator<K> {
        let mut out = WeylOperator::zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        let max_i = self.terms.keys().map(|m| m.i).max().unwrap();
        let max_j = self.terms.keys().map(|m| m.j).max().unwrap();
        let binom = pascal_rows::<K>(max_i.max(max_j));
        for (qm, qc) in &rhs.terms {
            // Partial-derivative grid of the right coefficient, grid[a][b] =
            // d^(a+b) qc / dx^a dy^b. Rows stop early once identically zero.
            let mut grid: Vec<Vec<BiPoly<K>>> = Vec::with_capacity(max_i as usize + 1);
            for a in 0..=max_i as usize {
                let base = if a == 0 {
                    qc.clone()
                } else {
                    grid[a - 1][0].diff(Var::X)
                };
                let mut row = vec![base];
                for _ in 1..=max_j as usize {
                    let next = row.last().unwrap().diff(Var::Y);
                    if next.is_zero() {
                        break;
                    }
                    row.push(next);
                }
                let stop = row.len() == 1 && row[0].is_zero();
                grid.push(row);
                if stop {
                    break;
                }
            }
            for (pm, pc) in &self.terms {
                for a in 0..=pm.i as usize {
                    let Some(row) = grid.get(a) else { break };
                    if row[0].is_zero() && a > 0 {
                        break;
                    }
                    for b in 0..=pm.j as usize {
                        let Some(d) = row.get(b) else { break };
                        if d.is_zero() {
                            break;
                        }
                        let scale = binom[pm.i as usize][a].clone()
                            * binom[pm.j as usize][b].clone();
                        let coeff = (pc * d).scale(&scale);
                        out.add_term(
                            OpMono::new(pm.i - a as u32 + qm.i, pm.j - b as u32 + qm.j),
                            coeff,
                        );
                    }
                }
            }
        }
        out
    }
}

/// Expand `Dv^k * f` into normal form from the closed-form sum.
pub fn leibniz_right<K: Field>(f: &BiPoly<K>, k: u32, v: Var) -> WeylOperator<K> {
    let binom = pascal_rows::<K>(k);
    let mut out = WeylOperator::zero();
    let mut d = f.clone();
    for l in 0..=k {
        if d.is_zero() {
            break;
        }
        out.add_term(
            WeylOperator::<K>::var_monomial(v, k - l),
            d.scale(&binom[k as usize][l as usize]),
        );
        d = d.diff(v);
    }
    out
}

/// Expand `f * Dv^k` as a signed sum of products `Dv^(k-l) * (d^l f)`, each
/// renormalized by multiplication. The result collapses back to the single
/// normal-form term `f * Dv^k`; that collapse is the testable content.
pub fn leibniz_left<K: Field>(f: &BiPoly<K>, k: u32, v: Var) -> WeylOperator<K> {
    let binom = pascal_rows::<K>(k);
    let mut out = WeylOperator::zero();
    let mut d = f.clone();
    for l in 0..=k {
        if d.is_zero() {
            break;
        }
        let mut c = binom[k as usize][l as usize].clone();
        if l % 2 == 1 {
            c = -c;
        }
        let product = &WeylOperator::monomial(
            match v {
                Var::X => k - l,
                Var::Y => 0,
            },
            match v {
                Var::X => 0,
                Var::Y => k - l,
            },
        ) * &WeylOperator::from_poly(d.scale(&c));
        out = &out + &product;
        d = d.diff(v);
    }
    out
}

/// Split `Dv^k * f` as `f * Dv^k + P`: returns `(f * Dv^k, P)` where `P`
/// collects the lower-order correction terms. `P` has order < k in `Dv` and
/// coefficient total degree < deg f; it is zero when f is constant.
pub fn commute_past<K: Field>(
    f: &BiPoly<K>,
    k: u32,
    v: Var,
) -> (WeylOperator<K>, WeylOperator<K>) {
    let main = WeylOperator::term(
        match v {
            Var::X => k,
            Var::Y => 0,
        },
        match v {
            Var::X => 0,
            Var::Y => k,
        },
        f.clone(),
    );
    let binom = pascal_rows::<K>(k);
    let mut corr = WeylOperator::zero();
    let mut d = f.diff(v);
    for l in 1..=k {
        if d.is_zero() {
            break;
        }
        corr.add_term(
            WeylOperator::<K>::var_monomial(v, k - l),
            d.scale(&binom[k as usize][l as usize]),
        );
        d = d.diff(v);
    }
    (main, corr)
}

impl<K: Field> fmt::Display for WeylOperator<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Highest derivative order first; ties show Dx powers before Dy.
        let mut keys: Vec<&OpMono> = self.terms.keys().collect();
        keys.sort_by_key(|m| (std::cmp::Reverse(m.total()), m.j));
        let mut summands: Vec<Summand> = Vec::new();
        for m in keys {
            let c = &self.terms[m];
            let mut dpieces: Vec<String> = Vec::new();
            for (name, e) in [("Dx", m.i), ("Dy", m.j)] {
                match e {
                    0 => {}
                    1 => dpieces.push(name.to_string()),
                    _ => dpieces.push(format!("{name}^{e}")),
                }
            }
            let dpart = dpieces.join("*");
            if dpart.is_empty() {
                // Constant part: splice the polynomial's own summands in.
                summands.extend(poly_summands(c, ""));
            } else if c.len() == 1 {
                let (mono, k) = c.terms().next().unwrap();
                summands.push(Summand {
                    neg: k.is_negative(),
                    body: term_body(&k.abs(), mono, &dpart),
                });
            } else {
                summands.push(Summand {
                    neg: false,
                    body: format!("({c})*{dpart}"),
                });
            }
        }
        write_summands(f, &summands)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Operator, Poly, Rational};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn p(terms: &[(u32, u32, i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|&(a, b, c)| (a, b, q(c))))
    }

    fn x() -> Poly {
        p(&[(1, 0, 1)])
    }

    fn ell() -> Poly {
        p(&[(0, 0, 1), (1, 0, -1), (0, 1, -1)])
    }

    #[test]
    fn dx_times_x_picks_up_the_commutator() {
        let prod = &Operator::dx() * &Operator::from_poly(x());
        let expected = &Operator::term(1, 0, x()) + &Operator::one();
        assert_eq!(prod, expected);
        assert_eq!(prod.to_string(), "x*Dx + 1");
    }

    #[test]
    fn dx2_times_x2_expands_fully() {
        let prod = &Operator::monomial(2, 0) * &Operator::from_poly(p(&[(2, 0, 1)]));
        // x^2*Dx^2 + 4x*Dx + 2
        let expected = Operator::zero()
            .add3(2, 0, p(&[(2, 0, 1)]))
            .add3(1, 0, p(&[(1, 0, 4)]))
            .add3(0, 0, p(&[(0, 0, 2)]));
        assert_eq!(prod, expected);
    }

    #[test]
    fn mixed_monomial_past_xy() {
        let prod = &Operator::monomial(1, 1) * &Operator::from_poly(p(&[(1, 1, 1)]));
        let expected = Operator::zero()
            .add3(1, 1, p(&[(1, 1, 1)]))
            .add3(1, 0, x())
            .add3(0, 1, p(&[(0, 1, 1)]))
            .add3(0, 0, p(&[(0, 0, 1)]));
        assert_eq!(prod, expected);
    }

    #[test]
    fn product_is_associative_on_a_worked_example() {
        let a = &Operator::dx() * &Operator::from_poly(ell());
        let b = &Operator::dy() * &Operator::from_poly(x());
        let left = &(&a * &b) * &Operator::dx();
        let right = &a * &(&b * &Operator::dx());
        assert_eq!(left, right);
    }

    #[test]
    fn push_right_matches_direct_product() {
        let f = ell();
        let expanded = leibniz_right(&f, 2, Var::Y);
        // (1-x-y)*Dy^2 - 2*Dy
        let expected = Operator::zero()
            .add3(0, 2, ell())
            .add3(0, 1, p(&[(0, 0, -2)]));
        assert_eq!(expanded, expected);
        let via_mul = &Operator::monomial(0, 2) * &Operator::from_poly(f);
        assert_eq!(expanded, via_mul);
    }

    #[test]
    fn push_left_collapses_to_a_single_term() {
        let f = p(&[(0, 2, 1)]); // y^2
        let collapsed = leibniz_left(&f, 2, Var::Y);
        assert_eq!(collapsed, Operator::term(0, 2, f));
    }

    #[test]
    fn adjoint_of_x_dx() {
        let op = Operator::term(1, 0, x());
        let adj = op.adjoint();
        // -x*Dx - 1
        let expected = Operator::zero()
            .add3(1, 0, p(&[(1, 0, -1)]))
            .add3(0, 0, p(&[(0, 0, -1)]));
        assert_eq!(adj, expected);
        assert_eq!(adj.adjoint(), op);
    }

    #[test]
    fn adjoint_reverses_products() {
        let a = Operator::term(2, 0, ell());
        let b = &Operator::term(0, 1, x()) + &Operator::one();
        assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
    }

    #[test]
    fn commute_past_contract_on_x2() {
        let f = p(&[(2, 0, 1)]);
        let (main, corr) = commute_past(&f, 2, Var::X);
        assert_eq!(main, Operator::term(2, 0, f.clone()));
        // P = 4x*Dx + 2
        let expected = Operator::zero()
            .add3(1, 0, p(&[(1, 0, 4)]))
            .add3(0, 0, p(&[(0, 0, 2)]));
        assert_eq!(corr, expected);
        // Dx^2 * f = f*Dx^2 + P exactly.
        let lhs = &Operator::monomial(2, 0) * &Operator::from_poly(f);
        assert_eq!(lhs, &main + &corr);
        assert!(corr.order_dx().unwrap() < 2);
        assert!(corr.coeff_degree() < 2);
    }

    #[test]
    fn commute_past_constant_has_no_correction() {
        let (_, corr) = commute_past(&p(&[(0, 0, 7)]), 3, Var::Y);
        assert!(corr.is_zero());
    }

    #[test]
    fn display_of_annihilator() {
        let a = &Operator::term(1, 0, ell()) - &Operator::one();
        assert_eq!(a.to_string(), "(1 - x - y)*Dx - 1");
        let s = &Operator::dx() - &Operator::dy();
        assert_eq!(s.to_string(), "Dx - Dy");
    }

    impl Operator {
        fn add3(mut self, i: u32, j: u32, c: Poly) -> Self {
            self.add_term(OpMono::new(i, j), c);
            self
        }
    }
}
