//! Exact left-kernel computation for matrices of rationals.
//!
//! The kernel is found by fraction-free (one-step Bareiss) elimination on an
//! integer matrix augmented with a transformation block, so every division
//! is exact and every returned vector is an integer row `v` with
//! `v * M = 0`, primitive (content 1) and with positive first nonzero entry.
//!
//! Rows are processed from the last to the first: pivots prefer the bottom
//! of the matrix, so kernel vectors are expressed through the earliest rows
//! that allow it. Callers that order rows by ascending degree therefore get
//! kernel vectors concentrated on low-degree rows, deterministically.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Rational;

/// Basis of `{v : v * M = 0}` as primitive integer vectors.
///
/// Vectors are emitted in the processing order of the rows that carry them
/// (bottom-up). The basis is complete: its length is `rows - rank`.
pub fn left_kernel(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    assert!(
        rows.iter().all(|r| r.len() == ncols),
        "left_kernel requires a rectangular matrix"
    );

    // Scale row r by the lcm of its denominators; the augmented block
    // starts as diag(lcm) so augmented parts always express integer
    // combinations of the *original* rational rows.
    let total = ncols + nrows;
    let mut work: Vec<Vec<BigInt>> = Vec::with_capacity(nrows);
    for (r, row) in rows.iter().enumerate().rev() {
        let mut lcm = BigInt::one();
        for e in row {
            lcm = lcm.lcm(e.denom());
        }
        let mut v = Vec::with_capacity(total);
        for e in row {
            v.push(e.numer() * (&lcm / e.denom()));
        }
        v.resize(total, BigInt::zero());
        v[ncols + r] = lcm;
        work.push(v);
    }

    let mut active: Vec<usize> = (0..nrows).collect();
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(pos) = pick_pivot(&work, &active, col) else {
            continue;
        };
        let prow = active.remove(pos);
        let pivot = work[prow][col].clone();
        for &r in &active {
            let factor = std::mem::replace(&mut work[r][col], BigInt::zero());
            for c in 0..total {
                if c == col {
                    continue;
                }
                let num = &pivot * &work[r][c] - &factor * &work[prow][c];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "fraction-free elimination divided inexactly");
                work[r][c] = q;
            }
        }
        prev = pivot;
    }

    let mut kernel = Vec::with_capacity(active.len());
    for &r in &active {
        debug_assert!(
            work[r][..ncols].iter().all(Zero::is_zero),
            "non-pivot row kept a nonzero matrix part"
        );
        let mut v = work[r].split_off(ncols);
        normalize(&mut v);
        kernel.push(v);
    }
    kernel
}

/// Largest-magnitude nonzero entry in `col`, earliest processed on ties.
fn pick_pivot(work: &[Vec<BigInt>], active: &[usize], col: usize) -> Option<usize> {
    let mut best: Option<(usize, &BigInt)> = None;
    for (pos, &r) in active.iter().enumerate() {
        let e = &work[r][col];
        if e.is_zero() {
            continue;
        }
        if best.map_or(true, |(_, b)| e.magnitude() > b.magnitude()) {
            best = Some((pos, e));
        }
    }
    best.map(|(pos, _)| pos)
}

/// Divide out the content and make the first nonzero entry positive.
fn normalize(v: &mut [BigInt]) {
    let mut content = BigInt::zero();
    for e in v.iter() {
        content = content.gcd(e);
    }
    if content.is_zero() {
        return;
    }
    for e in v.iter_mut() {
        *e = &*e / &content;
    }
    if v.iter().find(|e| !e.is_zero()).is_some_and(Signed::is_negative) {
        for e in v.iter_mut() {
            *e = -&*e;
        }
    }
}
