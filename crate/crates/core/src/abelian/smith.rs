//! Smith normal form over the integers.
//!
//! Pivoting picks the nonzero entry of least absolute value in the active block, ties
//! broken by lowest `(row, col)`. The choice is deterministic so results can be frozen
//! into golden tests.

use super::matrix::IntMatrix;
use super::scalar::Scalar;

/// `u * m * v == d`, with `u`, `v` unimodular and `d` diagonal with `d_1 | d_2 | ...`
/// (all non-negative). `u_inv` and `v_inv` are the exact inverses.
#[derive(Clone)]
pub struct Smith<T> {
    pub u: IntMatrix<T>,
    pub u_inv: IntMatrix<T>,
    pub d: IntMatrix<T>,
    pub v: IntMatrix<T>,
    pub v_inv: IntMatrix<T>,
    pub rank: usize,
}

impl<T: Scalar> std::fmt::Debug for Smith<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Smith").field("d", &self.d).field("rank", &self.rank).finish_non_exhaustive()
    }
}

impl<T: Scalar> Smith<T> {
    /// Diagonal entries `d_0, ..., d_{min(r,c)-1}`.
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }
}

struct State<T> {
    d: IntMatrix<T>,
    u: IntMatrix<T>,
    u_inv: IntMatrix<T>,
    v: IntMatrix<T>,
    v_inv: IntMatrix<T>,
}

impl<T: Scalar> State<T> {
    fn add_row(&mut self, dst: usize, src: usize, k: &T) {
        self.d.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k.clone());
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &T) {
        self.d.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k.clone());
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(T, usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let a = &self.d[(i, j)];
                if a.is_zero() {
                    continue;
                }
                let abs = a.abs();
                if best.as_ref().map_or(true, |(b, _, _)| abs < *b) {
                    best = Some((abs, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }
}

/// Computes the Smith normal form of `m`, returning the transforms so callers can
/// compute preimages. Empty matrices are allowed.
pub fn smith_decompose<T: Scalar>(m: &IntMatrix<T>) -> Smith<T> {
    let (r, c) = (m.rows(), m.cols());
    let mut s = State {
        d: m.clone(),
        u: IntMatrix::identity(r),
        u_inv: IntMatrix::identity(r),
        v: IntMatrix::identity(c),
        v_inv: IntMatrix::identity(c),
    };
    let mut rank = 0;
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = s.min_pivot(t) else {
                return finish(s, rank);
            };
            s.swap_rows(t, pi);
            s.swap_cols(t, pj);
            let pivot = s.d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..r {
                if s.d[(i, t)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&s.d[(i, t)], &pivot);
                s.add_row(i, t, &-q);
                if !s.d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if s.d[(t, j)].is_zero() {
                    continue;
                }
                let q = nearest_quotient(&s.d[(t, j)], &pivot);
                s.add_col(j, t, &-q);
                if !s.d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !s.d[(i, j)].is_multiple_of(&pivot)));
            if let Some(i) = offender {
                s.add_row(t, i, &T::one());
                continue;
            }
            break;
        }
        if s.d[(t, t)].is_negative() {
            s.negate_row(t);
        }
        rank += 1;
    }
    finish(s, rank)
}

/// Quotient leaving a remainder of least absolute value.
fn nearest_quotient<T: Scalar>(a: &T, b: &T) -> T {
    let (q, r) = a.div_mod_floor(b);
    if (r.clone() + r.clone()).abs() > b.abs() {
        q + T::one()
    } else {
        q
    }
}

fn finish<T: Scalar>(s: State<T>, rank: usize) -> Smith<T> {
    Smith { u: s.u, u_inv: s.u_inv, d: s.d, v: s.v, v_inv: s.v_inv, rank }
}
