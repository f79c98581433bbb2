use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// `U·A·V = S` with `U`, `V` unimodular and `S` diagonal in divisibility order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `S`: nonzero entries first, each dividing the next, then zeros.
    pub factors: Vec<BigInt>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|d| !d.is_zero()).count()
    }

    /// Recomputes `U·A·V` and every structural invariant against `a`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let Ok(ua) = self.u.mul(a) else { return false };
        let Ok(uav) = ua.mul(&self.v) else {
            return false;
        };
        if uav != self.s || !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        let k = a.rows().min(a.cols());
        for i in 0..self.s.rows() {
            for j in 0..self.s.cols() {
                if i != j && !self.s[(i, j)].is_zero() {
                    return false;
                }
            }
        }
        if self.factors.len() != k || (0..k).any(|i| self.s[(i, i)] != self.factors[i]) {
            return false;
        }
        let r = self.rank();
        self.factors[..r].iter().all(|d| d.is_positive())
            && self.factors[r..].iter().all(Zero::is_zero)
            && self.factors[..r]
                .windows(2)
                .all(|w| w[1].is_multiple_of(&w[0]))
    }
}

/// Smith normal form with transforms, using minimum-absolute-value pivots.
pub fn snf(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let k = m.min(n);

    for t in 0..k {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pi, pj)) = min_abs_entry(&s, t, t..m, t..n) else {
            break;
        };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a remainder is now smaller than the pivot; move the smallest into place
                let (pi, pj) = min_abs_on_cross(&s, t);
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                s.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // divisibility: pull an offending row into the pivot row and go again
            let offending =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match offending {
                Some(i) => {
                    let one = BigInt::from(1);
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }

    let factors = (0..k).map(|i| s[(i, i)].clone()).collect();
    SmithDecomposition { u, s, v, factors }
}

fn min_abs_entry(
    s: &IntMatrix,
    _t: usize,
    rows: core::ops::Range<usize>,
    cols: core::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let x = &s[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Smallest nonzero entry in row `t` or column `t` of the trailing block.
fn min_abs_on_cross(s: &IntMatrix, t: usize) -> (usize, usize) {
    let col = min_abs_entry(s, t, t..s.rows(), t..t + 1);
    let row = min_abs_entry(s, t, t..t + 1, t..s.cols());
    match (col, row) {
        (Some(c), Some(r)) => {
            if s[r].abs() < s[c].abs() {
                r
            } else {
                c
            }
        }
        (Some(c), None) => c,
        (None, Some(r)) => r,
        (None, None) => (t, t),
    }
}
