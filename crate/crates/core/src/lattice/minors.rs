use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Largest dimension accepted by [`minors_gcd_factors`].
pub const MINORS_GUARD: usize = 8;

/// Invariant factors by the determinantal-divisor formula `d_k = g_k / g_{k-1}`,
/// where `g_k` is the gcd of all `k x k` minors. Independent of [`super::snf`];
/// exponential cost, so limited to 8x8.
pub fn minors_gcd_factors(a: &IntMatrix) -> Result<Vec<BigInt>> {
    let (m, n) = (a.rows(), a.cols());
    if m > MINORS_GUARD || n > MINORS_GUARD {
        return Err(Error::DimensionGuard {
            rows: m,
            cols: n,
            limit: MINORS_GUARD,
        });
    }
    let k_max = m.min(n);
    let mut out = Vec::with_capacity(k_max);
    let mut prev = BigInt::from(1);
    for k in 1..=k_max {
        if prev.is_zero() {
            out.push(BigInt::zero());
            continue;
        }
        let mut g = BigInt::zero();
        for rows in combinations(m, k) {
            for cols in combinations(n, k) {
                let mut sub = IntMatrix::zeros(k, k);
                for (ii, &i) in rows.iter().enumerate() {
                    for (jj, &j) in cols.iter().enumerate() {
                        sub[(ii, jj)] = a[(i, j)].clone();
                    }
                }
                g = g.gcd(&sub.det()?);
            }
        }
        out.push(if g.is_zero() {
            BigInt::zero()
        } else {
            &g / &prev
        });
        prev = g;
    }
    Ok(out)
}

/// All increasing `k`-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
