use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::{ExtendedGcd, Integer};
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form.
///
/// Returns `(H, U)` with `U·A = H`, `U` unimodular and `H` in row echelon form:
/// every pivot is positive and the entries above a pivot lie in `[0, pivot)`.
/// Zero rows are collected at the bottom.
pub fn hnf(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let (m, n) = (a.rows(), a.cols());
    let mut r = 0;
    for j in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !h[(i, j)].is_zero()) else {
            continue;
        };
        h.swap_rows(r, p);
        u.swap_rows(r, p);
        for i in r + 1..m {
            if h[(i, j)].is_zero() {
                continue;
            }
            let x = h[(r, j)].clone();
            let y = h[(i, j)].clone();
            let ExtendedGcd {
                gcd, x: s, y: t, ..
            } = x.extended_gcd(&y);
            // [[s, t], [-y/g, x/g]] has determinant 1
            let c = -(&y / &gcd);
            let d = &x / &gcd;
            h.combine_rows(r, i, &s, &t, &c, &d);
            u.combine_rows(r, i, &s, &t, &c, &d);
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, j)].clone();
        for i in 0..r {
            let q = h[(i, j)].div_floor(&pivot);
            if !q.is_zero() {
                let nq = -q;
                h.add_row_multiple(i, r, &nq);
                u.add_row_multiple(i, r, &nq);
            }
        }
        r += 1;
    }
    (h, u)
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    let (h, _) = hnf(a);
    nonzero_rows(&h)
}

pub(crate) fn nonzero_rows(h: &IntMatrix) -> usize {
    (0..h.rows())
        .take_while(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count()
}

/// Pivot column of each nonzero row of an echelon matrix.
#[cfg(test)]
fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    (0..nonzero_rows(h))
        .map(|i| {
            h.row(i)
                .iter()
                .position(|x| !x.is_zero())
                .expect("nonzero row")
        })
        .collect()
}

/// Solves `H x = w` for an echelon `H` whose nonzero rows have pivots in
/// columns `0..k`, `k = H.cols()`. Returns `None` when no integer solution exists.
pub(crate) fn back_substitute(h: &IntMatrix, w: &[BigInt]) -> Option<Vec<BigInt>> {
    let k = h.cols();
    if w[k..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut x = alloc::vec![BigInt::zero(); k];
    for i in (0..k).rev() {
        let mut rhs = w[i].clone();
        for j in i + 1..k {
            rhs -= &h[(i, j)] * &x[j];
        }
        let (q, rem) = rhs.div_rem(&h[(i, i)]);
        if !rem.is_zero() {
            return None;
        }
        x[i] = q;
    }
    Some(x)
}

/// A lattice in `Z^ambient`, kept as an HNF-reduced basis (columns).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: IntMatrix,
    // U·basis = echelon, cached for coordinate solves
    echelon: IntMatrix,
    transform: IntMatrix,
}

impl Lattice {
    /// Lattice spanned by the columns of `generators`.
    pub fn from_generators(generators: &IntMatrix) -> Self {
        let (h, _) = hnf(&generators.transpose());
        let k = nonzero_rows(&h);
        let basis = h.top_rows(k).transpose();
        Self::from_basis_unchecked(basis)
    }

    fn from_basis_unchecked(basis: IntMatrix) -> Self {
        let (echelon, transform) = hnf(&basis);
        Lattice {
            ambient: basis.rows(),
            basis,
            echelon,
            transform,
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::from_basis_unchecked(IntMatrix::identity(ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as columns.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Integer coordinates of `v` in the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        if v.len() != self.ambient {
            return None;
        }
        let w = self.transform.mul_vec(v).ok()?;
        back_substitute(&self.echelon, &w)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of every column of `gens`; `Err(j)` names the first column outside.
    pub fn coordinate_matrix(&self, gens: &IntMatrix) -> Result<IntMatrix, usize> {
        let mut out = IntMatrix::zeros(self.rank(), gens.cols());
        for j in 0..gens.cols() {
            let c = self.coordinates(&gens.column(j)).ok_or(j)?;
            for (i, x) in c.into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        Ok(out)
    }

    /// Sum lattice `self + span(gens)`.
    pub fn join(&self, gens: &IntMatrix) -> Lattice {
        let all = self.basis.hcat(gens).expect("same ambient dimension");
        Lattice::from_generators(&all)
    }
}
