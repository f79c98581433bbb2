//! Exact integer lattice algebra.
//!
//! Everything here works on dense [`IntMatrix`] values with arbitrary-precision
//! entries: Hermite and Smith normal forms, integer kernels, cokernels,
//! indices of sublattices, and the canonical [`FgAbelianGroup`] type that all
//! other engines report their answers in.
//!
//! Subquotients of `Z^m` appear everywhere (kernels of maps on a presented
//! group, cohomology groups). They are computed by lifting to `Z^m`: the
//! kernel of `φ: Z^a → Z^b / R` is the preimage lattice `{v : φv ∈ span R}`,
//! and a quotient of lattices `L / K` is the cokernel of the coordinate matrix
//! of `K` in a basis of `L`.

mod group;
mod hnf;
mod matrix;
mod minors;
mod snf;

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

pub use group::{FgAbelianGroup, Presentation};
pub use hnf::{hnf, rank, Lattice};
pub use matrix::{gcd_all, IntMatrix};
pub use minors::{minors_gcd_factors, MINORS_GUARD};
pub use snf::{snf, SmithDecomposition};

use crate::error::{Error, Result};

/// Basis (as columns) of the integer kernel `{v : A·v = 0}`.
///
/// The basis spans the full kernel lattice, which is saturated in `Z^cols`,
/// and is HNF-reduced so the output is deterministic.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&a.transpose());
    let r = hnf::nonzero_rows(&h);
    let kernel_rows: Vec<usize> = (r..u.rows()).collect();
    let gens = u.transpose().select_columns(&kernel_rows);
    Lattice::from_generators(&gens).basis().clone()
}

/// `Z^rows / span(columns of A)` in canonical form.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    let d = snf(a);
    let extra_free = a.rows() - d.factors.len();
    let mut g = FgAbelianGroup::from_invariants(d.factors);
    if extra_free > 0 {
        g = g.direct_sum(&FgAbelianGroup::free(extra_free));
    }
    g
}

/// The group presented by `p`.
pub fn presentation_to_group(p: &Presentation) -> FgAbelianGroup {
    p.to_group()
}

/// Index of one lattice in another.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeIndex {
    Finite(BigInt),
    Infinite,
}

impl LatticeIndex {
    pub fn is_one(&self) -> bool {
        matches!(self, LatticeIndex::Finite(n) if n.is_one())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, LatticeIndex::Finite(_))
    }
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(n) => write!(f, "{}", n),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// `[span(sup) : span(sub)]`, finite exactly when the two spans have equal rank.
///
/// Every column of `sub` must lie in the integer span of `sup`.
pub fn lattice_index(sub: &IntMatrix, sup: &IntMatrix) -> Result<LatticeIndex> {
    if sub.rows() != sup.rows() {
        return Err(Error::Shape(alloc::format!(
            "sublattice in Z^{} but ambient lattice in Z^{}",
            sub.rows(),
            sup.rows()
        )));
    }
    let big = Lattice::from_generators(sup);
    let coords = big
        .coordinate_matrix(sub)
        .map_err(|column| Error::NotContained { column })?;
    Ok(index_from_coordinates(&coords))
}

/// Index of the column span of `coords` in `Z^coords.rows()`.
fn index_from_coordinates(coords: &IntMatrix) -> LatticeIndex {
    let d = snf(coords);
    if d.rank() < coords.rows() {
        return LatticeIndex::Infinite;
    }
    LatticeIndex::Finite(d.factors.iter().product())
}

/// Preimage lattice `{v ∈ Z^a : φ(v) ∈ span(rel)}` for `φ: Z^a → Z^b`.
///
/// This is the kernel of `φ` viewed as a map into the presented group `Z^b / span(rel)`.
pub fn preimage_lattice(phi: &IntMatrix, rel: &IntMatrix) -> Result<Lattice> {
    if phi.rows() != rel.rows() {
        return Err(Error::Shape(alloc::format!(
            "map lands in Z^{} but relations live in Z^{}",
            phi.rows(),
            rel.rows()
        )));
    }
    let a = phi.cols();
    let k = kernel_basis(&phi.hcat(rel)?);
    let top: Vec<usize> = (0..a).collect();
    let proj = k.transpose().select_columns(&top).transpose();
    Ok(Lattice::from_generators(&proj))
}

/// The subquotient `span(sup) / span(sub)`; requires `span(sub) ⊆ span(sup)`.
pub fn lattice_quotient(sup: &Lattice, sub: &IntMatrix) -> Result<FgAbelianGroup> {
    let coords = sup
        .coordinate_matrix(sub)
        .map_err(|column| Error::NotContained { column })?;
    Ok(cokernel(&coords))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn laplacian(n: i64) -> IntMatrix {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { n - 1 } else { -1 }).collect())
            .collect();
        IntMatrix::from_rows(&rows)
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&IntMatrix::identity(3)).cols(), 0);
        let k = kernel_basis(&laplacian(3));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == to_ints(&[1, 1, 1]) || v == to_ints(&[-1, -1, -1]));
        let k = kernel_basis(&IntMatrix::from_rows(&[[1, 1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == to_ints(&[1, -1]) || v == to_ints(&[-1, 1]));
    }

    #[test]
    fn kernel_is_saturated() {
        // 4a + 2b = 0 has primitive solution (1, -2), not (2, -4)
        let a = IntMatrix::from_rows(&[[4, 2]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == to_ints(&[1, -2]) || v == to_ints(&[-1, 2]));
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&IntMatrix::identity(3)).is_trivial());
        assert_eq!(
            cokernel(&IntMatrix::from_rows(&[[2, 0], [0, 3]])),
            FgAbelianGroup::cyclic(6)
        );
        assert_eq!(
            cokernel(&laplacian(4)),
            FgAbelianGroup::free_plus_power(1, 4, 2)
        );
        assert_eq!(cokernel(&IntMatrix::zeros(3, 0)), FgAbelianGroup::free(3));
        assert_eq!(
            cokernel(&IntMatrix::from_rows(&[[5]])),
            FgAbelianGroup::cyclic(5)
        );
    }

    #[test]
    fn index_examples() {
        let id = IntMatrix::identity(2);
        let two = id.scale(&BigInt::from(2));
        assert_eq!(
            lattice_index(&two, &id).unwrap(),
            LatticeIndex::Finite(BigInt::from(4))
        );
        assert!(lattice_index(&id, &id).unwrap().is_one());
        let one_col = IntMatrix::from_rows(&[[1], [0]]);
        assert_eq!(
            lattice_index(&one_col, &id).unwrap(),
            LatticeIndex::Infinite
        );
        assert!(matches!(
            lattice_index(&id, &two),
            Err(Error::NotContained { column: 0 })
        ));
    }

    #[test]
    fn preimage_in_torsion_target() {
        // φ = [1 1] into Z/3: kernel is {(a, b) : a + b ≡ 0 mod 3}, index 3 in Z^2
        let phi = IntMatrix::from_rows(&[[1, 1]]);
        let rel = IntMatrix::from_rows(&[[3]]);
        let l = preimage_lattice(&phi, &rel).unwrap();
        assert_eq!(l.rank(), 2);
        assert_eq!(
            lattice_index(l.basis(), &IntMatrix::identity(2)).unwrap(),
            LatticeIndex::Finite(BigInt::from(3))
        );
    }

    #[test]
    fn presentations() {
        let p = Presentation::new(1, IntMatrix::from_rows(&[[7]])).unwrap();
        assert_eq!(presentation_to_group(&p), FgAbelianGroup::cyclic(7));
        assert_eq!(
            presentation_to_group(&Presentation::free(3)),
            FgAbelianGroup::free(3)
        );
        let p = Presentation::new(3, laplacian(3)).unwrap();
        assert_eq!(
            presentation_to_group(&p),
            FgAbelianGroup::free_plus_power(1, 3, 1)
        );
        assert!(Presentation::new(2, IntMatrix::zeros(3, 1)).is_err());
    }
}
