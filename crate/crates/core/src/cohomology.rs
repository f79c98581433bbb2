//! Tate cohomology of a finite cyclic group `G = <σ>` of order `n`.
//!
//! With `D = σ - 1` and `N = 1 + σ + ... + σ^(n-1)`:
//!
//! * `H^0 = M^G = ker D`
//! * `H^(2i-1) = ker N / im D` for `i >= 1`
//! * `H^(2i) = ker D / im N` for `i >= 1`
//!
//! Modules are presented as `Z^m / R` with `σ` given by an integer matrix on the
//! generators. Kernels are taken on the quotient by lifting to preimage lattices
//! in `Z^m`.

use alloc::format;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{
    lattice_quotient, preimage_lattice, FgAbelianGroup, IntMatrix, Lattice, Presentation,
};

/// A finitely generated abelian group with an automorphism of order dividing `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicGModule {
    order: u64,
    pres: Presentation,
    action: IntMatrix,
    relation_lattice: Lattice,
}

impl CyclicGModule {
    /// Validates that `action` descends to the quotient, has order dividing
    /// `order` there, and is invertible.
    pub fn new(order: u64, pres: Presentation, action: IntMatrix) -> Result<Self> {
        if order == 0 {
            return Err(Error::InvalidModule(
                "group order must be at least 1".into(),
            ));
        }
        let m = pres.generator_count();
        if action.rows() != m || action.cols() != m {
            return Err(Error::InvalidModule(format!(
                "action is {}x{} but the module has {} generators",
                action.rows(),
                action.cols(),
                m
            )));
        }
        let relation_lattice = Lattice::from_generators(pres.relations());
        let image = action.mul(pres.relations())?;
        if let Err(j) = relation_lattice.coordinate_matrix(&image) {
            return Err(Error::InvalidModule(format!(
                "action does not preserve the relations (relator {} maps outside)",
                j
            )));
        }
        let cycle = action.pow(order)?.sub(&IntMatrix::identity(m))?;
        if let Err(j) = relation_lattice.coordinate_matrix(&cycle) {
            return Err(Error::InvalidModule(format!(
                "action^{} is not the identity on generator {}",
                order, j
            )));
        }
        // σ^n = 1 already forces invertibility; this guards the surjectivity directly
        let onto = crate::lattice::cokernel(&action.hcat(pres.relations())?);
        if !onto.is_trivial() {
            return Err(Error::InvalidModule(
                "action is not invertible on the quotient".into(),
            ));
        }
        Ok(CyclicGModule {
            order,
            pres,
            action,
            relation_lattice,
        })
    }

    /// `Z^m` with the given action.
    pub fn free(order: u64, action: IntMatrix) -> Result<Self> {
        Self::new(order, Presentation::free(action.rows()), action)
    }

    /// Trivial action on the presented group.
    pub fn trivial(order: u64, pres: Presentation) -> Result<Self> {
        let m = pres.generator_count();
        Self::new(order, pres, IntMatrix::identity(m))
    }

    /// Restriction of `ambient_action` on `Z^k` to a `σ`-stable sublattice,
    /// written in the sublattice's basis.
    pub fn restrict_free(
        order: u64,
        ambient_action: &IntMatrix,
        sublattice: &Lattice,
    ) -> Result<Self> {
        let image = ambient_action.mul(sublattice.basis())?;
        let action = sublattice.coordinate_matrix(&image).map_err(|j| {
            Error::InvalidModule(format!(
                "sublattice is not stable: basis vector {} leaves it",
                j
            ))
        })?;
        Self::free(order, action)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    /// The underlying abelian group.
    pub fn group(&self) -> FgAbelianGroup {
        self.pres.to_group()
    }

    /// `N = 1 + σ + ... + σ^(n-1)`.
    pub fn norm_matrix(&self) -> IntMatrix {
        let m = self.pres.generator_count();
        let mut acc = IntMatrix::zeros(m, m);
        let mut power = IntMatrix::identity(m);
        for _ in 0..self.order {
            acc = acc.add(&power).expect("square");
            power = power.mul(&self.action).expect("square");
        }
        acc
    }

    /// `D = σ - 1`.
    pub fn difference_matrix(&self) -> IntMatrix {
        self.action
            .sub(&IntMatrix::identity(self.pres.generator_count()))
            .expect("square")
    }

    /// `M^G`, the kernel of `D` on the quotient.
    pub fn fixed_submodule(&self) -> FgAbelianGroup {
        self.subquotient(&self.difference_matrix(), None)
    }

    /// `H^i(G, M)` (Tate groups for `i >= 1`, invariants for `i = 0`).
    pub fn cohomology(&self, i: u32) -> FgAbelianGroup {
        match i {
            0 => self.fixed_submodule(),
            i if i % 2 == 1 => {
                self.subquotient(&self.norm_matrix(), Some(&self.difference_matrix()))
            }
            _ => self.tate_zero(),
        }
    }

    /// `Ĥ^0 = ker D / im N`, equal to every even-degree group.
    pub fn tate_zero(&self) -> FgAbelianGroup {
        self.subquotient(&self.difference_matrix(), Some(&self.norm_matrix()))
    }

    /// `(ker kernel_map) / (im image_map)` computed on `Z^m / R`.
    fn subquotient(&self, kernel_map: &IntMatrix, image_map: Option<&IntMatrix>) -> FgAbelianGroup {
        let rel = self.relation_lattice.basis();
        let ker = preimage_lattice(kernel_map, rel).expect("square maps on Z^m");
        let sub = match image_map {
            Some(img) => img.hcat(rel).expect("same generator count"),
            None => rel.clone(),
        };
        // validity of the module guarantees sub ⊆ ker
        lattice_quotient(&ker, &sub).expect("image lies in kernel for a valid module")
    }

    /// Herbrand quotient check `|Ĥ^0| = |H^1|`, which holds for every finite module.
    pub fn herbrand_check(&self) -> Result<bool> {
        if !self.group().is_finite() {
            return Err(Error::InfiniteModule);
        }
        let h0 = self.tate_zero().order();
        let h1 = self.cohomology(1).order();
        Ok(h0.is_some() && h0 == h1)
    }

    /// Whether `N·D` and `D·N` vanish on the quotient.
    pub fn composites_vanish(&self) -> bool {
        let d = self.difference_matrix();
        let n = self.norm_matrix();
        let (Ok(nd), Ok(dn)) = (n.mul(&d), d.mul(&n)) else {
            return false;
        };
        self.relation_lattice.coordinate_matrix(&nd).is_ok()
            && self.relation_lattice.coordinate_matrix(&dn).is_ok()
    }
}

/// `Z` with `σ = -1`.
pub fn sign_module(order: u64) -> Result<CyclicGModule> {
    CyclicGModule::free(order, IntMatrix::from_rows(&[[-1]]))
}

/// `Z/modulus` with `σ` acting as multiplication by `multiplier`.
pub fn cyclic_module(order: u64, modulus: i64, multiplier: i64) -> Result<CyclicGModule> {
    let pres = Presentation::new(1, IntMatrix::from_rows(&[[modulus]]))?;
    CyclicGModule::new(order, pres, IntMatrix::from_rows(&[[multiplier]]))
}

/// Whether `g` is finite and annihilated by `n`.
pub fn is_killed_by(g: &FgAbelianGroup, n: u64) -> bool {
    let n = BigInt::from(n);
    g.is_finite()
        && g.torsion()
            .iter()
            .all(|d| num_integer::Integer::is_multiple_of(&n, d))
}
