//! Boundary-divisor bookkeeping for unit groups.
//!
//! For a normal affine variety `X` with completion `Y` and boundary
//! `Y - X = Z_1 ∪ ... ∪ Z_r`, the sequence
//!
//! ```text
//! 1 → O*(Y) → O*(X) → ⊕ Z·Z_i --chi--> Cl(Y) → Cl(X) → 0
//! ```
//!
//! is exact, so `O*(X)/k*` is the lattice `ker chi ⊆ Z^r`. The class group
//! `Cl(Y)` is supplied by the caller as a [`Presentation`] (or a quotient known
//! to contain the image of `chi` faithfully); nothing here computes class
//! groups from geometry.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cohomology::CyclicGModule;
use crate::error::{Error, Result};
use crate::lattice::{
    cokernel, lattice_index, lattice_quotient, FgAbelianGroup, IntMatrix, Lattice, LatticeIndex,
    Presentation,
};

/// Boundary divisors `Z_1..Z_r` and the map `chi` into a presented class group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NagataPresentation {
    boundary_count: usize,
    class_target: Presentation,
    chi: IntMatrix,
    justification: String,
}

impl NagataPresentation {
    pub fn new(class_target: Presentation, chi: IntMatrix) -> Result<Self> {
        if chi.rows() != class_target.generator_count() {
            return Err(Error::Shape(format!(
                "chi has {} rows but the target has {} generators",
                chi.rows(),
                class_target.generator_count()
            )));
        }
        Ok(NagataPresentation {
            boundary_count: chi.cols(),
            class_target,
            chi,
            justification: String::new(),
        })
    }

    /// Attaches a free-text reason for the chosen target presentation.
    pub fn with_justification(mut self, why: impl Into<String>) -> Self {
        self.justification = why.into();
        self
    }

    /// Target `Z` (a degree map) with `chi(Z_i) = degrees[i]`.
    pub fn degree_map(degrees: &[i64]) -> Self {
        let chi = IntMatrix::from_rows(&[degrees]);
        let chi = if degrees.is_empty() {
            IntMatrix::zeros(1, 0)
        } else {
            chi
        };
        Self::new(Presentation::free(1), chi).expect("one row into one generator")
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn class_target(&self) -> &Presentation {
        &self.class_target
    }

    pub fn chi(&self) -> &IntMatrix {
        &self.chi
    }

    pub fn justification(&self) -> &str {
        &self.justification
    }

    fn relation_lattice(&self) -> Lattice {
        Lattice::from_generators(self.class_target.relations())
    }

    /// `ker chi` as a lattice in `Z^r`: the unit group modulo scalars.
    pub fn unit_lattice(&self) -> UnitLattice {
        let rel = self.relation_lattice();
        let lattice = crate::lattice::preimage_lattice(&self.chi, rel.basis())
            .expect("shapes checked at construction");
        UnitLattice {
            rank: lattice.rank(),
            lattice,
        }
    }

    /// `Cl(X) = coker(chi)`.
    pub fn class_cokernel(&self) -> FgAbelianGroup {
        cokernel(
            &self
                .chi
                .hcat(self.class_target.relations())
                .expect("same row count"),
        )
    }

    /// `H = im chi` as a subgroup of the presented target.
    pub fn boundary_subgroup(&self) -> FgAbelianGroup {
        let rel = self.class_target.relations();
        let span = Lattice::from_generators(&self.chi.hcat(rel).expect("same row count"));
        lattice_quotient(&span, rel).expect("relations lie in their own span")
    }

    /// `chi` applied to a boundary divisor.
    pub fn apply_chi(&self, divisor: &[num_bigint::BigInt]) -> Result<Vec<num_bigint::BigInt>> {
        self.chi.mul_vec(divisor)
    }
}

/// Basis of `O*(X)/k*` as boundary divisors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitLattice {
    pub lattice: Lattice,
    pub rank: usize,
}

impl UnitLattice {
    pub fn basis(&self) -> &IntMatrix {
        self.lattice.basis()
    }
}

/// Named candidate units, column `j` of `divisors` being the divisor of unit `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateUnits {
    pub divisors: IntMatrix,
    pub labels: Vec<String>,
}

impl CandidateUnits {
    pub fn new(divisors: IntMatrix, labels: Vec<String>) -> Result<Self> {
        if labels.len() != divisors.cols() {
            return Err(Error::Shape(format!(
                "{} labels for {} candidate columns",
                labels.len(),
                divisors.cols()
            )));
        }
        Ok(CandidateUnits { divisors, labels })
    }

    /// Labels `f1, f2, ...`.
    pub fn numbered(divisors: IntMatrix) -> Self {
        let labels = (1..=divisors.cols()).map(|i| format!("f{}", i)).collect();
        CandidateUnits { divisors, labels }
    }
}

/// `[ker chi : span(candidates)]`.
///
/// Index 1 means the candidates form a basis of `O*(X)/k*`; a finite index
/// means they generate a finite-index subgroup; infinite means too few.
pub fn candidate_index(c: &CandidateUnits, p: &NagataPresentation) -> Result<LatticeIndex> {
    if c.divisors.rows() != p.boundary_count() {
        return Err(Error::Shape(format!(
            "candidate divisors live in Z^{} but there are {} boundary divisors",
            c.divisors.rows(),
            p.boundary_count()
        )));
    }
    let rel = p.relation_lattice();
    for j in 0..c.divisors.cols() {
        let residue = p.apply_chi(&c.divisors.column(j))?;
        if !rel.contains(&residue) {
            return Err(Error::NotUnitDivisor { column: j, residue });
        }
    }
    let units = p.unit_lattice();
    lattice_index(&c.divisors, units.basis())
}

/// The two outcomes for a degree-`p` cyclic cover with `p` boundary divisors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrimeCoverUnits {
    /// `H` is free of rank `p` and `O*(X) = k*`.
    UnitsTrivial,
    /// `H` is `Z` extended by a finite group and `O*(X)/k*` is free of rank `p - 1`.
    RankPMinus1,
}

/// Decides which side of the prime-cover dichotomy a boundary subgroup `H` is on.
pub fn classify_prime_cover(p: u64, h: &FgAbelianGroup) -> Result<PrimeCoverUnits> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{} is not prime", p)));
    }
    let rank = h.free_rank() as u64;
    if rank == p && h.is_free() {
        Ok(PrimeCoverUnits::UnitsTrivial)
    } else if rank == 1 {
        Ok(PrimeCoverUnits::RankPMinus1)
    } else {
        Err(Error::Dichotomy(format!(
            "H = {} has free rank {}, expected 1 or a free group of rank {}",
            h, rank, p
        )))
    }
}

/// `σ`-module structure on the unit lattice, for an action permuting the boundary divisors.
pub fn unit_lattice_module(
    p: &NagataPresentation,
    order: u64,
    boundary_action: &IntMatrix,
) -> Result<CyclicGModule> {
    let units = p.unit_lattice();
    CyclicGModule::restrict_free(order, boundary_action, &units.lattice)
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn hypersurface_complement() {
        for d in 1..6 {
            let p = NagataPresentation::degree_map(&[d]);
            assert_eq!(p.unit_lattice().rank, 0);
            assert_eq!(p.class_cokernel(), FgAbelianGroup::cyclic(d));
        }
    }

    #[test]
    fn hyperplanes_in_general_position() {
        for r in 1..6 {
            let p = NagataPresentation::degree_map(&alloc::vec![1; r]);
            assert_eq!(p.unit_lattice().rank, r - 1);
            assert!(p.class_cokernel().is_trivial());
            assert_eq!(p.boundary_subgroup(), FgAbelianGroup::free(1));
        }
    }

    #[test]
    fn zero_and_identity_chi() {
        let p = NagataPresentation::new(Presentation::free(1), IntMatrix::zeros(1, 3)).unwrap();
        assert_eq!(p.unit_lattice().rank, 3);
        assert_eq!(p.class_cokernel(), FgAbelianGroup::free(1));
        let p = NagataPresentation::new(Presentation::free(3), IntMatrix::identity(3)).unwrap();
        assert_eq!(p.boundary_subgroup(), FgAbelianGroup::free(3));
        assert!(p.class_cokernel().is_trivial());
        assert_eq!(p.unit_lattice().rank, 0);
    }

    #[test]
    fn candidate_errors_name_the_column() {
        let p = NagataPresentation::degree_map(&[1, 1, 1]);
        let c = CandidateUnits::numbered(IntMatrix::from_rows(&[[1, 1], [-1, 0], [0, 0]]));
        match candidate_index(&c, &p) {
            Err(Error::NotUnitDivisor { column, residue }) => {
                assert_eq!(column, 1);
                assert_eq!(residue, alloc::vec![BigInt::from(1)]);
            }
            other => panic!("unexpected {:?}", other),
        }
        let one = CandidateUnits::numbered(IntMatrix::from_rows(&[[1], [-1], [0]]));
        assert_eq!(candidate_index(&one, &p).unwrap(), LatticeIndex::Infinite);
    }

    #[test]
    fn dichotomy() {
        assert_eq!(
            classify_prime_cover(3, &FgAbelianGroup::free(3)).unwrap(),
            PrimeCoverUnits::UnitsTrivial
        );
        assert_eq!(
            classify_prime_cover(5, &FgAbelianGroup::free_plus_power(1, 5, 3)).unwrap(),
            PrimeCoverUnits::RankPMinus1
        );
        assert!(matches!(
            classify_prime_cover(5, &FgAbelianGroup::free(2)),
            Err(Error::Dichotomy(_))
        ));
        assert!(matches!(
            classify_prime_cover(4, &FgAbelianGroup::free(1)),
            Err(Error::Precondition(_))
        ));
    }
}
