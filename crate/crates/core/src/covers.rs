//! Concrete families: hyperplane and form-product hypersurfaces, Fermat
//! curves, genus counts, and the standard cohomology tables, each wired into
//! the divisor and cohomology engines.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::cohomology::CyclicGModule;
use crate::divisor::{candidate_index, is_prime, CandidateUnits, NagataPresentation};
use crate::error::{Error, Result};
use crate::lattice::{
    cokernel, kernel_basis, lattice_quotient, snf, FgAbelianGroup, IntMatrix, Lattice,
    LatticeIndex, Presentation,
};

/// `n x n` matrix with `n - 1` on the diagonal and `-1` elsewhere: column `i` is
/// the divisor `n·L_i - (L_1 + ... + L_n)` of `f_i / x_0` on a product of `n`
/// linear forms plus one.
pub fn hyperplane_matrix(n: usize) -> Result<IntMatrix> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "need at least 2 hyperplanes, got {}",
            n
        )));
    }
    let degrees = vec![1u64; n];
    Ok(divisor_matrix(&degrees))
}

/// Irreducible forms of the given degrees; `X` is `f_1 ⋯ f_r = 1` in affine `m`-space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormProductScenario {
    degrees: Vec<u64>,
    total: u64,
    ambient_dim: usize,
}

impl FormProductScenario {
    pub fn new(degrees: Vec<u64>, ambient_dim: usize) -> Result<Self> {
        if degrees.len() < 2 {
            return Err(Error::Precondition(format!(
                "need at least two forms, got {}",
                degrees.len()
            )));
        }
        if degrees.contains(&0) {
            return Err(Error::Precondition("form degrees must be positive".into()));
        }
        if ambient_dim < 2 {
            return Err(Error::Precondition(format!(
                "ambient dimension must be at least 2, got {}",
                ambient_dim
            )));
        }
        let total = degrees.iter().sum();
        Ok(FormProductScenario {
            degrees,
            total,
            ambient_dim,
        })
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    /// `n = d_1 + ... + d_r`.
    pub fn total_degree(&self) -> u64 {
        self.total
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn form_count(&self) -> usize {
        self.degrees.len()
    }
}

/// Entry `(i, j) = n·[i = j] - d_j`. Column `j` is the divisor
/// `n·L_j - d_j (L_1 + ... + L_r)` of `f_j / x_0^(d_j)`; rows sum to zero.
pub fn form_product_matrix(s: &FormProductScenario) -> IntMatrix {
    divisor_matrix(&s.degrees)
}

fn divisor_matrix(degrees: &[u64]) -> IntMatrix {
    let r = degrees.len();
    let n: u64 = degrees.iter().sum();
    let mut c = IntMatrix::zeros(r, r);
    for i in 0..r {
        for (j, &d) in degrees.iter().enumerate() {
            let diag = if i == j {
                BigInt::from(n)
            } else {
                BigInt::zero()
            };
            c[(i, j)] = diag - BigInt::from(d);
        }
    }
    c
}

/// Result of the form-product analysis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormProductReport {
    pub degrees: Vec<u64>,
    pub total_degree: u64,
    /// Invariant factors of the divisor matrix.
    pub factors: Vec<BigInt>,
    pub degree_gcd: u64,
    /// `false` when the degrees share a factor; only `factors` is then meaningful.
    pub applicable: bool,
    pub analysis: Option<FormProductUnits>,
}

/// The unit-group conclusions, present only when the degrees are coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormProductUnits {
    /// `Z ⊕ (Z/n)^(r-2)`, the boundary subgroup for a coprime degree set.
    pub asserted_boundary: FgAbelianGroup,
    /// Boundary subgroup computed by the divisor engine on the realized presentation.
    pub boundary: FgAbelianGroup,
    /// Cokernel of the candidate divisor map.
    pub candidate_cokernel: FgAbelianGroup,
    /// `|coker α|` from the exact sequence `0 → coker α → coker β → H → 0`.
    pub snake_index: LatticeIndex,
    pub unit_rank: usize,
    pub candidate_index: LatticeIndex,
    /// `O*(X) / O*(U)` for the base `U = P^(m-1) - (L_1 ∪ ... ∪ L_r)`.
    pub units_over_base: FgAbelianGroup,
    pub basis_labels: Vec<String>,
}

pub fn analyze_form_product(s: &FormProductScenario) -> Result<FormProductReport> {
    let c = form_product_matrix(s);
    let factors = snf(&c).factors;
    let degree_gcd = s.degrees.iter().fold(0u64, |g, &d| g.gcd(&d));
    let applicable = degree_gcd == 1;
    let analysis = if applicable {
        Some(form_product_units(s, &c)?)
    } else {
        None
    };
    Ok(FormProductReport {
        degrees: s.degrees.clone(),
        total_degree: s.total,
        factors,
        degree_gcd,
        applicable,
        analysis,
    })
}

fn form_product_units(s: &FormProductScenario, c: &IntMatrix) -> Result<FormProductUnits> {
    let r = s.form_count();
    let n = s.total;
    let asserted_boundary = FgAbelianGroup::free_plus_power(1, n, r - 2);
    let candidate_cokernel = cokernel(c);
    let snake_index = snake_index(&candidate_cokernel, &asserted_boundary);

    // realize H as Z^r modulo the principal divisors generated by the candidates;
    // its invariant factors match the asserted boundary subgroup
    let presentation =
        NagataPresentation::new(Presentation::new(r, c.clone())?, IntMatrix::identity(r))?
            .with_justification(
                "boundary subgroup generated by L_1..L_r modulo the divisors of f_i / x_0^(d_i)",
            );
    let boundary = presentation.boundary_subgroup();
    let units = presentation.unit_lattice();
    let candidates = CandidateUnits::numbered(c.clone());
    let candidate_index = candidate_index(&candidates, &presentation)?;

    // O*(U)/k* sits inside through L_i ↦ n·L_i on the degree-zero lattice of the base
    let degrees: Vec<i64> = s.degrees.iter().map(|&d| d as i64).collect();
    let base_units = kernel_basis(&IntMatrix::from_rows(&[degrees]));
    let pulled_back = base_units.scale(&BigInt::from(n));
    let units_over_base = lattice_quotient(&units.lattice, &pulled_back)?;

    let basis_labels = (1..r).map(|i| format!("f{}", i)).collect();
    Ok(FormProductUnits {
        asserted_boundary,
        boundary,
        candidate_cokernel,
        snake_index,
        unit_rank: units.rank,
        candidate_index,
        units_over_base,
        basis_labels,
    })
}

/// Order of `coker α` forced by `0 → coker α → coker β → H → 0`.
fn snake_index(coker_beta: &FgAbelianGroup, h: &FgAbelianGroup) -> LatticeIndex {
    if coker_beta.free_rank() != h.free_rank() {
        return LatticeIndex::Infinite;
    }
    let (a, b) = (coker_beta.torsion_order(), h.torsion_order());
    // a surjection between groups with equal invariants is an isomorphism
    LatticeIndex::Finite(a / b)
}

/// Report for `n` generic linear forms whose class-group target carries extra,
/// unknown relations among the boundary lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneReport {
    pub n: usize,
    pub factors: Vec<BigInt>,
    pub boundary: FgAbelianGroup,
    pub unit_rank: usize,
    pub candidate_index: LatticeIndex,
    /// `|torsion(coker β)|`; the index divides it.
    pub index_bound: BigInt,
}

/// Hyperplane configuration with a target `Z^n / (principal divisors + extra)`.
///
/// `extra_relations` holds additional relators among `L_1..L_n` (columns);
/// they must be torsion in the candidate cokernel, since `H` stays infinite.
pub fn analyze_hyperplanes(n: usize, extra_relations: &IntMatrix) -> Result<HyperplaneReport> {
    let c = hyperplane_matrix(n)?;
    if extra_relations.rows() != n {
        return Err(Error::Shape(format!(
            "extra relations live in Z^{}, expected Z^{}",
            extra_relations.rows(),
            n
        )));
    }
    let relations = c.hcat(extra_relations)?;
    let presentation =
        NagataPresentation::new(Presentation::new(n, relations)?, IntMatrix::identity(n))?
            .with_justification("principal divisors of f_i / x_0 plus caller-supplied relations");
    let boundary = presentation.boundary_subgroup();
    if boundary.free_rank() != 1 {
        return Err(Error::Precondition(format!(
            "extra relations make the boundary subgroup {} finite or larger than rank one",
            boundary
        )));
    }
    let units = presentation.unit_lattice();
    let candidate_index = candidate_index(&CandidateUnits::numbered(c.clone()), &presentation)?;
    let coker = cokernel(&c);
    Ok(HyperplaneReport {
        n,
        factors: snf(&c).factors,
        boundary,
        unit_rank: units.rank,
        candidate_index,
        index_bound: coker.torsion_order(),
    })
}

/// Genus `(p - 1)(n - 2) / 2` of the smooth completion of `y^p = f(x)` with
/// `deg f = n` and `p | n`.
pub fn genus_rh(p: u64, n: u64) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{} is not prime", p)));
    }
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {}", n)));
    }
    if !n.is_multiple_of(p) {
        return Err(Error::Precondition(format!("{} does not divide {}", p, n)));
    }
    Ok((p - 1) * (n - 2) / 2)
}

/// Rank of the unit group of the Fermat curve `x^n + y^n = 1` with `xy ≠ 0`.
///
/// The `3n` boundary points map to a class group whose boundary part is `Z`
/// (degree) plus a finite group; only the degree affects the rank, so the
/// finite part is not modeled.
pub fn fermat_presentation(n: usize) -> Result<NagataPresentation> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "Fermat exponent must be at least 2, got {}",
            n
        )));
    }
    Ok(NagataPresentation::degree_map(&vec![1; 3 * n])
        .with_justification("every boundary point has degree one; the degree-zero part is finite"))
}

pub fn fermat_unit_rank(n: usize) -> Result<usize> {
    Ok(fermat_presentation(n)?.unit_lattice().rank)
}

/// An entry of a cohomology table. `k*` itself is not representable, so
/// groups containing it are recorded as `k* × G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableEntry {
    Group(FgAbelianGroup),
    ScalarsTimes(FgAbelianGroup),
}

impl TableEntry {
    pub fn group(&self) -> &FgAbelianGroup {
        match self {
            TableEntry::Group(g) | TableEntry::ScalarsTimes(g) => g,
        }
    }
}

/// `H^0`, `H^odd` and `H^even` (even degrees `>= 2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyTable {
    pub h0: TableEntry,
    pub odd: TableEntry,
    pub even: TableEntry,
}

impl CohomologyTable {
    pub fn of_module(m: &CyclicGModule) -> Self {
        CohomologyTable {
            h0: TableEntry::Group(m.cohomology(0)),
            odd: TableEntry::Group(m.cohomology(1)),
            even: TableEntry::Group(m.cohomology(2)),
        }
    }
}

/// Cohomology of `R*/k* = <f_1> × ... × <f_ν>` (trivial action) for the localization
/// `R = A[1/f]` of a polynomial ring.
pub fn trivial_action_table(n: u64, nu: usize) -> Result<CohomologyTable> {
    let m = CyclicGModule::trivial(n, Presentation::free(nu))?;
    Ok(CohomologyTable::of_module(&m))
}

/// Units on `U = P^m - (r hyperplanes)` and `H^1(U, μ_ν)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperplaneComplementReport {
    pub r: usize,
    pub nu: u64,
    pub unit_rank: usize,
    pub h1_mu: FgAbelianGroup,
}

pub fn hyperplane_complement_table(r: usize, nu: u64) -> Result<HyperplaneComplementReport> {
    if r == 0 {
        return Err(Error::Precondition(
            "need at least one boundary divisor".into(),
        ));
    }
    let p = NagataPresentation::degree_map(&vec![1; r]);
    let unit_rank = p.unit_lattice().rank;
    let h1_mu = FgAbelianGroup::free(unit_rank).tensor_mod(&BigInt::from(nu));
    Ok(HyperplaneComplementReport {
        r,
        nu,
        unit_rank,
        h1_mu,
    })
}

/// Tables for `T = A[z]/(z^n - f)` and `S = T[1/z]` with `f` irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleBranchTables {
    pub n: u64,
    pub cover_units: CohomologyTable,
    pub localized_units: CohomologyTable,
    /// `S*/T* = <z>` with trivial action.
    pub quotient: CohomologyTable,
}

pub fn irreducible_branch_table(n: u64) -> Result<IrreducibleBranchTables> {
    if n < 2 {
        return Err(Error::Precondition(format!(
            "cover degree must be at least 2, got {}",
            n
        )));
    }
    let quotient = CohomologyTable::of_module(&CyclicGModule::trivial(n, Presentation::free(1))?);
    // H^1(T*) is the cokernel of <f> → <z>, f ↦ z^n
    let h1 = Presentation::new(1, IntMatrix::from_rows(&[[n as i64]]))?.to_group();
    if &h1 != quotient.even.group() {
        return Err(Error::Internal(format!(
            "<z>/<z^n> = {} disagrees with H^2(<z>) = {}",
            h1,
            quotient.even.group()
        )));
    }
    let cover_units = CohomologyTable {
        h0: TableEntry::ScalarsTimes(FgAbelianGroup::trivial()),
        odd: TableEntry::Group(h1),
        even: TableEntry::Group(FgAbelianGroup::trivial()),
    };
    let localized_units = CohomologyTable {
        h0: TableEntry::ScalarsTimes(FgAbelianGroup::free(1)),
        odd: TableEntry::Group(FgAbelianGroup::trivial()),
        even: TableEntry::Group(FgAbelianGroup::trivial()),
    };
    Ok(IrreducibleBranchTables {
        n,
        cover_units,
        localized_units,
        quotient,
    })
}

/// Cyclic permutation `L_i ↦ L_(i+1)` of `r` boundary divisors.
pub fn cyclic_permutation(r: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(r, r);
    for i in 0..r {
        m[((i + 1) % r, i)] = BigInt::one();
    }
    m
}

/// The free sublattice of `Z^r` spanned by the divisor matrix columns.
pub fn principal_lattice(c: &IntMatrix) -> Lattice {
    Lattice::from_generators(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| i64::try_from(x).unwrap()).collect()
    }

    #[test]
    fn hyperplane_matrices() {
        assert_eq!(
            hyperplane_matrix(2).unwrap(),
            IntMatrix::from_rows(&[[1, -1], [-1, 1]])
        );
        assert_eq!(
            hyperplane_matrix(3).unwrap(),
            IntMatrix::from_rows(&[[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])
        );
        assert!(hyperplane_matrix(1).is_err());
    }

    #[test]
    fn form_product_matrix_entries() {
        let s = FormProductScenario::new(vec![2, 3], 2).unwrap();
        assert_eq!(
            form_product_matrix(&s),
            IntMatrix::from_rows(&[[3, -3], [-2, 2]])
        );
        let s = FormProductScenario::new(vec![1, 1, 1, 1], 3).unwrap();
        assert_eq!(form_product_matrix(&s), hyperplane_matrix(4).unwrap());
        assert!(FormProductScenario::new(vec![3], 2).is_err());
        assert!(FormProductScenario::new(vec![1, 0], 2).is_err());
        assert!(FormProductScenario::new(vec![1, 2], 1).is_err());
    }

    #[test]
    fn coprime_pair() {
        let r = analyze_form_product(&FormProductScenario::new(vec![2, 3], 2).unwrap()).unwrap();
        assert_eq!(ints(&r.factors), [1, 0]);
        let a = r.analysis.unwrap();
        assert_eq!(a.unit_rank, 1);
        assert!(a.candidate_index.is_one());
        assert!(a.snake_index.is_one());
        assert_eq!(a.boundary, a.asserted_boundary);
        assert_eq!(a.units_over_base, FgAbelianGroup::cyclic(5));
        assert_eq!(a.basis_labels, ["f1"]);
    }

    #[test]
    fn shared_factor_is_flagged() {
        let r = analyze_form_product(&FormProductScenario::new(vec![2, 2], 2).unwrap()).unwrap();
        assert_eq!(ints(&r.factors), [2, 0]);
        assert!(!r.applicable);
        assert!(r.analysis.is_none());
    }

    #[test]
    fn generic_hyperplanes_have_finite_index() {
        // L_1 - L_2 has order 4 in coker β for n = 4; killing 2(L_1 - L_2) leaves index 2
        let extra = IntMatrix::from_rows(&[[2], [-2], [0], [0]]);
        let r = analyze_hyperplanes(4, &extra).unwrap();
        assert_eq!(r.unit_rank, 3);
        assert_eq!(r.candidate_index, LatticeIndex::Finite(BigInt::from(2)));
        assert_eq!(r.index_bound, BigInt::from(16));
        let none = analyze_hyperplanes(4, &IntMatrix::zeros(4, 0)).unwrap();
        assert!(none.candidate_index.is_one());
        let bad = IntMatrix::from_rows(&[[1], [0], [0], [0]]);
        assert!(analyze_hyperplanes(4, &bad).is_err());
    }

    #[test]
    fn genus_values() {
        assert_eq!(genus_rh(2, 4).unwrap(), 1);
        assert_eq!(genus_rh(3, 3).unwrap(), 1);
        assert_eq!(genus_rh(2, 6).unwrap(), 2);
        assert!(genus_rh(2, 3).is_err());
        assert!(genus_rh(4, 8).is_err());
        assert!(genus_rh(2, 2).is_err());
    }

    #[test]
    fn fermat_ranks() {
        for n in 2..6 {
            assert_eq!(fermat_unit_rank(n).unwrap(), 3 * n - 1);
        }
        assert!(fermat_unit_rank(1).is_err());
    }

    #[test]
    fn tables() {
        let t = trivial_action_table(3, 2).unwrap();
        assert_eq!(t.h0.group(), &FgAbelianGroup::free(2));
        assert!(t.odd.group().is_trivial());
        assert_eq!(t.even.group(), &FgAbelianGroup::free_plus_power(0, 3, 2));
        let t = trivial_action_table(1, 2).unwrap();
        assert!(t.odd.group().is_trivial() && t.even.group().is_trivial());

        let p = hyperplane_complement_table(4, 6).unwrap();
        assert_eq!(p.unit_rank, 3);
        assert_eq!(p.h1_mu, FgAbelianGroup::free_plus_power(0, 6, 3));
        let p = hyperplane_complement_table(1, 5).unwrap();
        assert_eq!(p.unit_rank, 0);
        assert!(p.h1_mu.is_trivial());

        let t = irreducible_branch_table(3).unwrap();
        assert_eq!(t.cover_units.odd.group(), &FgAbelianGroup::cyclic(3));
        assert!(t.cover_units.even.group().is_trivial());
        assert!(t.localized_units.odd.group().is_trivial());
    }

    #[test]
    fn cyclic_permutation_has_order_r() {
        let p = cyclic_permutation(5);
        assert_eq!(p.pow(5).unwrap(), IntMatrix::identity(5));
        assert_ne!(p.pow(1).unwrap(), IntMatrix::identity(5));
    }
}
