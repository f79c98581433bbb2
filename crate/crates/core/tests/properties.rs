mod common;

use cyclounits_core::lattice::{
    cokernel, kernel_basis, lattice_index, minors_gcd_factors, rank, snf, FgAbelianGroup,
    IntMatrix, LatticeIndex, Presentation,
};
use cyclounits_core::ring::CoverElement;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn matrix_strategy(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-bound..=bound, c), r)
            .prop_map(|rows| IntMatrix::from_rows(&rows))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn smith_factors_match_minor_gcds(a in matrix_strategy(5, 12)) {
        let d = snf(&a);
        prop_assert!(d.verify(&a));
        prop_assert_eq!(&d.factors, &minors_gcd_factors(&a).unwrap());
        for w in d.factors.windows(2) {
            prop_assert!(w[0].is_zero() && w[1].is_zero() || (!w[0].is_zero() && (w[1].clone() % &w[0]).is_zero()));
        }
    }

    #[test]
    fn kernel_has_complementary_rank(a in matrix_strategy(5, 6)) {
        let k = kernel_basis(&a);
        prop_assert_eq!(k.cols(), a.cols() - rank(&a));
        prop_assert!(a.mul(&k).unwrap().is_zero());
        // saturated: the kernel's own invariant factors are all 1
        prop_assert!(snf(&k).factors.iter().all(|f| f == &BigInt::from(1)));
    }

    #[test]
    fn square_cokernel_order_is_determinant(a in matrix_strategy(4, 9).prop_filter("square", |m| m.is_square())) {
        let det = a.det().unwrap();
        let g = cokernel(&a);
        if det.is_zero() {
            prop_assert!(!g.is_finite());
        } else {
            prop_assert_eq!(g.order(), Some(det.abs()));
        }
    }

    #[test]
    fn presentation_ignores_basis_changes(a in matrix_strategy(4, 8), seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let u = common::random_unimodular(&mut r, a.rows(), 6);
        let v = common::random_unimodular(&mut r, a.cols(), 6);
        let b = u.mul(&a).unwrap().mul(&v).unwrap();
        let g = Presentation::new(a.rows(), a).unwrap().to_group();
        let h = Presentation::new(b.rows(), b).unwrap().to_group();
        prop_assert_eq!(g, h);
    }

    #[test]
    fn scaled_lattice_index(n in 1usize..4, k in 1i64..6) {
        let id = IntMatrix::identity(n);
        let idx = lattice_index(&id.scale(&BigInt::from(k)), &id).unwrap();
        prop_assert_eq!(idx, LatticeIndex::Finite(BigInt::from(k).pow(n as u32)));
    }

    #[test]
    fn herbrand_quotient_is_one_on_finite_modules(seed in any::<u64>()) {
        let m = common::random_finite_module(&mut common::rng(seed), 6, 10_000);
        prop_assert!(m.composites_vanish());
        prop_assert!(m.herbrand_check().unwrap());
        // every Tate group is killed by the group order
        let n = BigInt::from(m.order());
        for g in [m.tate_zero(), m.cohomology(1)] {
            prop_assert!(g.torsion().iter().all(|d| (&n % d).is_zero()));
        }
        prop_assert_eq!(m.cohomology(2), m.cohomology(4));
        prop_assert_eq!(m.cohomology(1), m.cohomology(3));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norm_is_multiplicative_and_galois_invariant(seed in any::<u64>(), n_idx in 0usize..4) {
        let mut r = common::rng(seed);
        let n = [2u64, 3, 4, 6][n_idx];
        let ring = common::random_ring(&mut r, n);
        let u = common::random_element(&mut r, &ring);
        let v = common::random_element(&mut r, &ring);
        let nu = u.norm().unwrap();
        let nv = v.norm().unwrap();
        prop_assert_eq!(u.mul(&v).unwrap().norm().unwrap(), &nu * &nv);
        prop_assert_eq!(u.sigma().norm().unwrap(), nu.clone());
        prop_assert_eq!(u.norm_det(), nu);
        prop_assert_eq!(u.sigma_pow(n), u.clone());
        // σ is a ring automorphism
        prop_assert_eq!(u.mul(&v).unwrap().sigma(), u.sigma().mul(&v.sigma()).unwrap());
        prop_assert_eq!(CoverElement::one(&ring).norm().unwrap().as_constant().map(|c| c.is_one()), Some(true));
    }
}

#[test]
fn free_rank_survives_tensoring() {
    let g = FgAbelianGroup::free_plus_power(2, 6, 1);
    assert_eq!(
        g.tensor_mod(&BigInt::from(4)),
        FgAbelianGroup::from_invariants([4, 4, 2].map(BigInt::from))
    );
}
