#![allow(dead_code)]

use std::sync::Arc;

use cyclounits_core::cohomology::CyclicGModule;
use cyclounits_core::lattice::{FgAbelianGroup, IntMatrix, Presentation};
use cyclounits_core::ring::{CoverElement, CoverRing, CycNumber, CyclotomicField, MultiPoly};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    if rows.is_empty() || cols == 0 {
        return IntMatrix::zeros(rows.len(), cols);
    }
    IntMatrix::from_rows(&rows)
}

/// Random product of elementary matrices.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a == b {
            rows[a].iter_mut().for_each(|x| *x = -*x);
            continue;
        }
        let k = rng.gen_range(-2i64..=2);
        for j in 0..n {
            rows[a][j] += k * rows[b][j];
        }
    }
    IntMatrix::from_rows(&rows)
}

/// Signed permutation of `Z^m` whose order divides `n`: disjoint cycles of
/// lengths dividing `n`, with sign flips only when `n` is even.
fn signed_cycle_action(rng: &mut impl Rng, m: usize, n: u64) -> IntMatrix {
    let lengths: Vec<usize> = (1..=m).filter(|l| n.is_multiple_of(*l as u64)).collect();
    let mut perm: Vec<usize> = (0..m).collect();
    let mut start = 0;
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    while start < m {
        let fits: Vec<usize> = lengths.iter().copied().filter(|l| start + l <= m).collect();
        let len = *fits.choose(rng).unwrap();
        for i in 0..len {
            perm[order[start + i]] = order[start + (i + 1) % len];
        }
        start += len;
    }
    let mut a = IntMatrix::zeros(m, m);
    for (i, &p) in perm.iter().enumerate() {
        let flip = n.is_multiple_of(2) && perm[i] == i && rng.gen_bool(0.3);
        a[(p, i)] = BigInt::from(if flip { -1 } else { 1 });
    }
    a
}

/// A finite module `Z^m / (P(σ)Z^m + d Z^m)` with `σ` conjugate to a signed
/// cycle action, retried until its order is at most `max_order`.
pub fn random_finite_module(rng: &mut impl Rng, max_n: u64, max_order: u64) -> CyclicGModule {
    loop {
        let n = rng.gen_range(1..=max_n);
        let m = rng.gen_range(1..=3usize);
        let base = signed_cycle_action(rng, m, n);
        let u = random_unimodular(rng, m, 4);
        let u_inv = inverse_unimodular(&u);
        let sigma = u.mul(&base).unwrap().mul(&u_inv).unwrap();
        let mut p = IntMatrix::zeros(m, m);
        let mut power = IntMatrix::identity(m);
        for _ in 0..n {
            p = p
                .add(&power.scale(&BigInt::from(rng.gen_range(-3i64..=3))))
                .unwrap();
            power = power.mul(&sigma).unwrap();
        }
        let d = BigInt::from(rng.gen_range(1i64..=12));
        let rel = p.hcat(&IntMatrix::identity(m).scale(&d)).unwrap();
        let pres = Presentation::new(m, rel).unwrap();
        let g = pres.to_group();
        if g.order().is_some_and(|o| o <= BigInt::from(max_order)) {
            return CyclicGModule::new(n, pres, sigma).expect("σ-stable relations");
        }
    }
}

/// Inverse of a unimodular matrix via the adjugate (independent of the HNF code).
pub fn inverse_unimodular(u: &IntMatrix) -> IntMatrix {
    let n = u.rows();
    let det = u.det().unwrap();
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let keep_r: Vec<usize> = (0..n).filter(|&r| r != j).collect();
            let keep_c: Vec<usize> = (0..n).filter(|&c| c != i).collect();
            let rows: Vec<Vec<BigInt>> = keep_r
                .iter()
                .map(|&r| keep_c.iter().map(|&c| u[(r, c)].clone()).collect())
                .collect();
            let minor = if n == 1 {
                BigInt::from(1)
            } else {
                IntMatrix::new(n - 1, n - 1, rows.into_iter().flatten().collect())
                    .unwrap()
                    .det()
                    .unwrap()
            };
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[(i, j)] = minor * sign * &det;
        }
    }
    inv
}

pub fn random_poly(
    rng: &mut impl Rng,
    field: &Arc<CyclotomicField>,
    nvars: usize,
    terms: usize,
    max_deg: u32,
) -> MultiPoly {
    let n = field.conductor() as i64;
    let t = (0..terms).map(|_| {
        let e: Vec<u32> = (0..nvars).map(|_| rng.gen_range(0..=max_deg)).collect();
        let c = &CycNumber::integer(field, rng.gen_range(-3i64..=3))
            * &CycNumber::zeta_pow(field, rng.gen_range(0..n));
        (e, c)
    });
    MultiPoly::from_terms(field, nvars, t)
}

pub fn random_nonconstant_poly(
    rng: &mut impl Rng,
    field: &Arc<CyclotomicField>,
    nvars: usize,
) -> MultiPoly {
    loop {
        let p = random_poly(rng, field, nvars, 3, 2);
        if p.as_constant().is_none() {
            return p;
        }
    }
}

pub fn random_element(rng: &mut impl Rng, ring: &Arc<CoverRing>) -> CoverElement {
    let comps = (0..ring.degree())
        .map(|_| random_poly(rng, ring.field(), ring.nvars(), 2, 1))
        .collect();
    CoverElement::new(ring, comps).unwrap()
}

/// A two-variable cover ring of degree `n` with random nonconstant `f`
/// (redrawn when a univariate draw has a repeated factor).
pub fn random_ring(rng: &mut impl Rng, n: u64) -> Arc<CoverRing> {
    let k = CyclotomicField::new(n);
    loop {
        if let Ok(ring) = CoverRing::new(n, random_nonconstant_poly(rng, &k, 2), vec![]) {
            return ring;
        }
    }
}

pub fn invariants(g: &FgAbelianGroup) -> (usize, Vec<BigInt>) {
    (g.free_rank(), g.torsion().to_vec())
}
