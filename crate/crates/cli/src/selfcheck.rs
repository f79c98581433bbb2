//! Seeded randomized property checks against independent oracles.

use std::sync::Arc;

use cyclounits_core::cohomology::CyclicGModule;
use cyclounits_core::lattice::{minors_gcd_factors, snf, IntMatrix, Presentation};
use cyclounits_core::ring::{CoverElement, CoverRing, CycNumber, CyclotomicField, MultiPoly};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

/// Failures kept per check in the report.
const MAX_REPORTED: usize = 5;

pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntMatrix {
    let rows: Vec<Vec<i64>> = (0..rows)
        .map(|_| (0..cols).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    IntMatrix::from_rows(&rows)
}

fn snf_against_minors(rng: &mut impl Rng, cases: usize) -> CheckResult {
    let mut failures = Vec::new();
    for i in 0..cases {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = random_matrix(rng, r, c, 20);
        let d = snf(&a);
        match minors_gcd_factors(&a) {
            Ok(f) if f == d.factors && d.verify(&a) => {}
            Ok(f) => failures.push(format!(
                "case {}: snf {:?}, minors {:?}, A = {}",
                i, d.factors, f, a
            )),
            Err(e) => failures.push(format!("case {}: {}", i, e)),
        }
    }
    CheckResult {
        name: "snf_vs_minors",
        cases,
        failures,
    }
}

/// `σ` conjugate to a signed permutation of order dividing `n`, on `(Z/d)^m`.
fn random_finite_module(rng: &mut impl Rng) -> CyclicGModule {
    let n = rng.gen_range(1..=6u64);
    let m = rng.gen_range(1..=3usize);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut base = IntMatrix::zeros(m, m);
    let mut start = 0;
    while start < m {
        let lens: Vec<usize> = (1..=m - start).filter(|l| n % *l as u64 == 0).collect();
        let len = *lens.choose(rng).expect("length 1 always fits");
        for i in 0..len {
            let flip = len == 1 && n % 2 == 0 && rng.gen_bool(0.3);
            base[(order[start + (i + 1) % len], order[start + i])] =
                BigInt::from(if flip { -1 } else { 1 });
        }
        start += len;
    }
    // conjugate by a product of elementary matrices, tracking the inverse alongside
    let (mut u, mut u_inv) = (IntMatrix::identity(m), IntMatrix::identity(m));
    for _ in 0..4 {
        let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
        if a == b {
            continue;
        }
        let k = rng.gen_range(-2i64..=2);
        let mut e = IntMatrix::identity(m);
        e[(a, b)] = BigInt::from(k);
        let mut e_inv = IntMatrix::identity(m);
        e_inv[(a, b)] = BigInt::from(-k);
        u = e.mul(&u).expect("square");
        u_inv = u_inv.mul(&e_inv).expect("square");
    }
    let sigma = u.mul(&base).and_then(|x| x.mul(&u_inv)).expect("square");
    let d = BigInt::from(rng.gen_range(2i64..=12));
    let pres = Presentation::new(m, IntMatrix::identity(m).scale(&d)).expect("square relations");
    CyclicGModule::new(n, pres, sigma).expect("dZ^m is stable under any σ")
}

fn herbrand(rng: &mut impl Rng, cases: usize) -> CheckResult {
    let mut failures = Vec::new();
    for i in 0..cases {
        let m = random_finite_module(rng);
        let (h0, h1) = (m.tate_zero().order(), m.cohomology(1).order());
        if h0.is_none() || h0 != h1 {
            failures.push(format!("case {}: |H^0| = {:?}, |H^1| = {:?}", i, h0, h1));
        }
    }
    CheckResult {
        name: "herbrand_quotient",
        cases,
        failures,
    }
}

fn random_poly(
    rng: &mut impl Rng,
    k: &Arc<CyclotomicField>,
    terms: usize,
    max_deg: u32,
) -> MultiPoly {
    let n = k.conductor() as i64;
    let t = (0..terms).map(|_| {
        let e: Vec<u32> = (0..2).map(|_| rng.gen_range(0..=max_deg)).collect();
        let c = &CycNumber::integer(k, rng.gen_range(-3i64..=3))
            * &CycNumber::zeta_pow(k, rng.gen_range(0..n));
        (e, c)
    });
    MultiPoly::from_terms(k, 2, t)
}

fn random_ring(rng: &mut impl Rng, n: u64) -> Arc<CoverRing> {
    let k = CyclotomicField::new(n);
    loop {
        let f = random_poly(rng, &k, 3, 2);
        if f.as_constant().is_some() {
            continue;
        }
        if let Ok(ring) = CoverRing::new(n, f, vec![]) {
            return ring;
        }
    }
}

fn random_element(rng: &mut impl Rng, ring: &Arc<CoverRing>) -> CoverElement {
    let comps = (0..ring.degree())
        .map(|_| random_poly(rng, ring.field(), 2, 1))
        .collect();
    CoverElement::new(ring, comps).expect("n components")
}

fn norm_identities(rng: &mut impl Rng, cases: usize) -> CheckResult {
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = [2u64, 3, 4][i % 3];
        let ring = random_ring(rng, n);
        let (u, v) = (random_element(rng, &ring), random_element(rng, &ring));
        let check = || -> cyclounits_core::Result<Option<String>> {
            let (nu, nv) = (u.norm()?, v.norm()?);
            if u.mul(&v)?.norm()? != &nu * &nv {
                return Ok(Some("N(uv) != N(u)N(v)".into()));
            }
            if u.sigma().norm()? != nu {
                return Ok(Some("N(σu) != N(u)".into()));
            }
            let sign = CycNumber::zeta_pow(ring.field(), (n * (n - 1) / 2) as i64);
            if CoverElement::z(&ring).norm()? != ring.f().scale(&sign) {
                return Ok(Some("N(z) != ζ^(n(n-1)/2) f".into()));
            }
            Ok(None)
        };
        match check() {
            Ok(None) => {}
            Ok(Some(what)) => failures.push(format!(
                "case {} (n = {}, f = {}, u = {}): {}",
                i,
                n,
                ring.f(),
                u,
                what
            )),
            Err(e) => failures.push(format!("case {}: {}", i, e)),
        }
    }
    CheckResult {
        name: "norm_identities",
        cases,
        failures,
    }
}

pub fn run(seed: u64, cases: usize) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        snf_against_minors(&mut rng, cases),
        herbrand(&mut rng, cases),
        // norms are the slow part; keep their share modest
        norm_identities(&mut rng, cases.div_ceil(4)),
    ]
}

pub fn to_json(seed: u64, results: &[CheckResult]) -> Value {
    let checks: Vec<Value> = results
        .iter()
        .map(|r| {
            json!({
                "name": r.name,
                "cases": r.cases,
                "failed": r.failures.len(),
                "failures": r.failures.iter().take(MAX_REPORTED).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({"seed": seed, "passed": results.iter().all(CheckResult::passed), "checks": checks})
}
