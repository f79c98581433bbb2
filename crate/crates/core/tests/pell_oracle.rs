//! Cross-checks the continued-fraction Pell solver against a direct linear
//! system on Laurent coefficients.
//!
//! For `f` of degree `2d` and monic `b` of degree `k`, `a² - f b²` is a
//! nonzero constant iff `b·√f` has vanishing coefficients at
//! `x^-1, ..., x^-(k+d-1)`; then `a` is the polynomial part of `b·√f`.

mod common;

use cyclounits_core::ring::{pell_solve, PellOutcome, UniPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Coefficients `h_0, h_1, ...` with `√f = Σ h_j x^(d-j)`.
fn sqrt_series(f: &UniPoly, terms: usize) -> Vec<BigRational> {
    let deg = f.degree().unwrap();
    // g(t) = t^deg f(1/t), g(0) = lead
    let g: Vec<BigRational> = (0..terms)
        .map(|j| {
            if j <= deg {
                f.coeff(deg - j)
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let lead = &g[0];
    let s = BigRational::new(lead.numer().sqrt(), lead.denom().sqrt());
    assert_eq!(&s * &s, *lead, "square leading coefficient");
    let mut h = vec![s.clone()];
    for j in 1..terms {
        let cross: BigRational = (1..j).map(|i| &h[i] * &h[j - i]).sum();
        h.push((&g[j] - cross) / (&s + &s));
    }
    h
}

/// Solves `M y = r` over `Q`; `None` when inconsistent. Free variables are set to zero.
fn solve(
    mut m: Vec<Vec<BigRational>>,
    mut r: Vec<BigRational>,
    unknowns: usize,
) -> Option<Vec<BigRational>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(p) = (row..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        r.swap(row, p);
        let inv = m[row][col].recip();
        for i in 0..m.len() {
            if i != row && !m[i][col].is_zero() {
                let factor = &m[i][col] * &inv;
                for j in 0..unknowns {
                    let t = &factor * &m[row][j];
                    m[i][j] -= t;
                }
                let t = &factor * &r[row];
                r[i] -= t;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    if r[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    let mut y = vec![BigRational::zero(); unknowns];
    for (i, c) in pivots {
        y[c] = &r[i] / &m[i][c];
    }
    Some(y)
}

/// Monic `b` of degree `k` and the matching `a`, when they exist.
fn oracle(f: &UniPoly, k: usize) -> Option<(UniPoly, UniPoly)> {
    let d = f.degree().unwrap() / 2;
    let h = sqrt_series(f, 2 * (k + d) + 2);
    // coefficient of x^(-e) in b·√f is Σ_j b_j h_(j+d+e)
    let equations = k + d - 1;
    let m: Vec<Vec<BigRational>> = (1..=equations)
        .map(|e| (0..k).map(|j| h[j + d + e].clone()).collect())
        .collect();
    let r: Vec<BigRational> = (1..=equations).map(|e| -h[k + d + e].clone()).collect();
    let mut b = solve(m, r, k)?;
    b.push(BigRational::one());
    let b = UniPoly::new(b);
    // polynomial part: x^e for e = 0..k+d
    let a = UniPoly::new(
        (0..=k + d)
            .map(|e| {
                (0..=k)
                    .filter(|&j| j + d >= e)
                    .map(|j| b.coeff(j) * &h[j + d - e])
                    .sum()
            })
            .collect(),
    );
    Some((a, b))
}

fn minimal_oracle(f: &UniPoly, max_k: usize) -> Option<(usize, UniPoly, UniPoly)> {
    (0..=max_k).find_map(|k| oracle(f, k).map(|(a, b)| (k, a, b)))
}

fn check_agreement(f: &UniPoly, max_k: usize) {
    let from_oracle = minimal_oracle(f, max_k);
    let from_cf = pell_solve(f, max_k).unwrap();
    match (&from_oracle, from_cf.solution()) {
        (Some((k, a, b)), Some(s)) => {
            assert_eq!(s.b.degree(), Some(*k), "f = {}", f);
            assert_eq!(&s.b, b, "f = {}", f);
            assert_eq!(&s.a, a, "f = {}", f);
        }
        (None, None) => {}
        (Some((k, ..)), None) => panic!(
            "f = {}: oracle finds deg b = {} but the solver reached its bound",
            f, k
        ),
        // a continued-fraction hit past max_k is allowed when its degree exceeds the oracle window
        (None, Some(s)) => assert!(
            s.b.degree().unwrap() > max_k,
            "f = {}: solver found deg b = {:?}",
            f,
            s.b.degree()
        ),
    }
    if let Some(s) = from_cf.solution() {
        let value = &(&s.a * &s.a) - &(f * &(&s.b * &s.b));
        assert!(value.is_constant() && !value.is_zero());
        assert_eq!(value.coeff(0), s.c);
    }
}

#[test]
fn oracle_reproduces_the_known_quartics() {
    let f = UniPoly::from_ints(&[0, 1, 0, 0, 1]);
    let (k, a, b) = minimal_oracle(&f, 4).unwrap();
    assert_eq!((k, b), (1, UniPoly::from_ints(&[0, 1])));
    assert_eq!(
        a,
        UniPoly::new(vec![BigRational::new(1.into(), 2.into()), q(0), q(0), q(1)])
    );
    let f = UniPoly::from_ints(&[-1, 0, 0, 0, 1]);
    assert_eq!(minimal_oracle(&f, 4).map(|(k, ..)| k), Some(0));
}

#[test]
fn no_solution_for_the_generic_quartic_up_to_degree_eight() {
    let f = UniPoly::from_ints(&[1, 1, 0, 0, 1]);
    for k in 0..=8 {
        assert!(
            oracle(&f, k).is_none(),
            "unexpected solution with deg b = {}",
            k
        );
    }
    assert_eq!(
        pell_solve(&f, 20).unwrap(),
        PellOutcome::BoundReached { bound: 20 }
    );
}

#[test]
fn solver_agrees_with_oracle_on_random_inputs() {
    let mut rng = common::rng(0x9e11);
    let mut solved = 0;
    for trial in 0..60 {
        let d = rng.gen_range(1..=3usize);
        let f = if trial % 3 == 0 {
            // g² + c always has the solution (g, 1)
            let g = UniPoly::new(
                (0..=d)
                    .map(|i| q(if i == d { 1 } else { rng.gen_range(-3..=3) }))
                    .collect(),
            );
            &(&g * &g)
                + &UniPoly::constant(q(
                    rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 }
                ))
        } else {
            let mut c: Vec<BigRational> = (0..2 * d).map(|_| q(rng.gen_range(-4..=4))).collect();
            c.push(q(*[1, 4, 9].get(rng.gen_range(0..3)).unwrap()));
            UniPoly::new(c)
        };
        if !f.is_squarefree() {
            continue;
        }
        check_agreement(&f, 6);
        if pell_solve(&f, 6).unwrap().solution().is_some() {
            solved += 1;
        }
    }
    assert!(solved >= 10, "only {} solvable instances", solved);
}

#[test]
fn leading_coefficient_signs() {
    // a negative leading coefficient is not a rational square
    assert!(pell_solve(&UniPoly::from_ints(&[1, 0, -1]), 4).is_err());
}
