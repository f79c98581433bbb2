//! Polynomial Pell equation `a² - f·b² = c ∈ Q*` via the continued fraction
//! of `√f` in descending Laurent series.
//!
//! With `α_0 = √f` and `α_i = (P_i + √f) / Q_i`, the partial quotients are the
//! polynomial parts `a_i = (P_i + ⌊√f⌋) div Q_i` and
//!
//! ```text
//! P_(i+1) = a_i Q_i - P_i,    Q_(i+1) = (f - P_(i+1)²) / Q_i,
//! ```
//!
//! while the convergents `p_i / q_i` satisfy `p_i² - f q_i² = ±Q_(i+1)`. A
//! solution exists exactly when some `Q_i` is constant, and the first one is
//! the solution of least degree. Over `Q` the expansion need not be periodic,
//! so the search stops at a caller-supplied step bound.

use alloc::format;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::poly::MultiPoly;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

/// `a² - f·b² = c` with `b` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub a: UniPoly,
    pub b: UniPoly,
    pub c: BigRational,
    /// Index of the convergent that produced the solution.
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PellOutcome {
    Found(PellSolution),
    /// No constant-norm convergent within `bound` steps; absence is relative to
    /// the bound and to rational coefficients.
    BoundReached {
        bound: usize,
    },
}

impl PellOutcome {
    pub fn solution(&self) -> Option<&PellSolution> {
        match self {
            PellOutcome::Found(s) => Some(s),
            PellOutcome::BoundReached { .. } => None,
        }
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let exact = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(BigRational::new(exact(r.numer())?, exact(r.denom())?))
}

/// Polynomial part of `√f` for `f` of even degree `2d` with square leading
/// coefficient: the unique `a` of degree `d` with `deg(f - a²) < d`.
pub fn sqrt_polynomial_part(f: &UniPoly) -> Result<UniPoly> {
    let deg = f.degree().filter(|d| d % 2 == 0 && *d > 0).ok_or_else(|| {
        Error::Precondition(format!("need even positive degree, got {:?}", f.degree()))
    })?;
    let s = rational_sqrt(f.lead().expect("nonzero")).ok_or_else(|| {
        Error::Precondition(format!(
            "leading coefficient {} is not a rational square",
            f.lead().unwrap()
        ))
    })?;
    let d = deg / 2;
    let two_s = &s + &s;
    let mut a = UniPoly::monomial(s, d);
    for k in 1..=d {
        let r = (f - &(&a * &a)).coeff(deg - k);
        if !r.is_zero() {
            a = &a + &UniPoly::monomial(r / &two_s, d - k);
        }
    }
    Ok(a)
}

/// Smallest solution reached within `bound` continued-fraction steps.
///
/// Requires `f` squarefree of even degree at least 2 with a rational square
/// leading coefficient. Every returned certificate has been re-checked.
pub fn pell_solve(f: &UniPoly, bound: usize) -> Result<PellOutcome> {
    let a0 = sqrt_polynomial_part(f)?;
    if !f.is_squarefree() {
        return Err(Error::Precondition(format!("{} has a repeated factor", f)));
    }
    let (mut p_prev, mut q_prev) = (UniPoly::one(), UniPoly::zero());
    let (mut p, mut q) = (a0.clone(), UniPoly::one());
    let mut big_p = a0.clone();
    let mut big_q = f - &(&a0 * &a0);
    for step in 0..=bound {
        if step > 0 {
            let (ai, _) = (&big_p + &a0)
                .div_rem(&big_q)
                .expect("Q_i is never zero for non-square f");
            let p_next = &(&ai * &p) + &p_prev;
            let q_next = &(&ai * &q) + &q_prev;
            p_prev = core::mem::replace(&mut p, p_next);
            q_prev = core::mem::replace(&mut q, q_next);
            let next_p = &(&ai * &big_q) - &big_p;
            let (next_q, rem) = (f - &(&next_p * &next_p)).div_rem(&big_q).expect("nonzero");
            if !rem.is_zero() {
                return Err(Error::Internal(
                    "continued-fraction recurrence lost exactness".into(),
                ));
            }
            big_p = next_p;
            big_q = next_q;
        }
        if big_q.is_constant() {
            return finish(f, &p, &q, step).map(PellOutcome::Found);
        }
    }
    Ok(PellOutcome::BoundReached { bound })
}

fn finish(f: &UniPoly, p: &UniPoly, q: &UniPoly, steps: usize) -> Result<PellSolution> {
    let l = q
        .lead()
        .expect("convergent denominators are nonzero")
        .recip();
    let a = p.scale(&l);
    let b = q.scale(&l);
    let value = &(&a * &a) - &(f * &(&b * &b));
    if !value.is_constant() || value.is_zero() {
        return Err(Error::Internal(format!(
            "certificate a² - f b² = {} is not a nonzero constant",
            value
        )));
    }
    let c = value.coeff(0);
    Ok(PellSolution { a, b, c, steps })
}

/// [`pell_solve`] on a polynomial with rational coefficients in one variable.
pub fn pell_solve_poly(f: &MultiPoly, bound: usize) -> Result<PellOutcome> {
    let vars = f.variables();
    let var = match vars.as_slice() {
        [v] => *v,
        _ => {
            return Err(Error::Precondition(
                "Pell solving needs a univariate f".into(),
            ))
        }
    };
    let u = f
        .to_unipoly(var)
        .ok_or_else(|| Error::Precondition("Pell solving needs rational coefficients".into()))?;
    pell_solve(&u, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn square_root_part() {
        assert_eq!(
            sqrt_polynomial_part(&UniPoly::from_ints(&[0, 1, 0, 0, 1])).unwrap(),
            UniPoly::from_ints(&[0, 0, 1])
        );
        // √(4x² + 4x + 5) = 2x + 1 + ...
        assert_eq!(
            sqrt_polynomial_part(&UniPoly::from_ints(&[5, 4, 4])).unwrap(),
            UniPoly::from_ints(&[1, 2])
        );
        assert!(sqrt_polynomial_part(&UniPoly::from_ints(&[1, 0, 2])).is_err());
        assert!(sqrt_polynomial_part(&UniPoly::from_ints(&[1, 1, 1, 1])).is_err());
    }

    #[test]
    fn quartic_examples() {
        let s = pell_solve(&UniPoly::from_ints(&[0, 1, 0, 0, 1]), 10).unwrap();
        let s = s.solution().unwrap();
        assert_eq!(
            s.a,
            UniPoly::new(alloc::vec![q(1, 2), q(0, 1), q(0, 1), q(1, 1)])
        );
        assert_eq!(s.b, UniPoly::from_ints(&[0, 1]));
        assert_eq!(s.c, q(1, 4));

        let s = pell_solve(&UniPoly::from_ints(&[-1, 0, 0, 0, 1]), 10).unwrap();
        let s = s.solution().unwrap();
        assert_eq!(
            (s.a.clone(), s.b.clone(), s.c.clone()),
            (UniPoly::from_ints(&[0, 0, 1]), UniPoly::one(), q(1, 1))
        );
        assert_eq!(s.steps, 0);
    }

    #[test]
    fn quadratics_always_solve() {
        // x² + 1: (x)² - (x² + 1) = -1
        let s = pell_solve(&UniPoly::from_ints(&[1, 0, 1]), 3).unwrap();
        assert_eq!(s.solution().unwrap().c, q(-1, 1));
    }

    #[test]
    fn preconditions() {
        assert!(pell_solve(&UniPoly::from_ints(&[0, 1]), 5).is_err());
        assert!(pell_solve(&UniPoly::from_ints(&[1, 2, 1]), 5).is_err());
        assert!(pell_solve(&UniPoly::from_ints(&[1, 0, 0, 0, 2]), 5).is_err());
    }

    #[test]
    fn generic_quartic_reaches_bound() {
        let out = pell_solve(&UniPoly::from_ints(&[1, 1, 0, 0, 1]), 20).unwrap();
        assert_eq!(out, PellOutcome::BoundReached { bound: 20 });
    }
}
