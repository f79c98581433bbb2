//! Bounded searches for nonconstant units of a cover ring.
//!
//! Finding a unit is a certificate; finding none says nothing beyond the
//! enumerated candidates and the coefficient field `Q(ζ_n)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicBool, Ordering};

use num_integer::Integer;

use super::cover::{CoverElement, CoverRing};
use super::cyclotomic::CycNumber;
use super::pell::{pell_solve_poly, PellOutcome};
use super::poly::{Monomial, MultiPoly};
use crate::error::{Error, Result};

/// Default monomial degree bound for [`unit_search`].
pub const DEFAULT_DEGREE_BOUND: usize = 2;

/// Default number of nonzero terms per candidate for [`unit_search`].
pub const DEFAULT_SUPPORT_BOUND: usize = 3;

/// Default cap on the number of enumerated candidates.
pub const DEFAULT_CANDIDATE_LIMIT: u128 = 5_000_000;

/// Coefficients tried on each occupied slot; the first slot takes only the positive ones.
pub const SEARCH_COEFFICIENTS: [i64; 4] = [1, -1, 2, -2];

#[derive(Clone, Copy, Debug)]
pub struct SearchOptions<'a> {
    pub candidate_limit: u128,
    /// Polled between candidates; setting it aborts with [`Error::Cancelled`].
    pub cancel: Option<&'a AtomicBool>,
}

impl Default for SearchOptions<'_> {
    fn default() -> Self {
        SearchOptions {
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            cancel: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchMethod {
    /// `n = 2`, one variable, even degree: continued fraction of `√f`.
    ContinuedFraction { steps: usize },
    /// `n = 2`, one variable, odd degree: `a² - f b²` always has degree
    /// `max(2 deg a, deg f + 2 deg b)`, so only constants are units.
    OddDegree,
    /// Small-support candidates `Σ c·m·z^j`, `c` from [`SEARCH_COEFFICIENTS`].
    Enumeration { slots: usize },
}

#[derive(Clone, Debug)]
pub struct UnitSearchOutcome {
    pub units: Vec<CoverElement>,
    pub method: SearchMethod,
    pub degree_bound: usize,
    pub support_bound: usize,
    pub candidates_examined: u128,
}

impl UnitSearchOutcome {
    pub fn found_any(&self) -> bool {
        !self.units.is_empty()
    }
}

/// Searches for units of `T` outside `k*`.
///
/// For `n = 2` and univariate `f` of even degree this runs the Pell solver
/// with `degree_bound` continued-fraction steps; every partial quotient has
/// positive degree, so this covers every solution with `deg b <= degree_bound`.
/// Otherwise candidates are sums of at most `support_bound` terms `c·m·z^j`
/// with `m` a monomial of degree `<= degree_bound`, `1 <= j < n` for at least
/// one term (elements of `A` are units only when constant), primitive
/// coefficient vectors and a positive leading coefficient.
pub fn unit_search(
    ring: &Arc<CoverRing>,
    degree_bound: usize,
    support_bound: usize,
    options: SearchOptions<'_>,
) -> Result<UnitSearchOutcome> {
    let mut outcome = UnitSearchOutcome {
        units: Vec::new(),
        method: SearchMethod::OddDegree,
        degree_bound,
        support_bound,
        candidates_examined: 0,
    };
    if ring.degree() == 2 && ring.f().variables().len() == 1 {
        let var = ring.f().variables()[0];
        if let Some(u) = ring.f().to_unipoly(var) {
            if u.degree().is_some_and(|d| d % 2 == 1) {
                return Ok(outcome);
            }
            if let Ok(pell) = pell_solve_poly(ring.f(), degree_bound) {
                outcome.candidates_examined = degree_bound as u128 + 1;
                match pell {
                    PellOutcome::Found(s) => {
                        outcome.method = SearchMethod::ContinuedFraction { steps: s.steps };
                        let field = ring.field();
                        let a = MultiPoly::from_unipoly(field, ring.nvars(), var, &s.a);
                        let b = MultiPoly::from_unipoly(field, ring.nvars(), var, &s.b);
                        outcome.units.push(CoverElement::new(ring, vec![a, b])?);
                    }
                    PellOutcome::BoundReached { bound } => {
                        outcome.method = SearchMethod::ContinuedFraction { steps: bound };
                    }
                }
                return Ok(outcome);
            }
        }
    }
    enumerate(ring, degree_bound, support_bound, options, outcome)
}

/// Monomials of total degree `<= d` in `m` variables, highest first.
fn monomials_up_to(m: usize, d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut e = vec![0u32; m];
    fn rec(i: usize, left: u32, e: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == e.len() {
            out.push(Monomial::new(e.clone()));
            return;
        }
        for k in 0..=left {
            e[i] = k;
            rec(i + 1, left - k, e, out);
        }
        e[i] = 0;
    }
    rec(0, d as u32, &mut e, &mut out);
    out.sort();
    out.reverse();
    out
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Upper bound on enumerated candidates before filtering.
pub fn candidate_count(slots: usize, support_bound: usize) -> u128 {
    (1..=support_bound as u128)
        .map(|k| {
            binomial(slots as u128, k)
                .saturating_mul(2u128.saturating_mul(4u128.saturating_pow(k as u32 - 1)))
        })
        .fold(0u128, u128::saturating_add)
}

fn enumerate(
    ring: &Arc<CoverRing>,
    degree_bound: usize,
    support_bound: usize,
    options: SearchOptions<'_>,
    mut outcome: UnitSearchOutcome,
) -> Result<UnitSearchOutcome> {
    let n = ring.degree() as usize;
    let monos = monomials_up_to(ring.nvars(), degree_bound);
    let slots: Vec<(usize, Monomial)> = (0..n)
        .rev()
        .flat_map(|j| monos.iter().map(move |m| (j, m.clone())))
        .collect();
    outcome.method = SearchMethod::Enumeration { slots: slots.len() };
    let total = candidate_count(slots.len(), support_bound);
    if total > options.candidate_limit {
        return Err(Error::SearchGuard {
            candidates: total,
            limit: options.candidate_limit,
        });
    }
    let field = ring.field();
    let coeffs: Vec<CycNumber> = SEARCH_COEFFICIENTS
        .iter()
        .map(|&c| CycNumber::integer(field, c))
        .collect();

    for k in 1..=support_bound.min(slots.len()) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            // at least one slot with a positive z-power
            if idx.iter().any(|&i| slots[i].0 > 0) {
                let mut choice = vec![0usize; k];
                loop {
                    if let Some(c) = options.cancel {
                        if outcome.candidates_examined.is_multiple_of(1024)
                            && c.load(Ordering::Relaxed)
                        {
                            return Err(Error::Cancelled);
                        }
                    }
                    outcome.candidates_examined += 1;
                    let primitive = choice
                        .iter()
                        .map(|&c| SEARCH_COEFFICIENTS[c].abs())
                        .fold(0i64, |g, c| g.gcd(&c))
                        == 1;
                    if primitive {
                        let mut comps = vec![MultiPoly::zero(field, ring.nvars()); n];
                        for (&slot, &c) in idx.iter().zip(&choice) {
                            let (j, m) = &slots[slot];
                            comps[*j] =
                                &comps[*j] + &MultiPoly::monomial(m.clone(), coeffs[c].clone());
                        }
                        let u = CoverElement::new(ring, comps)?;
                        if u.norm()?.is_nonzero_constant() {
                            outcome.units.push(u);
                        }
                    }
                    if !advance_choice(&mut choice) {
                        break;
                    }
                }
            }
            if !advance_subset(&mut idx, slots.len()) {
                break;
            }
        }
    }
    Ok(outcome)
}

/// Odometer over coefficient indices; position 0 ranges over the positive ones.
fn advance_choice(choice: &mut [usize]) -> bool {
    for (pos, c) in choice.iter_mut().enumerate().rev() {
        if pos == 0 {
            // positive coefficients sit at indices 0 and 2
            if *c == 0 {
                *c = 2;
                return true;
            }
            return false;
        }
        if *c + 1 < SEARCH_COEFFICIENTS.len() {
            *c += 1;
            return true;
        }
        *c = 0;
    }
    false
}

fn advance_subset(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::cyclotomic::CyclotomicField;

    #[test]
    fn monomial_lists() {
        assert_eq!(monomials_up_to(2, 2).len(), 6);
        assert_eq!(monomials_up_to(3, 1).len(), 4);
        assert_eq!(monomials_up_to(2, 2)[0], Monomial::new(vec![2, 0]));
        assert_eq!(candidate_count(12, 1), 24);
        assert_eq!(candidate_count(3, 2), 6 + 3 * 8);
    }

    #[test]
    fn choice_odometer_visits_every_sign_pattern() {
        let mut c = vec![0, 0];
        let mut seen = 1;
        while advance_choice(&mut c) {
            seen += 1;
        }
        assert_eq!(seen, 8);
    }

    #[test]
    fn square_root_of_x_has_no_units() {
        let k = CyclotomicField::new(2);
        let x = MultiPoly::var(&k, 1, 0);
        let ring = CoverRing::new(2, x, vec![]).unwrap();
        let out = unit_search(&ring, 3, 2, SearchOptions::default()).unwrap();
        assert!(out.units.is_empty());
        assert_eq!(out.method, SearchMethod::OddDegree);
    }

    #[test]
    fn guard_and_cancel() {
        let k = CyclotomicField::new(3);
        let x = MultiPoly::var(&k, 2, 0);
        let y = MultiPoly::var(&k, 2, 1);
        let ring = CoverRing::new(3, &x.pow(3) + &y.pow(3), vec![]).unwrap();
        let tight = SearchOptions {
            candidate_limit: 10,
            cancel: None,
        };
        assert!(matches!(
            unit_search(&ring, 2, 3, tight),
            Err(Error::SearchGuard { .. })
        ));
        let stop = AtomicBool::new(true);
        let opts = SearchOptions {
            candidate_limit: DEFAULT_CANDIDATE_LIMIT,
            cancel: Some(&stop),
        };
        assert_eq!(
            unit_search(&ring, 1, 2, opts).unwrap_err(),
            Error::Cancelled
        );
    }
}
