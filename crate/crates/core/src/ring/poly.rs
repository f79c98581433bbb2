use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::cyclotomic::{CycNumber, CyclotomicField};
use super::unipoly::UniPoly;

/// Exponent vector, ordered graded-lexicographically (`x1 > x2 > ...`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `m` variables over `Q(ζ_n)`. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    field: Arc<CyclotomicField>,
    nvars: usize,
    terms: BTreeMap<Monomial, CycNumber>,
}

impl MultiPoly {
    pub fn zero(field: &Arc<CyclotomicField>, nvars: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: CycNumber) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    pub fn one(field: &Arc<CyclotomicField>, nvars: usize) -> Self {
        Self::constant(nvars, CycNumber::one(field))
    }

    pub fn integer(field: &Arc<CyclotomicField>, nvars: usize, k: i64) -> Self {
        Self::constant(nvars, CycNumber::integer(field, k))
    }

    /// The variable `x_(i+1)`.
    pub fn var(field: &Arc<CyclotomicField>, nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable {} out of range for {} variables",
            i,
            nvars
        );
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(Monomial(e), CycNumber::one(field))
    }

    pub fn monomial(m: Monomial, c: CycNumber) -> Self {
        let mut p = Self::zero(c.field(), m.0.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Sums the given terms; repeated monomials accumulate.
    pub fn from_terms<I>(field: &Arc<CyclotomicField>, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, CycNumber)>,
    {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    /// Embeds a rational univariate polynomial in variable `var`.
    pub fn from_unipoly(
        field: &Arc<CyclotomicField>,
        nvars: usize,
        var: usize,
        u: &UniPoly,
    ) -> Self {
        let terms = u.coeffs().iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; nvars];
            e[var] = k as u32;
            (e, CycNumber::rational(field, c.clone()))
        });
        Self::from_terms(field, nvars, terms)
    }

    fn add_term(&mut self, m: Monomial, c: CycNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &CycNumber)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> CycNumber {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| CycNumber::zero(&self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` for a constant polynomial (including zero).
    pub fn as_constant(&self) -> Option<CycNumber> {
        match self.terms.len() {
            0 => Some(CycNumber::zero(&self.field)),
            1 => self
                .terms
                .iter()
                .next()
                .filter(|(m, _)| m.is_one())
                .map(|(_, c)| c.clone()),
            _ => None,
        }
    }

    pub fn is_nonzero_constant(&self) -> bool {
        self.as_constant().is_some_and(|c| !c.is_zero())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycNumber)> {
        self.terms.iter().next_back()
    }

    /// Whether every coefficient is rational.
    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    /// Rational univariate view, when only `var` occurs and all coefficients are rational.
    pub fn to_unipoly(&self, var: usize) -> Option<UniPoly> {
        if self.variables().iter().any(|&v| v != var) {
            return None;
        }
        let deg = self
            .terms
            .keys()
            .map(|m| m.0[var] as usize)
            .max()
            .unwrap_or(0);
        let mut c = vec![BigRational::zero(); deg + 1];
        for (m, v) in &self.terms {
            c[m.0[var] as usize] = v.as_rational()?;
        }
        Some(UniPoly::new(c))
    }

    fn check(&self, other: &MultiPoly) {
        assert_eq!(
            self.nvars, other.nvars,
            "polynomials in different variable counts"
        );
        assert_eq!(
            self.field.conductor(),
            other.field.conductor(),
            "polynomials over different fields"
        );
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        if c.is_zero() {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field, self.nvars);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut p = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut d = m.0.clone();
                d[var] -= 1;
                p.add_term(Monomial(d), c.scale(&BigRational::from_integer(e.into())));
            }
        }
        p
    }

    /// Division by a single nonzero divisor in graded-lex order: `self = q·g + r`
    /// with no term of `r` divisible by the leading monomial of `g`.
    ///
    /// A single polynomial is a Gröbner basis of the ideal it generates, so `r`
    /// is zero exactly when `g` divides `self`.
    pub fn div_rem(&self, g: &MultiPoly) -> Option<(MultiPoly, MultiPoly)> {
        self.check(g);
        let (lm, lc) = g.leading_term()?;
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        let mut p = self.clone();
        let mut q = Self::zero(&self.field, self.nvars);
        let mut r = Self::zero(&self.field, self.nvars);
        while let Some((m, c)) = p
            .terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            match m.div(lm) {
                Some(shift) => {
                    let t = Self::monomial(shift, &c * &lc_inv);
                    p = &p - &(&t * g);
                    q = &q + &t;
                }
                None => {
                    p.terms.remove(&m);
                    r.add_term(m, c);
                }
            }
        }
        Some((q, r))
    }

    /// `self / g` when the division is exact.
    pub fn exact_div(&self, g: &MultiPoly) -> Option<MultiPoly> {
        let (q, r) = self.div_rem(g)?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd of two polynomials in the same single variable.
    pub fn univariate_gcd(&self, other: &MultiPoly) -> Option<MultiPoly> {
        let vars: Vec<usize> = self
            .variables()
            .into_iter()
            .chain(other.variables())
            .collect();
        if vars.windows(2).any(|w| w[0] != w[1]) {
            return None;
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Some(match a.leading_term() {
            Some((_, c)) => a.scale(&c.inv().expect("nonzero")),
            None => a,
        })
    }

    /// Squarefreeness for a polynomial in at most one variable; `None` otherwise.
    pub fn is_squarefree_univariate(&self) -> Option<bool> {
        if self.is_zero() {
            return Some(false);
        }
        match self.variables().as_slice() {
            [] => Some(true),
            [v] => Some(self.univariate_gcd(&self.derivative(*v))?.total_degree() == Some(0)),
            _ => None,
        }
    }

    /// Default variable names: `x`, `x, y`, or `x1, ..., xm`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        match nvars {
            1 => vec![String::from("x")],
            2 => vec![String::from("x"), String::from("y")],
            _ => (1..=nvars).map(|i| format!("x{}", i)).collect(),
        }
    }

    /// Formats with the given variable names, highest term first.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (m, c) in self.terms.iter().rev() {
            let mono: Vec<String> =
                m.0.iter()
                    .zip(names)
                    .filter(|(e, _)| **e > 0)
                    .map(|(&e, n)| {
                        if e == 1 {
                            n.clone()
                        } else {
                            format!("{}^{}", n, e)
                        }
                    })
                    .collect();
            let mono = mono.join("*");
            let (neg, body) = match c.as_rational() {
                Some(r) => {
                    let neg = r < BigRational::zero();
                    let a = if neg { -r } else { r };
                    let body = if mono.is_empty() {
                        format!("{}", a)
                    } else if a == BigRational::from_integer(1.into()) {
                        mono
                    } else {
                        format!("{}*{}", a, mono)
                    };
                    (neg, body)
                }
                None => {
                    let c = format!("({})", c);
                    (
                        false,
                        if mono.is_empty() {
                            c
                        } else {
                            format!("{}*{}", c, mono)
                        },
                    )
                }
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&Self::default_names(self.nvars)))
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut p = self.clone();
        for (m, c) in &rhs.terms {
            p.add_term(m.clone(), -c);
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check(rhs);
        let mut p = MultiPoly::zero(&self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                p.add_term(ma.mul(mb), ca * cb);
            }
        }
        p
    }
}
