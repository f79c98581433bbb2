use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense univariate polynomial over `Q`, coefficients stored lowest degree first
/// with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<BigRational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c·x^k`.
    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `x^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// Euclidean division; `None` for a zero divisor.
    pub fn div_rem(&self, d: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let dd = d.degree()?;
        let lead_inv = d.lead()?.recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut q = vec![BigRational::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let c = &r[k] * &lead_inv;
            for (j, dj) in d.coeffs.iter().enumerate() {
                let t = &c * dj;
                r[k - dd + j] -= t;
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        Some((Self::new(q), Self::new(r)))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &UniPoly) -> (UniPoly, UniPoly, UniPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = core::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = core::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = core::mem::replace(&mut t1, t);
        }
        match r0.lead().cloned() {
            Some(l) => {
                let inv = l.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// No repeated factor: `gcd(p, p')` is constant.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Formats with the given variable name.
    pub fn to_string_in(&self, var: &str) -> String {
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => String::from(var),
                    _ => alloc::format!("{}^{}", var, k),
                };
                (c.clone(), mono)
            });
        format_terms(terms)
    }
}

/// Joins `(coefficient, monomial)` pairs as `a*m + b*m' - ...`; an empty
/// monomial string stands for `1`.
pub(crate) fn format_terms<I: IntoIterator<Item = (BigRational, String)>>(terms: I) -> String {
    let mut out = String::new();
    for (c, mono) in terms {
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&alloc::format!("{}", a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&alloc::format!("{}*{}", a, mono));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }
}
