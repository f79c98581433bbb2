//! `Q(ζ_n) = Q[t] / Φ_n(t)` with `ζ` the residue of `t`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::unipoly::{format_terms, UniPoly};

/// Integer coefficients of `Φ_n`, lowest degree first: `t^n - 1` divided by
/// `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    let mut p = UniPoly::new(num.into_iter().map(BigRational::from_integer).collect());
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        let phi_d = UniPoly::new(
            cyclotomic_polynomial(d)
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        );
        let (q, r) = p.div_rem(&phi_d).expect("nonzero");
        debug_assert!(r.is_zero());
        p = q;
    }
    p.coeffs().iter().map(|c| c.to_integer()).collect()
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let (mut m, mut out, mut p) = (n, n, 2);
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if m > 1 {
        out -= out / m;
    }
    out
}

/// The field `Q(ζ_n)`; shared by reference among its elements.
#[derive(Debug)]
pub struct CyclotomicField {
    n: u64,
    modulus: Vec<BigInt>,
    modulus_poly: UniPoly,
}

impl PartialEq for CyclotomicField {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for CyclotomicField {}

impl CyclotomicField {
    pub fn new(n: u64) -> Arc<Self> {
        let modulus = cyclotomic_polynomial(n);
        let modulus_poly = UniPoly::new(
            modulus
                .iter()
                .cloned()
                .map(BigRational::from_integer)
                .collect(),
        );
        Arc::new(CyclotomicField {
            n,
            modulus,
            modulus_poly,
        })
    }

    pub fn conductor(&self) -> u64 {
        self.n
    }

    /// `[Q(ζ_n) : Q] = φ(n)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &UniPoly {
        &self.modulus_poly
    }

    /// Reduces an integer coefficient vector of any length modulo the monic `Φ_n`.
    fn reduce(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for k in (d..c.len()).rev() {
            if c[k].is_zero() {
                continue;
            }
            let top = core::mem::take(&mut c[k]);
            for j in 0..d {
                if !self.modulus[j].is_zero() {
                    c[k - d + j] -= &top * &self.modulus[j];
                }
            }
        }
        c.resize(d, BigInt::zero());
        c
    }
}

/// An element of `Q(ζ_n)`, stored as integer numerators over one positive
/// common denominator in lowest terms.
///
/// Arithmetic between elements of different fields panics; elements built
/// from one [`CyclotomicField`] handle never meet another in this crate.
#[derive(Clone, Debug)]
pub struct CycNumber {
    field: Arc<CyclotomicField>,
    nums: Vec<BigInt>,
    den: BigInt,
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.n == other.field.n && self.den == other.den && self.nums == other.nums
    }
}

impl Eq for CycNumber {}

impl CycNumber {
    fn normalized(field: &Arc<CyclotomicField>, mut nums: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            nums.iter_mut().for_each(|x| *x = -&*x);
        }
        if !den.is_one() {
            let g = nums.iter().fold(den.clone(), |g, x| g.gcd(x));
            if !g.is_one() {
                den /= &g;
                nums.iter_mut().for_each(|x| *x /= &g);
            }
        }
        CycNumber {
            field: field.clone(),
            nums,
            den,
        }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycNumber {
            field: field.clone(),
            nums: vec![BigInt::zero(); field.degree()],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::integer(field, 1)
    }

    pub fn rational(field: &Arc<CyclotomicField>, r: BigRational) -> Self {
        let (num, den) = r.into_raw();
        let mut nums = vec![BigInt::zero(); field.degree()];
        nums[0] = num;
        Self::normalized(field, nums, den)
    }

    pub fn integer(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let mut x = Self::zero(field);
        x.nums[0] = BigInt::from(k);
        x
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let e = k.rem_euclid(field.n as i64) as usize;
        let mut c = vec![BigInt::zero(); e + 1];
        c[e] = BigInt::one();
        CycNumber {
            field: field.clone(),
            nums: field.reduce(c),
            den: BigInt::one(),
        }
    }

    pub fn zeta(field: &Arc<CyclotomicField>) -> Self {
        Self::zeta_pow(field, 1)
    }

    /// `(Σ nums[i] ζ^i) / den`, reduced modulo `Φ_n`; `den` must be nonzero.
    pub fn from_parts(field: &Arc<CyclotomicField>, nums: Vec<BigInt>, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Self::normalized(field, field.reduce(nums), den)
    }

    /// Reduces a rational polynomial in `ζ`.
    pub fn from_rationals(field: &Arc<CyclotomicField>, coeffs: &[BigRational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(field, nums, den)
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Numerators in the basis `1, ζ, ..., ζ^(φ(n)-1)`.
    pub fn numerators(&self) -> &[BigInt] {
        &self.nums
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Coordinate `i` in the basis `1, ζ, ..., ζ^(φ(n)-1)`.
    pub fn coeff(&self, i: usize) -> BigRational {
        BigRational::new(self.nums[i].clone(), self.den.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.nums[0].is_one() && self.nums[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.nums[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coeff(0))
    }

    fn check(&self, other: &CycNumber) {
        assert_eq!(
            self.field.n, other.field.n,
            "mixing Q(ζ_{}) and Q(ζ_{})",
            self.field.n, other.field.n
        );
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let nums = self.nums.iter().map(|c| c * r.numer()).collect();
        Self::normalized(&self.field, nums, &self.den * r.denom())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let a = UniPoly::new((0..self.nums.len()).map(|i| self.coeff(i)).collect());
        let (g, s, _) = a.ext_gcd(self.field.modulus());
        debug_assert!(g.is_constant());
        Some(Self::from_rationals(&self.field, s.coeffs()))
    }

    /// Multiplicative order when this is a root of unity in `Q(ζ_n)`, searched up to `2n`.
    pub fn root_of_unity_order(&self) -> Option<u64> {
        let mut p = self.clone();
        for k in 1..=2 * self.field.n {
            if p.is_one() {
                return Some(k);
            }
            p = &p * self;
        }
        None
    }

    /// `ζ`-polynomial notation, e.g. `zeta^2 - 1/2`.
    pub fn to_plain_string(&self) -> String {
        let terms = (0..self.nums.len())
            .rev()
            .filter(|&k| !self.nums[k].is_zero())
            .map(|k| {
                let mono = match k {
                    0 => String::new(),
                    1 => String::from("zeta"),
                    _ => alloc::format!("zeta^{}", k),
                };
                (self.coeff(k), mono)
            });
        format_terms(terms)
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_plain_string())
    }
}

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        self.check(rhs);
        if self.den == rhs.den {
            self.nums
                .iter_mut()
                .zip(&rhs.nums)
                .for_each(|(a, b)| *a += b);
            if !self.den.is_one() {
                let nums = core::mem::take(&mut self.nums);
                let den = core::mem::take(&mut self.den);
                *self = Self::normalized(&self.field, nums, den);
            }
        } else {
            let nums = self
                .nums
                .iter()
                .zip(&rhs.nums)
                .map(|(a, b)| a * &rhs.den + b * &self.den)
                .collect();
            *self = Self::normalized(&self.field, nums, &self.den * &rhs.den);
        }
    }
}

impl Add for &CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        let mut out = self.clone();
        out += &-rhs;
        out
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            field: self.field.clone(),
            nums: self.nums.iter().map(|a| -a).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.check(rhs);
        let d = self.nums.len();
        let nums = if d == 1 {
            vec![&self.nums[0] * &rhs.nums[0]]
        } else {
            let mut out = vec![BigInt::zero(); 2 * d - 1];
            for (i, a) in self.nums.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in rhs.nums.iter().enumerate() {
                    if !b.is_zero() {
                        out[i + j] += a * b;
                    }
                }
            }
            self.field.reduce(out)
        };
        if self.den.is_one() && rhs.den.is_one() {
            return CycNumber {
                field: self.field.clone(),
                nums,
                den: BigInt::one(),
            };
        }
        CycNumber::normalized(&self.field, nums, &self.den * &rhs.den)
    }
}
