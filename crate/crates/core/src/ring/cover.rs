use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::cyclotomic::{CycNumber, CyclotomicField};
use super::poly::MultiPoly;
use crate::error::{Error, Result};

/// Largest cover degree at which [`CoverElement::norm`] also evaluates the
/// determinant (subset expansion costs `2^n` products) as a cross-check.
pub const NORM_CROSS_CHECK_MAX: u64 = 10;

/// `T = A[z] / (z^n - f)` over `A = Q(ζ_n)[x_1..x_m]`, with `σ(z) = ζz`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverRing {
    n: u64,
    f: MultiPoly,
    factors: Vec<MultiPoly>,
}

impl CoverRing {
    /// `factors` is the declared factorization of `f` (each to the first
    /// power); an empty list declares `f` itself irreducible.
    ///
    /// Checked: the product is exactly `f`; a univariate `f` is squarefree;
    /// factors are nonconstant and pairwise non-associate. Irreducibility of
    /// the factors is taken on trust.
    pub fn new(n: u64, f: MultiPoly, factors: Vec<MultiPoly>) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::Precondition(format!(
                "cover degree must be at least 2, got {}",
                n
            )));
        }
        if f.field().conductor() != n {
            return Err(Error::RingMismatch(format!(
                "f has coefficients in Q(ζ_{}) but the cover has degree {}",
                f.field().conductor(),
                n
            )));
        }
        if f.as_constant().is_some() {
            return Err(Error::Precondition("f must be nonconstant".into()));
        }
        let factors = if factors.is_empty() {
            vec![f.clone()]
        } else {
            factors
        };
        let mut product = MultiPoly::one(f.field(), f.nvars());
        for (i, g) in factors.iter().enumerate() {
            if g.nvars() != f.nvars() || g.field().conductor() != n {
                return Err(Error::RingMismatch(format!(
                    "factor {} lives in a different polynomial ring",
                    i
                )));
            }
            if g.as_constant().is_some() {
                return Err(Error::Precondition(format!("factor {} is constant", i)));
            }
            product = &product * g;
        }
        if product != f {
            return Err(Error::Precondition(
                "declared factors do not multiply to f".into(),
            ));
        }
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                if factors[i]
                    .exact_div(&factors[j])
                    .is_some_and(|q| q.as_constant().is_some())
                {
                    return Err(Error::Precondition(format!(
                        "factors {} and {} are associates",
                        i, j
                    )));
                }
            }
        }
        if f.is_squarefree_univariate() == Some(false) {
            return Err(Error::Precondition("f has a repeated factor".into()));
        }
        Ok(Arc::new(CoverRing { n, f, factors }))
    }

    pub fn degree(&self) -> u64 {
        self.n
    }

    pub fn nvars(&self) -> usize {
        self.f.nvars()
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn factors(&self) -> &[MultiPoly] {
        &self.factors
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        self.f.field()
    }

    fn base_zero(&self) -> MultiPoly {
        MultiPoly::zero(self.field(), self.nvars())
    }
}

/// `u_0 + u_1 z + ... + u_(n-1) z^(n-1)` in a [`CoverRing`].
#[derive(Clone, Debug)]
pub struct CoverElement {
    ring: Arc<CoverRing>,
    comps: Vec<MultiPoly>,
}

impl PartialEq for CoverElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring)
            && self.comps == other.comps
    }
}

impl Eq for CoverElement {}

impl CoverElement {
    pub fn new(ring: &Arc<CoverRing>, comps: Vec<MultiPoly>) -> Result<Self> {
        if comps.len() as u64 != ring.n {
            return Err(Error::RingMismatch(format!(
                "{} components for a degree-{} cover",
                comps.len(),
                ring.n
            )));
        }
        if comps
            .iter()
            .any(|c| c.nvars() != ring.nvars() || c.field().conductor() != ring.n)
        {
            return Err(Error::RingMismatch(
                "component outside the base ring".into(),
            ));
        }
        Ok(CoverElement {
            ring: ring.clone(),
            comps,
        })
    }

    pub fn zero(ring: &Arc<CoverRing>) -> Self {
        CoverElement {
            ring: ring.clone(),
            comps: vec![ring.base_zero(); ring.n as usize],
        }
    }

    /// An element of the base ring `A`.
    pub fn from_base(ring: &Arc<CoverRing>, a: MultiPoly) -> Result<Self> {
        let mut comps = vec![ring.base_zero(); ring.n as usize];
        comps[0] = a;
        Self::new(ring, comps)
    }

    pub fn one(ring: &Arc<CoverRing>) -> Self {
        Self::from_base(ring, MultiPoly::one(ring.field(), ring.nvars()))
            .expect("unit lives in the base")
    }

    pub fn z(ring: &Arc<CoverRing>) -> Self {
        let mut u = Self::zero(ring);
        u.comps[1] = MultiPoly::one(ring.field(), ring.nvars());
        u
    }

    pub fn ring(&self) -> &Arc<CoverRing> {
        &self.ring
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(MultiPoly::is_zero)
    }

    /// The base-ring value when all `z`-components vanish.
    pub fn as_base(&self) -> Option<&MultiPoly> {
        self.comps[1..]
            .iter()
            .all(MultiPoly::is_zero)
            .then(|| &self.comps[0])
    }

    fn same_ring(&self, other: &CoverElement) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(
                "elements of different cover rings".into(),
            ))
        }
    }

    pub fn add(&self, other: &CoverElement) -> Result<Self> {
        self.same_ring(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CoverElement {
            ring: self.ring.clone(),
            comps,
        })
    }

    pub fn sub(&self, other: &CoverElement) -> Result<Self> {
        self.same_ring(other)?;
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CoverElement {
            ring: self.ring.clone(),
            comps,
        })
    }

    pub fn neg(&self) -> Self {
        CoverElement {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|a| -a).collect(),
        }
    }

    /// Multiplies every component by a scalar.
    pub fn scale(&self, c: &CycNumber) -> Self {
        CoverElement {
            ring: self.ring.clone(),
            comps: self.comps.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Product, reducing `z^n → f`.
    pub fn mul(&self, other: &CoverElement) -> Result<Self> {
        self.same_ring(other)?;
        let n = self.comps.len();
        let mut out = vec![self.ring.base_zero(); n];
        for (i, a) in self.comps.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.comps.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                let k = i + j;
                if k < n {
                    out[k] = &out[k] + &p;
                } else {
                    out[k - n] = &out[k - n] + &(&p * &self.ring.f);
                }
            }
        }
        Ok(CoverElement {
            ring: self.ring.clone(),
            comps: out,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// `σ^k`: component `u_i` is multiplied by `ζ^(ik)`.
    pub fn sigma_pow(&self, k: u64) -> Self {
        let field = self.ring.field();
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(i, a)| {
                a.scale(&CycNumber::zeta_pow(
                    field,
                    ((i as u64 * k) % self.ring.n) as i64,
                ))
            })
            .collect();
        CoverElement {
            ring: self.ring.clone(),
            comps,
        }
    }

    pub fn sigma(&self) -> Self {
        self.sigma_pow(1)
    }

    /// `σ(u)·σ²(u)⋯σ^(n-1)(u)`, so that `u` times it is the norm.
    pub fn conjugate_cofactor(&self) -> Self {
        (1..self.ring.n).fold(Self::one(&self.ring), |acc, i| {
            acc.mul(&self.sigma_pow(i)).expect("same ring")
        })
    }

    /// `N(u) = u·σ(u)⋯σ^(n-1)(u)` in `A`.
    ///
    /// The conjugate product must land in `A`; for `n <= NORM_CROSS_CHECK_MAX`
    /// it is also compared against the determinant route. Either failure is
    /// an arithmetic bug and reported as [`Error::Internal`].
    pub fn norm(&self) -> Result<MultiPoly> {
        let product = self.mul(&self.conjugate_cofactor())?;
        let norm = product
            .as_base()
            .cloned()
            .ok_or_else(|| Error::Internal("conjugate product has a nonzero z-component".into()))?;
        if self.ring.n <= NORM_CROSS_CHECK_MAX && norm != self.norm_det() {
            return Err(Error::Internal(
                "conjugate-product and determinant norms disagree".into(),
            ));
        }
        Ok(norm)
    }

    /// Multiplication-by-`u` matrix on `1, z, ..., z^(n-1)`; column `j` is `u·z^j`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<MultiPoly>> {
        let n = self.comps.len();
        (0..n)
            .map(|k| {
                (0..n)
                    .map(|j| {
                        if k >= j {
                            self.comps[k - j].clone()
                        } else {
                            &self.comps[k + n - j] * &self.ring.f
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `det` of [`Self::multiplication_matrix`], expanded over row subsets
    /// without division.
    pub fn norm_det(&self) -> MultiPoly {
        let m = self.multiplication_matrix();
        let n = m.len();
        let zero = self.ring.base_zero();
        // partial[S] = signed sum over injections of columns 0..|S| onto rows S
        let mut partial = vec![zero.clone(); 1 << n];
        partial[0] = MultiPoly::one(self.ring.field(), self.ring.nvars());
        for set in 0usize..(1 << n) {
            if partial[set].is_zero() {
                continue;
            }
            let col = set.count_ones() as usize;
            if col == n {
                continue;
            }
            for (row, m_row) in m.iter().enumerate() {
                if set & (1 << row) != 0 || m_row[col].is_zero() {
                    continue;
                }
                let term = &partial[set] * &m_row[col];
                let above = (set >> (row + 1)).count_ones();
                let next = set | (1 << row);
                partial[next] = if above % 2 == 0 {
                    &partial[next] + &term
                } else {
                    &partial[next] - &term
                };
            }
        }
        partial.pop().unwrap_or(zero)
    }

    /// A unit of `T` is exactly an element with nonzero constant norm: `u`
    /// divides its norm, and a unit's norm is a unit of `A`.
    pub fn is_unit(&self) -> bool {
        self.norm().is_ok_and(|n| n.is_nonzero_constant())
    }

    /// `(∏_{i≥1} σ^i(u)) / N(u)`, verified by multiplication.
    pub fn inverse(&self) -> Result<Option<Self>> {
        let norm = self.norm()?;
        let Some(c) = norm.as_constant().filter(|c| !c.is_zero()) else {
            return Ok(None);
        };
        let inv = self.conjugate_cofactor().scale(&c.inv().expect("nonzero"));
        if self.mul(&inv)? != Self::one(&self.ring) {
            return Err(Error::Internal(
                "constructed inverse does not multiply to 1".into(),
            ));
        }
        Ok(Some(inv))
    }

    /// Writes `N(u) = c·∏ f_i^(a_i)` over the declared factors, if possible.
    pub fn localization_certificate(&self) -> Result<Option<LocalizationCertificate>> {
        let mut rest = self.norm()?;
        if rest.is_zero() {
            return Ok(None);
        }
        let mut exponents = vec![0u32; self.ring.factors.len()];
        for (g, a) in self.ring.factors.iter().zip(exponents.iter_mut()) {
            while rest.as_constant().is_none() {
                match rest.exact_div(g) {
                    Some(q) => {
                        rest = q;
                        *a += 1;
                    }
                    None => break,
                }
            }
        }
        Ok(rest.as_constant().map(|constant| LocalizationCertificate {
            constant,
            exponents,
        }))
    }

    /// Unit of `S = T[1/z] = T[1/f]`: the norm is a constant times a
    /// monomial in the declared factors of `f`.
    pub fn is_unit_in_localization(&self) -> bool {
        self.localization_certificate().is_ok_and(|c| c.is_some())
    }
}

/// `N(u) = constant · ∏ factors[i]^exponents[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizationCertificate {
    pub constant: CycNumber,
    pub exponents: Vec<u32>,
}

impl fmt::Display for CoverElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&MultiPoly::default_names(self.ring.nvars())))
    }
}

impl CoverElement {
    /// Formats as a polynomial in `z` with the given base variable names.
    pub fn to_string_with(&self, names: &[alloc::string::String]) -> alloc::string::String {
        let mut parts = Vec::new();
        for (i, c) in self.comps.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let zpow = match i {
                0 => None,
                1 => Some(alloc::string::String::from("z")),
                _ => Some(format!("z^{}", i)),
            };
            let body = c.to_string_with(names);
            parts.push(match zpow {
                None => body,
                Some(z) if body == "1" => z,
                Some(z) if c.term_count() == 1 && body.chars().all(|ch| ch != ' ') => {
                    if body == "-1" {
                        format!("-{}", z)
                    } else {
                        format!("{}*{}", body, z)
                    }
                }
                Some(z) => format!("({})*{}", body, z),
            });
        }
        if parts.is_empty() {
            return alloc::string::String::from("0");
        }
        let mut out = alloc::string::String::new();
        for p in parts {
            if out.is_empty() {
                out.push_str(&p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    struct Setup {
        ring: Arc<CoverRing>,
        x: MultiPoly,
        y: MultiPoly,
        one: MultiPoly,
    }

    /// `n = 2`, `f = (xy - 1)(xy + 1)`.
    fn hyperbola_pair() -> Setup {
        let k = CyclotomicField::new(2);
        let x = MultiPoly::var(&k, 2, 0);
        let y = MultiPoly::var(&k, 2, 1);
        let one = MultiPoly::one(&k, 2);
        let xy = &x * &y;
        let a = &xy - &one;
        let b = &xy + &one;
        let ring = CoverRing::new(2, &a * &b, vec![a, b]).unwrap();
        Setup { ring, x, y, one }
    }

    fn elem(ring: &Arc<CoverRing>, comps: Vec<MultiPoly>) -> CoverElement {
        CoverElement::new(ring, comps).unwrap()
    }

    #[test]
    fn defining_relation() {
        let s = hyperbola_pair();
        let z = CoverElement::z(&s.ring);
        assert_eq!(z.mul(&z).unwrap().as_base(), Some(s.ring.f()));
        assert_eq!(z.mul(&CoverElement::one(&s.ring)).unwrap(), z);
        assert_eq!(z.sigma(), z.neg());
    }

    #[test]
    fn unit_classification() {
        let s = hyperbola_pair();
        let xy = &s.x * &s.y;
        let r = &s.ring;
        let shifted = |c: i64| {
            elem(
                r,
                vec![
                    &(-&xy) + &MultiPoly::integer(r.field(), 2, c),
                    s.one.clone(),
                ],
            )
        };
        let u = shifted(0);
        assert!(u.norm().unwrap().is_nonzero_constant());
        assert!(u.is_unit());
        let inv = u.inverse().unwrap().unwrap();
        assert_eq!(u.mul(&inv).unwrap(), CoverElement::one(r));

        for c in [1, -1] {
            let v = shifted(c);
            assert!(!v.is_unit());
            assert!(v.is_unit_in_localization());
            assert!(v.inverse().unwrap().is_none());
        }
        let norm = shifted(1).norm().unwrap();
        let expected = (&xy - &s.one).scale(&CycNumber::integer(r.field(), -2));
        assert_eq!(norm, expected);
        let w = shifted(2);
        assert!(!w.is_unit() && !w.is_unit_in_localization());
    }

    #[test]
    fn norm_of_z_and_constants() {
        for n in [2u64, 3, 4, 6] {
            let k = CyclotomicField::new(n);
            let x = MultiPoly::var(&k, 1, 0);
            let f = &x.pow(3) + &MultiPoly::integer(&k, 1, 2);
            let ring = CoverRing::new(n, f.clone(), vec![]).unwrap();
            let z = CoverElement::z(&ring);
            let sign = CycNumber::zeta_pow(&k, (n * (n - 1) / 2) as i64);
            assert_eq!(z.norm().unwrap(), f.scale(&sign));
            let a = CoverElement::from_base(&ring, MultiPoly::integer(&k, 1, 3)).unwrap();
            assert_eq!(
                a.norm().unwrap(),
                MultiPoly::integer(&k, 1, 3i64.pow(n as u32))
            );
            assert_eq!(z.sigma_pow(n), z);
        }
    }

    #[test]
    fn pell_unit_in_the_cover() {
        let k = CyclotomicField::new(2);
        let x = MultiPoly::var(&k, 1, 0);
        let f = &x.pow(4) + &x;
        let ring = CoverRing::new(2, f, vec![]).unwrap();
        let half = MultiPoly::constant(
            1,
            CycNumber::rational(&k, BigRational::new(BigInt::from(1), BigInt::from(2))),
        );
        let u = elem(&ring, vec![&x.pow(3) + &half, x.clone()]);
        assert!(u.is_unit());
        let quarter = CycNumber::rational(&k, BigRational::new(BigInt::from(1), BigInt::from(4)));
        // N(a + bz) = a^2 - f b^2 for n = 2
        assert_eq!(u.norm().unwrap().as_constant(), Some(quarter));
        assert!(!CoverElement::z(&ring).is_unit());
    }

    #[test]
    fn ring_validation() {
        let k = CyclotomicField::new(2);
        let x = MultiPoly::var(&k, 1, 0);
        let one = MultiPoly::one(&k, 1);
        assert!(CoverRing::new(2, one.clone(), vec![]).is_err());
        assert!(CoverRing::new(2, (&x + &one).pow(2), vec![]).is_err());
        assert!(CoverRing::new(3, x.clone(), vec![]).is_err());
        let xx = &x * &x;
        assert!(CoverRing::new(2, xx.clone(), vec![x.clone(), x.clone()]).is_err());
        assert!(CoverRing::new(2, &x + &one, vec![x.clone()]).is_err());
    }

    #[test]
    fn mismatched_rings() {
        let a = hyperbola_pair();
        let b = hyperbola_pair();
        // equal rings built separately still interoperate
        assert!(CoverElement::z(&a.ring)
            .mul(&CoverElement::z(&b.ring))
            .is_ok());
        let k = CyclotomicField::new(3);
        let x = MultiPoly::var(&k, 2, 0);
        let other = CoverRing::new(3, x, vec![]).unwrap();
        assert!(matches!(
            CoverElement::z(&a.ring).mul(&CoverElement::z(&other)),
            Err(Error::RingMismatch(_))
        ));
        assert!(CoverElement::new(&a.ring, vec![a.one.clone()]).is_err());
    }

    #[test]
    fn display() {
        let s = hyperbola_pair();
        let xy = &s.x * &s.y;
        let u = elem(&s.ring, vec![-&xy, s.one.clone()]);
        assert_eq!(u.to_string(), "z - x*y");
        let v = elem(&s.ring, vec![s.one.clone(), &s.x + &s.one]);
        assert_eq!(v.to_string(), "(x + 1)*z + 1");
    }
}
