use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// A finitely generated abelian group `Z^free_rank ⊕ Z/t1 ⊕ ... ⊕ Z/tk` in
/// invariant-factor form: every `ti >= 2` and `ti | t(i+1)`.
///
/// The representation is canonical, so `==` decides isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn cyclic(order: impl Into<BigInt>) -> Self {
        Self::from_invariants([order.into()])
    }

    /// `Z^rank ⊕ (Z/d)^copies`.
    pub fn free_plus_power(rank: usize, d: impl Into<BigInt>, copies: usize) -> Self {
        let d = d.into();
        let mut g = Self::from_invariants((0..copies).map(|_| d.clone()));
        g.free_rank += rank;
        g
    }

    /// Direct sum of cyclic groups `Z/c` for the given orders. `0` contributes a
    /// free summand, `±1` nothing; negative orders are read by absolute value.
    /// Coprime parts merge, so `[2, 3]` becomes `Z/6`.
    pub fn from_invariants<I: IntoIterator<Item = BigInt>>(orders: I) -> Self {
        let mut free_rank = 0;
        let mut finite = Vec::new();
        for c in orders {
            let c = c.abs();
            if c.is_zero() {
                free_rank += 1;
            } else if !c.is_one() {
                finite.push(c);
            }
        }
        // pairwise (gcd, lcm) sweep leaves a divisibility chain
        for i in 0..finite.len() {
            for j in i + 1..finite.len() {
                let g = finite[i].gcd(&finite[j]);
                let l = finite[i].lcm(&finite[j]);
                finite[i] = g;
                finite[j] = l;
            }
        }
        finite.retain(|c| !c.is_one());
        FgAbelianGroup {
            free_rank,
            torsion: finite,
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Order, or `None` for an infinite group.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn direct_sum(&self, other: &FgAbelianGroup) -> FgAbelianGroup {
        let mut g = Self::from_invariants(self.torsion.iter().chain(&other.torsion).cloned());
        g.free_rank = self.free_rank + other.free_rank;
        g
    }

    /// `G ⊗ Z/n`.
    pub fn tensor_mod(&self, n: &BigInt) -> FgAbelianGroup {
        let n = n.abs();
        Self::from_invariants(
            core::iter::repeat_n(n.clone(), self.free_rank)
                .chain(self.torsion.iter().map(|d| d.gcd(&n))),
        )
    }

    /// `Tor_1(G, Z/n)`: one `Z/gcd(d, n)` per torsion factor `d`.
    pub fn tor1_mod(&self, n: &BigInt) -> FgAbelianGroup {
        let n = n.abs();
        Self::from_invariants(self.torsion.iter().map(|d| d.gcd(&n)))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        if self.free_rank > 0 {
            first = false;
            if self.free_rank == 1 {
                write!(f, "Z")?;
            } else {
                write!(f, "Z^{}", self.free_rank)?;
            }
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if run == 1 {
                write!(f, "Z/{}", d)?;
            } else {
                write!(f, "(Z/{})^{}", d, run)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Generators and relators: the group `Z^generator_count / span(relations)`,
/// relators stored as columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generator_count: usize,
    relations: IntMatrix,
}

impl Presentation {
    pub fn new(generator_count: usize, relations: IntMatrix) -> crate::Result<Self> {
        if relations.rows() != generator_count {
            return Err(crate::Error::Shape(alloc::format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                generator_count
            )));
        }
        Ok(Presentation {
            generator_count,
            relations,
        })
    }

    /// Free abelian group on `n` generators.
    pub fn free(n: usize) -> Self {
        Presentation {
            generator_count: n,
            relations: IntMatrix::zeros(n, 0),
        }
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn to_group(&self) -> FgAbelianGroup {
        super::cokernel(&self.relations)
    }
}
