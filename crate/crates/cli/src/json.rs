//! JSON encodings of matrices, groups, modules, presentations and polynomials.
//!
//! Integers are written as decimal strings; on input plain JSON numbers are
//! accepted as well. Rationals are written `"p/q"` in lowest terms, or `"p"`.

use std::sync::Arc;

use cyclounits_core::cohomology::CyclicGModule;
use cyclounits_core::divisor::NagataPresentation;
use cyclounits_core::lattice::{FgAbelianGroup, IntMatrix, LatticeIndex, Presentation};
use cyclounits_core::ring::{CoverElement, CycNumber, CyclotomicField, Monomial, MultiPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use serde_json::{json, Value};

/// An input document that parsed as JSON but does not describe a valid object.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct SchemaError(pub String);

pub fn schema(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum IntDoc {
    Num(i64),
    Str(String),
}

impl IntDoc {
    pub fn to_bigint(&self) -> Result<BigInt, SchemaError> {
        match self {
            IntDoc::Num(v) => Ok(BigInt::from(*v)),
            IntDoc::Str(s) => s
                .trim()
                .parse()
                .map_err(|_| schema(format!("not an integer: {:?}", s))),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<IntDoc>>,
}

impl MatrixDoc {
    pub fn build(&self) -> Result<IntMatrix, SchemaError> {
        if self.entries.len() != self.rows {
            return Err(schema(format!(
                "matrix declares {} rows but lists {}",
                self.rows,
                self.entries.len()
            )));
        }
        let mut flat = Vec::with_capacity(self.rows * self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != self.cols {
                return Err(schema(format!(
                    "matrix row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    self.cols
                )));
            }
            for x in row {
                flat.push(x.to_bigint()?);
            }
        }
        IntMatrix::new(self.rows, self.cols, flat).map_err(|e| schema(e.to_string()))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub generators: usize,
    /// Relations as columns; omitted means free.
    #[serde(default)]
    pub relations: Option<MatrixDoc>,
}

impl PresentationDoc {
    pub fn build(&self) -> Result<Presentation, SchemaError> {
        let rel = match &self.relations {
            Some(m) => m.build()?,
            None => IntMatrix::zeros(self.generators, 0),
        };
        Presentation::new(self.generators, rel).map_err(|e| schema(e.to_string()))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDoc {
    pub n: u64,
    pub generators: usize,
    #[serde(default)]
    pub relations: Option<MatrixDoc>,
    pub action: MatrixDoc,
}

impl ModuleDoc {
    pub fn build(&self) -> Result<CyclicGModule, SchemaError> {
        let pres = PresentationDoc {
            generators: self.generators,
            relations: self.relations.clone(),
        }
        .build()?;
        CyclicGModule::new(self.n, pres, self.action.build()?).map_err(|e| schema(e.to_string()))
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NagataDoc {
    pub r: usize,
    pub target: PresentationDoc,
    pub chi: MatrixDoc,
    #[serde(default)]
    pub justification: Option<String>,
}

impl NagataDoc {
    pub fn build(&self) -> Result<NagataPresentation, SchemaError> {
        let chi = self.chi.build()?;
        if chi.cols() != self.r {
            return Err(schema(format!(
                "chi has {} columns but r = {}",
                chi.cols(),
                self.r
            )));
        }
        let p = NagataPresentation::new(self.target.build()?, chi)
            .map_err(|e| schema(e.to_string()))?;
        Ok(match &self.justification {
            Some(j) => p.with_justification(j.clone()),
            None => p,
        })
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffDoc {
    pub den: IntDoc,
    pub nums: Vec<IntDoc>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub exponents: Vec<u32>,
    pub coeff: CoeffDoc,
}

/// A polynomial given as text or as an explicit term list.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum PolyDoc {
    Text(String),
    Terms {
        variables: Vec<String>,
        terms: Vec<TermDoc>,
    },
}

impl PolyDoc {
    /// Builds the polynomial over `field` in the variable list `names`,
    /// which must contain every variable this document mentions.
    pub fn build_terms(
        variables: &[String],
        terms: &[TermDoc],
        field: &Arc<CyclotomicField>,
        names: &[String],
    ) -> Result<MultiPoly, SchemaError> {
        let mut p = MultiPoly::zero(field, names.len());
        for t in terms {
            if t.exponents.len() != variables.len() {
                return Err(schema(format!(
                    "term has {} exponents for {} variables",
                    t.exponents.len(),
                    variables.len()
                )));
            }
            let mut e = vec![0u32; names.len()];
            for (v, &k) in variables.iter().zip(&t.exponents) {
                let i = names
                    .iter()
                    .position(|x| x == v)
                    .ok_or_else(|| schema(format!("unknown variable {}", v)))?;
                e[i] += k;
            }
            let den = t.coeff.den.to_bigint()?;
            if den == BigInt::from(0) {
                return Err(schema("zero denominator"));
            }
            if t.coeff.nums.len() > field.degree() {
                return Err(schema(format!(
                    "coefficient has more than {} numerators",
                    field.degree()
                )));
            }
            let nums = t
                .coeff
                .nums
                .iter()
                .map(IntDoc::to_bigint)
                .collect::<Result<Vec<_>, _>>()?;
            let c = CycNumber::from_parts(field, nums, den);
            p = &p + &MultiPoly::monomial(Monomial::new(e), c);
        }
        Ok(p)
    }
}

pub fn int(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn rational(r: &BigRational) -> Value {
    Value::String(r.to_string())
}

pub fn matrix(m: &IntMatrix) -> Value {
    let entries: Vec<Value> = (0..m.rows()).map(|i| ints(m.row(i))).collect();
    json!({"rows": m.rows(), "cols": m.cols(), "entries": entries})
}

pub fn group(g: &FgAbelianGroup) -> Value {
    json!({"rank": g.free_rank(), "torsion": ints(g.torsion())})
}

pub fn index(i: &LatticeIndex) -> Value {
    Value::String(i.to_string())
}

pub fn cyc(c: &CycNumber) -> Value {
    json!({"den": int(c.denominator()), "nums": ints(c.numerators())})
}

fn terms(p: &MultiPoly) -> Value {
    Value::Array(
        p.terms()
            .rev()
            .map(|(m, c)| json!({"exponents": m.exponents(), "coeff": cyc(c)}))
            .collect(),
    )
}

pub fn poly(p: &MultiPoly, names: &[String]) -> Value {
    json!({"text": p.to_string_with(names), "variables": names, "terms": terms(p)})
}

pub fn element(u: &CoverElement, names: &[String]) -> Value {
    let comps: Vec<Value> = u.components().iter().map(terms).collect();
    json!({"text": u.to_string_with(names), "variables": names, "components": comps})
}
