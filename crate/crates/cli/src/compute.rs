//! Kind-specific parameter schemas and the computations behind them.

use std::sync::Arc;

use cyclounits_core::covers::{
    analyze_form_product, analyze_hyperplanes, fermat_presentation, form_product_matrix, genus_rh,
    hyperplane_complement_table, irreducible_branch_table, trivial_action_table, CohomologyTable,
    FormProductScenario, TableEntry,
};
use cyclounits_core::divisor::{
    candidate_index, classify_prime_cover, CandidateUnits, PrimeCoverUnits,
};
use cyclounits_core::lattice::{
    cokernel, minors_gcd_factors, snf, FgAbelianGroup, IntMatrix, MINORS_GUARD,
};
use cyclounits_core::ring::{
    pell_solve_poly, unit_search, CoverElement, CoverRing, CyclotomicField, MultiPoly, PellOutcome,
    SearchMethod, SearchOptions, DEFAULT_CANDIDATE_LIMIT, DEFAULT_DEGREE_BOUND,
    DEFAULT_SUPPORT_BOUND,
};
use cyclounits_core::Error;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::expr::{self, natural_cmp, Expr};
use crate::json::{self, schema, IntDoc, MatrixDoc, ModuleDoc, NagataDoc, PolyDoc, SchemaError};

/// Default continued-fraction step bound for `pell`.
pub const DEFAULT_PELL_BOUND: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Snf,
    Cohomology,
    Nagata,
    FormProduct,
    Hyperplane,
    Fermat,
    Pell,
    Norm,
    UnitSearch,
    Table,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("computation error ({tag}): {message}")]
    Compute { tag: &'static str, message: String },
}

impl From<SchemaError> for RunError {
    fn from(e: SchemaError) -> Self {
        RunError::Schema(e.0)
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Compute {
            tag: error_tag(&e),
            message: e.to_string(),
        }
    }
}

/// Stable name of a core error, usable in `expect: {"error": ...}`.
pub fn error_tag(e: &Error) -> &'static str {
    match e {
        Error::Shape(_) => "shape",
        Error::DimensionGuard { .. } => "dimension_guard",
        Error::NotContained { .. } => "not_contained",
        Error::InvalidModule(_) => "invalid_module",
        Error::InfiniteModule => "infinite_module",
        Error::NotUnitDivisor { .. } => "not_unit_divisor",
        Error::Dichotomy(_) => "dichotomy",
        Error::Precondition(_) => "precondition",
        Error::RingMismatch(_) => "ring_mismatch",
        Error::SearchGuard { .. } => "search_guard",
        Error::Cancelled => "cancelled",
        Error::Internal(_) => "internal",
    }
}

fn params<T: DeserializeOwned>(v: &Value) -> Result<T, RunError> {
    serde_json::from_value(v.clone()).map_err(|e| RunError::Schema(format!("params: {}", e)))
}

pub fn compute(kind: Kind, p: &Value) -> Result<Value, RunError> {
    match kind {
        Kind::Snf => run_snf(params(p)?),
        Kind::Cohomology => run_cohomology(params(p)?),
        Kind::Nagata => run_nagata(params(p)?),
        Kind::FormProduct => run_form_product(params(p)?),
        Kind::Hyperplane => run_hyperplane(params(p)?),
        Kind::Fermat => run_fermat(params(p)?),
        Kind::Pell => run_pell(params(p)?),
        Kind::Norm => run_norm(params(p)?),
        Kind::UnitSearch => run_unit_search(params(p)?),
        Kind::Table => run_table(params(p)?),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SnfParams {
    pub matrix: MatrixDoc,
    /// Also report `U`, `V` and `S`.
    #[serde(default)]
    pub transforms: bool,
}

fn run_snf(p: SnfParams) -> Result<Value, RunError> {
    let a = p.matrix.build()?;
    let d = snf(&a);
    let oracle = if a.rows().max(a.cols()) <= MINORS_GUARD {
        if minors_gcd_factors(&a)? == d.factors {
            "agrees"
        } else {
            "disagrees"
        }
    } else {
        "skipped"
    };
    let cokernel = cokernel(&a);
    let mut out = json!({
        "factors": json::ints(&d.factors),
        "rank": d.rank(),
        "cokernel": json::group(&cokernel),
        "verified": d.verify(&a),
        "minors_oracle": oracle,
    });
    if p.transforms {
        out["u"] = json::matrix(&d.u);
        out["v"] = json::matrix(&d.v);
        out["s"] = json::matrix(&d.s);
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CohomologyParams {
    pub module: ModuleDoc,
    #[serde(default)]
    pub degrees: Option<Vec<u32>>,
}

fn table_entry(e: &TableEntry) -> Value {
    match e {
        TableEntry::Group(g) => json::group(g),
        TableEntry::ScalarsTimes(g) => json!({"scalars_times": json::group(g)}),
    }
}

fn table(t: &CohomologyTable) -> Value {
    json!({"h0": table_entry(&t.h0), "odd": table_entry(&t.odd), "even": table_entry(&t.even)})
}

fn run_cohomology(p: CohomologyParams) -> Result<Value, RunError> {
    let m = p.module.build()?;
    let mut by_degree = Map::new();
    for i in p.degrees.unwrap_or_else(|| (0..=4).collect()) {
        by_degree.insert(i.to_string(), json::group(&m.cohomology(i)));
    }
    let herbrand = match m.herbrand_check() {
        Ok(ok) => Value::Bool(ok),
        Err(Error::InfiniteModule) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    Ok(json!({
        "group": json::group(&m.group()),
        "fixed": json::group(&m.fixed_submodule()),
        "table": table(&CohomologyTable::of_module(&m)),
        "degrees": by_degree,
        "herbrand": herbrand,
        "composites_vanish": m.composites_vanish(),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NagataParams {
    pub presentation: NagataDoc,
    /// Candidate unit divisors as columns.
    #[serde(default)]
    pub candidates: Option<MatrixDoc>,
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    /// Classify `H` against the prime-cover dichotomy for this prime.
    #[serde(default)]
    pub prime: Option<u64>,
}

fn dichotomy(c: PrimeCoverUnits) -> Value {
    Value::String(
        match c {
            PrimeCoverUnits::UnitsTrivial => "units_trivial",
            PrimeCoverUnits::RankPMinus1 => "rank_p_minus_1",
        }
        .into(),
    )
}

fn run_nagata(p: NagataParams) -> Result<Value, RunError> {
    let pres = p.presentation.build()?;
    let units = pres.unit_lattice();
    let boundary = pres.boundary_subgroup();
    let mut out = json!({
        "r": pres.boundary_count(),
        "justification": pres.justification(),
        "unit_rank": units.rank,
        "unit_basis": json::matrix(units.basis()),
        "boundary": json::group(&boundary),
        "class_group": json::group(&pres.class_cokernel()),
    });
    if let Some(c) = p.candidates {
        let divisors = c.build()?;
        let cands = match p.labels {
            Some(l) => CandidateUnits::new(divisors, l).map_err(|e| schema(e.to_string()))?,
            None => CandidateUnits::numbered(divisors),
        };
        out["candidate_index"] = json::index(&candidate_index(&cands, &pres)?);
    } else if p.labels.is_some() {
        return Err(RunError::Schema("labels given without candidates".into()));
    }
    if let Some(prime) = p.prime {
        out["dichotomy"] = dichotomy(classify_prime_cover(prime, &boundary)?);
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormProductParams {
    pub degrees: Vec<u64>,
    #[serde(default = "default_ambient")]
    pub ambient_dim: usize,
}

fn default_ambient() -> usize {
    3
}

fn run_form_product(p: FormProductParams) -> Result<Value, RunError> {
    let s =
        FormProductScenario::new(p.degrees, p.ambient_dim).map_err(|e| schema(e.to_string()))?;
    let r = analyze_form_product(&s)?;
    let mut out = json!({
        "degrees": r.degrees,
        "total_degree": r.total_degree,
        "ambient_dim": s.ambient_dim(),
        "matrix": json::matrix(&form_product_matrix(&s)),
        "factors": json::ints(&r.factors),
        "degree_gcd": r.degree_gcd,
        "applicable": r.applicable,
    });
    if let Some(a) = &r.analysis {
        out["asserted_boundary"] = json::group(&a.asserted_boundary);
        out["boundary"] = json::group(&a.boundary);
        out["candidate_cokernel"] = json::group(&a.candidate_cokernel);
        out["snake_index"] = json::index(&a.snake_index);
        out["unit_rank"] = json!(a.unit_rank);
        out["candidate_index"] = json::index(&a.candidate_index);
        out["units_over_base"] = json::group(&a.units_over_base);
        out["basis"] = json!(a.basis_labels);
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperplaneParams {
    pub n: usize,
    /// Extra relations among the boundary lines, as columns.
    #[serde(default)]
    pub extra_relations: Option<MatrixDoc>,
}

fn run_hyperplane(p: HyperplaneParams) -> Result<Value, RunError> {
    let extra = match p.extra_relations {
        Some(m) => m.build()?,
        None => IntMatrix::zeros(p.n, 0),
    };
    let r = analyze_hyperplanes(p.n, &extra)?;
    Ok(json!({
        "n": r.n,
        "matrix": json::matrix(&cyclounits_core::covers::hyperplane_matrix(p.n)?),
        "factors": json::ints(&r.factors),
        "boundary": json::group(&r.boundary),
        "unit_rank": r.unit_rank,
        "candidate_index": json::index(&r.candidate_index),
        "index_bound": json::int(&r.index_bound),
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FermatParams {
    pub n: usize,
}

fn run_fermat(p: FermatParams) -> Result<Value, RunError> {
    let pres = fermat_presentation(p.n)?;
    Ok(json!({
        "n": p.n,
        "boundary_count": pres.boundary_count(),
        "justification": pres.justification(),
        "unit_rank": pres.unit_lattice().rank,
    }))
}

fn parse_text(src: &str, what: &str) -> Result<Expr, RunError> {
    expr::parse(src).map_err(|e| RunError::Schema(format!("{}: {}", what, e)))
}

/// Variables mentioned by a polynomial document.
fn doc_variables(doc: &PolyDoc, what: &str) -> Result<Vec<String>, RunError> {
    Ok(match doc {
        PolyDoc::Text(s) => expr::variables([&parse_text(s, what)?]),
        PolyDoc::Terms { variables, .. } => variables.clone(),
    })
}

fn merge_names(lists: impl IntoIterator<Item = Vec<String>>) -> Vec<String> {
    let mut all: Vec<String> = lists.into_iter().flatten().collect();
    all.sort_by(|a, b| natural_cmp(a, b));
    all.dedup();
    all
}

fn build_poly(
    doc: &PolyDoc,
    what: &str,
    field: &Arc<CyclotomicField>,
    names: &[String],
) -> Result<MultiPoly, RunError> {
    match doc {
        PolyDoc::Text(s) => parse_text(s, what)?
            .to_base(field, names)
            .map_err(|e| RunError::Schema(format!("{}: {}", what, e))),
        PolyDoc::Terms { variables, terms } => {
            Ok(PolyDoc::build_terms(variables, terms, field, names)?)
        }
    }
}

fn field_for(n: u64) -> Result<Arc<CyclotomicField>, RunError> {
    if n < 2 {
        return Err(RunError::Schema(format!(
            "cover degree n must be at least 2, got {}",
            n
        )));
    }
    Ok(CyclotomicField::new(n))
}

struct RingInput<'a> {
    n: u64,
    f: &'a PolyDoc,
    factors: &'a [PolyDoc],
    elements: &'a [Expr],
}

fn build_ring(input: RingInput<'_>) -> Result<(Arc<CoverRing>, Vec<String>), RunError> {
    let field = field_for(input.n)?;
    let mut lists = vec![doc_variables(input.f, "f")?];
    for g in input.factors {
        lists.push(doc_variables(g, "factor")?);
    }
    lists.push(expr::variables(input.elements));
    let names = merge_names(lists);
    let f = build_poly(input.f, "f", &field, &names)?;
    let factors = input
        .factors
        .iter()
        .map(|g| build_poly(g, "factor", &field, &names))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((CoverRing::new(input.n, f, factors)?, names))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PellParams {
    pub f: PolyDoc,
    #[serde(default)]
    pub bound: Option<usize>,
}

fn run_pell(p: PellParams) -> Result<Value, RunError> {
    let field = CyclotomicField::new(2);
    let names = doc_variables(&p.f, "f")?;
    let f = build_poly(&p.f, "f", &field, &names)?;
    let bound = p.bound.unwrap_or(DEFAULT_PELL_BOUND);
    let mut out = json!({"f": json::poly(&f, &names), "bound": bound});
    match pell_solve_poly(&f, bound)? {
        PellOutcome::Found(s) => {
            let var = f.variables()[0];
            let a = MultiPoly::from_unipoly(&field, names.len(), var, &s.a);
            let b = MultiPoly::from_unipoly(&field, names.len(), var, &s.b);
            // the certificate is already checked; this confirms a + b·z is a unit of A[z]/(z² - f)
            let unit = match CoverRing::new(2, f.clone(), vec![]) {
                Ok(ring) => {
                    Value::Bool(CoverElement::new(&ring, vec![a.clone(), b.clone()])?.is_unit())
                }
                Err(_) => Value::Null,
            };
            out["outcome"] = json!("found");
            out["a"] = json::poly(&a, &names);
            out["b"] = json::poly(&b, &names);
            out["c"] = json::rational(&s.c);
            out["steps"] = json!(s.steps);
            out["unit_in_cover"] = unit;
        }
        PellOutcome::BoundReached { .. } => {
            out["outcome"] = json!("bound_reached");
        }
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormParams {
    pub n: u64,
    pub f: PolyDoc,
    pub element: String,
    /// Declared irreducible factors of `f`; defaults to `[f]`.
    #[serde(default)]
    pub factors: Vec<PolyDoc>,
}

fn run_norm(p: NormParams) -> Result<Value, RunError> {
    let u = parse_text(&p.element, "element")?;
    let (ring, names) = build_ring(RingInput {
        n: p.n,
        f: &p.f,
        factors: &p.factors,
        elements: std::slice::from_ref(&u),
    })?;
    let u = u
        .to_element(&ring, &names)
        .map_err(|e| RunError::Schema(format!("element: {}", e)))?;
    let norm = u.norm()?;
    let certificate = match u.localization_certificate()? {
        Some(c) => json!({
            "constant": json::cyc(&c.constant),
            "constant_text": c.constant.to_plain_string(),
            "exponents": c.exponents,
        }),
        None => Value::Null,
    };
    let inverse = match u.inverse()? {
        Some(v) => json::element(&v, &names),
        None => Value::Null,
    };
    Ok(json!({
        "n": p.n,
        "variables": names,
        "f": json::poly(ring.f(), &names),
        "element": json::element(&u, &names),
        "norm": json::poly(&norm, &names),
        "is_unit": u.is_unit(),
        "is_unit_in_localization": u.is_unit_in_localization(),
        "localization_certificate": certificate,
        "inverse": inverse,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitSearchParams {
    pub n: u64,
    pub f: PolyDoc,
    #[serde(default)]
    pub factors: Vec<PolyDoc>,
    #[serde(default)]
    pub degree_bound: Option<usize>,
    #[serde(default)]
    pub support_bound: Option<usize>,
    #[serde(default)]
    pub candidate_limit: Option<u128>,
}

fn run_unit_search(p: UnitSearchParams) -> Result<Value, RunError> {
    let (ring, names) = build_ring(RingInput {
        n: p.n,
        f: &p.f,
        factors: &p.factors,
        elements: &[],
    })?;
    let degree_bound = p.degree_bound.unwrap_or(DEFAULT_DEGREE_BOUND);
    let support_bound = p.support_bound.unwrap_or(DEFAULT_SUPPORT_BOUND);
    let options = SearchOptions {
        candidate_limit: p.candidate_limit.unwrap_or(DEFAULT_CANDIDATE_LIMIT),
        cancel: None,
    };
    let out = unit_search(&ring, degree_bound, support_bound, options)?;
    let (method, scope) = match out.method {
        SearchMethod::ContinuedFraction { steps } => (
            json!({"name": "continued_fraction", "steps": steps}),
            format!("solutions a + b*z with deg b <= {} and rational coefficients", degree_bound),
        ),
        SearchMethod::OddDegree => (
            json!({"name": "odd_degree"}),
            "all units: a^2 - f*b^2 is nonconstant unless b = 0".to_string(),
        ),
        SearchMethod::Enumeration { slots } => (
            json!({"name": "enumeration", "slots": slots}),
            format!(
                "elements with at most {} terms c*m*z^j, deg m <= {}, c in {{1, -1, 2, -2}}, over Q(zeta_{})",
                support_bound,
                degree_bound,
                p.n
            ),
        ),
    };
    let units: Vec<Value> = out.units.iter().map(|u| json::element(u, &names)).collect();
    Ok(json!({
        "n": p.n,
        "f": json::poly(ring.f(), &names),
        "method": method,
        "degree_bound": out.degree_bound,
        "support_bound": out.support_bound,
        "candidates_examined": out.candidates_examined.to_string(),
        "found": out.found_any(),
        "units": units,
        "scope": scope,
    }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<IntDoc>,
}

impl GroupDoc {
    fn build(&self) -> Result<FgAbelianGroup, SchemaError> {
        let t = self
            .torsion
            .iter()
            .map(IntDoc::to_bigint)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FgAbelianGroup::free(self.rank).direct_sum(&FgAbelianGroup::from_invariants(t)))
    }
}

#[derive(Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum TableParams {
    /// Cohomology of `Z^ν` with trivial action of a group of order `n`.
    TrivialAction { n: u64, nu: usize },
    /// Units of the complement of `r` hyperplanes and `H^1(U, μ_ν)`.
    HyperplaneComplement { r: usize, nu: u64 },
    /// Tables for a cover branched along an irreducible `f`.
    IrreducibleBranch { n: u64 },
    /// Genus of `y^p = f(x)` with `deg f = n`.
    Genus { p: u64, n: u64 },
    /// Side of the prime-cover dichotomy for a boundary subgroup.
    PrimeCoverDichotomy { p: u64, boundary: GroupDoc },
}

fn run_table(p: TableParams) -> Result<Value, RunError> {
    Ok(match p {
        TableParams::TrivialAction { n, nu } => {
            json!({"n": n, "nu": nu, "table": table(&trivial_action_table(n, nu)?)})
        }
        TableParams::HyperplaneComplement { r, nu } => {
            let t = hyperplane_complement_table(r, nu)?;
            json!({"r": t.r, "nu": t.nu, "unit_rank": t.unit_rank, "h1_mu": json::group(&t.h1_mu)})
        }
        TableParams::IrreducibleBranch { n } => {
            let t = irreducible_branch_table(n)?;
            json!({
                "n": t.n,
                "cover_units": table(&t.cover_units),
                "localized_units": table(&t.localized_units),
                "quotient": table(&t.quotient),
            })
        }
        TableParams::Genus { p, n } => json!({"p": p, "n": n, "genus": genus_rh(p, n)?}),
        TableParams::PrimeCoverDichotomy { p, boundary } => {
            let h = boundary.build()?;
            json!({"p": p, "boundary": json::group(&h), "dichotomy": dichotomy(classify_prime_cover(p, &h)?)})
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kinds_use_snake_case_names() {
        assert_eq!(
            serde_json::to_value(Kind::UnitSearch).unwrap(),
            json!("unit_search")
        );
        assert_eq!(
            serde_json::from_value::<Kind>(json!("form_product")).unwrap(),
            Kind::FormProduct
        );
    }

    #[test]
    fn snf_reports_cokernel() {
        let out = compute(
            Kind::Snf,
            &json!({"matrix": {"rows": 2, "cols": 2, "entries": [[2, 0], [0, 0]]}}),
        )
        .unwrap();
        assert_eq!(out["factors"], json!(["2", "0"]));
        assert_eq!(out["cokernel"], json!({"rank": 1, "torsion": ["2"]}));
        assert_eq!(out["minors_oracle"], json!("agrees"));
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let e = compute(Kind::Fermat, &json!({"n": 3, "m": 1})).unwrap_err();
        assert!(matches!(e, RunError::Schema(_)));
        let e = compute(Kind::Table, &json!({"name": "genus", "p": 2})).unwrap_err();
        assert!(matches!(e, RunError::Schema(_)));
    }

    #[test]
    fn engine_errors_carry_tags() {
        let e = compute(Kind::Table, &json!({"name": "genus", "p": 2, "n": 3})).unwrap_err();
        assert!(matches!(
            e,
            RunError::Compute {
                tag: "precondition",
                ..
            }
        ));
    }

    #[test]
    fn norm_of_hyperbola_units() {
        let out = compute(
            Kind::Norm,
            &json!({"n": 2, "f": "(x*y-1)*(x*y+1)", "factors": ["x*y-1", "x*y+1"], "element": "z - x*y + 1"}),
        )
        .unwrap();
        assert_eq!(out["is_unit"], json!(false));
        assert_eq!(out["is_unit_in_localization"], json!(true));
        assert_eq!(out["norm"]["text"], json!("-2*x*y + 2"));
        assert_eq!(out["localization_certificate"]["exponents"], json!([1, 0]));
    }
}
