//! Cyclic covering rings `T = A[z]/(z^n - f)` over `A = Q(ζ_n)[x_1..x_m]`.
//!
//! The ground field is fixed to the cyclotomic field `Q(ζ_n)` with `ζ` the
//! residue of `t` modulo `Φ_n(t)`. A unit found here is a unit over any
//! extension; a search that finds nothing only speaks for this field.

mod cover;
mod cyclotomic;
mod pell;
mod poly;
mod search;
mod unipoly;

pub use cover::{CoverElement, CoverRing, LocalizationCertificate, NORM_CROSS_CHECK_MAX};
pub use cyclotomic::{cyclotomic_polynomial, euler_phi, CycNumber, CyclotomicField};
pub use pell::{pell_solve, pell_solve_poly, sqrt_polynomial_part, PellOutcome, PellSolution};
pub use poly::{Monomial, MultiPoly};
pub use search::{
    candidate_count, unit_search, SearchMethod, SearchOptions, UnitSearchOutcome,
    DEFAULT_CANDIDATE_LIMIT, DEFAULT_DEGREE_BOUND, DEFAULT_SUPPORT_BOUND, SEARCH_COEFFICIENTS,
};
pub use unipoly::UniPoly;
