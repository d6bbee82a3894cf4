//! Generalized Δ-complexes as presheaves on finite sets with injections:
//! validation, maps, coequalizers and isomorphism testing.

mod canonical;
mod complex;
mod maps;
mod tables;

pub use canonical::{canonical_form, canonical_label, is_isomorphic, is_isomorphism, CanonicalForm, Isomorphism};
pub use complex::{GeneralizedDeltaComplex, SimplexId};
pub(crate) use complex::OrderedCells;
pub use maps::{all_maps, coequalizer, copies, disjoint_union, ComplexMap};
pub use tables::{Cell, Relation, Violation};
pub(crate) use tables::Tables;

/// Euler characteristic of the geometric realization.
///
/// Computed on the double barycentric subdivision, which is unordered, as the
/// alternating sum of orbit counts.
pub fn euler_characteristic(c: &GeneralizedDeltaComplex) -> i64 {
    alternating_orbit_sum(&crate::cones::snc_reduce(c))
}

/// Alternating sum of the f-vector. Equals the Euler characteristic for
/// unordered complexes only.
pub fn alternating_orbit_sum(c: &GeneralizedDeltaComplex) -> i64 {
    c.f_vector()
        .iter()
        .enumerate()
        .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
        .sum()
}
