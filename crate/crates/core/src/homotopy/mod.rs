//! Elementary collapses and expansions, homology, and a bounded search for
//! simple homotopy equivalences.

mod homology;
mod moves;
mod search;
mod snf;

pub use homology::{free_orbit_homology, homology, rational_betti_direct, HomologyProfile};
pub(crate) use moves::remove_elements;
pub use moves::{collapse, collapse_inverse, expand, expansion_pair, free_faces, CollapsePair, ExpansionSpec};
pub use search::{
    apply_move, collapse_core, replay, simple_homotopy_equivalent, Budget, Move, MoveCertificate, Verdict,
};
